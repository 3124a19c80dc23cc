#pragma once

#include "dbp/events.hpp"
#include "dbp/packers.hpp"
#include "dbp/schedule.hpp"

#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace dbp {

/// Turns a bounded-space static packer into a non-clairvoyant dynamic
/// scheduler. Each static bin is bound to a machine. When the last interval on
/// a machine departs while its bin is still active in the packer, the machine
/// is frozen: it costs nothing, and the next placement into the bin starts a
/// fresh machine. Once the bin is closed, the machine closes for good.
class DynamicTransform {
public:
    enum class State { Open, Frozen, Closed };

    DynamicTransform(std::unique_ptr<BoundedSpacePacker> packer, ScheduleBuilder& builder)
        : packer_(std::move(packer)), builder_(&builder) {
        if (!packer_) throw std::invalid_argument("transform needs a packer");
    }

    MachineId arrive(IntervalId id, Time /*now*/, const Rational& size) {
        MachineId placed = -1;
        for (const PackEvent& e : packer_->place(id, size)) {
            switch (e.kind) {
                case PackEvent::Kind::Open:
                    bins_.emplace(e.bin, Binding{builder_->open_machine(), State::Open, 0});
                    ++lineages_;
                    break;
                case PackEvent::Kind::Close: {
                    Binding& b = bins_.at(e.bin);
                    if (b.state == State::Frozen) b.state = State::Closed;
                    break;
                }
                case PackEvent::Kind::Place: {
                    Binding& b = bins_.at(e.bin);
                    if (b.state == State::Closed) throw std::logic_error("placement into a closed machine");
                    if (b.state == State::Frozen) {
                        b.machine = builder_->open_machine();
                        b.state = State::Open;
                        ++reopens_;
                    }
                    ++b.live;
                    builder_->assign(id, b.machine);
                    live_.emplace(id, e.bin);
                    placed = b.machine;
                    break;
                }
            }
        }
        return placed;
    }

    void depart(IntervalId id, Time /*now*/) {
        auto it = live_.find(id);
        if (it == live_.end()) throw std::logic_error("departure of an interval the transform does not hold");
        Binding& b = bins_.at(it->second);
        if (--b.live == 0) b.state = packer_->is_active(it->second) ? State::Frozen : State::Closed;
        live_.erase(it);
    }

    std::size_t active_machines() const {
        std::size_t n = 0;
        for (const auto& [bin, b] : bins_) n += b.live > 0;
        return n;
    }

    State state_of_bin(BinId bin) const { return bins_.at(bin).state; }
    std::size_t bins_opened() const { return packer_->bins_opened(); }
    /// Machines opened because the packer opened a bin.
    std::size_t lineages() const { return lineages_; }
    /// Machines opened to replace a frozen one.
    std::size_t reopens() const { return reopens_; }
    const BoundedSpacePacker& packer() const { return *packer_; }

private:
    struct Binding {
        MachineId machine;
        State state;
        int live;
    };

    std::unique_ptr<BoundedSpacePacker> packer_;
    ScheduleBuilder* builder_;
    std::unordered_map<BinId, Binding> bins_;
    std::unordered_map<IntervalId, BinId> live_;
    std::size_t lineages_ = 0;
    std::size_t reopens_ = 0;
};

static_assert(OnlineScheduler<DynamicTransform>);

struct TransformResult {
    Schedule schedule;
    std::size_t bins_opened = 0;
    std::size_t lineages = 0;
    std::size_t reopens = 0;
};

inline TransformResult dynamic_transform_detailed(const Instance& inst, const PackerFactory& factory) {
    ScheduleBuilder builder;
    DynamicTransform tr(factory(), builder);
    replay(
        inst, [&](const Interval& iv) { tr.arrive(iv.id, iv.start, iv.size); },
        [&](const Interval& iv) { tr.depart(iv.id, iv.end); });
    return {builder.build(inst), tr.bins_opened(), tr.lineages(), tr.reopens()};
}

inline Schedule dynamic_transform(const Instance& inst, const PackerFactory& factory) {
    return dynamic_transform_detailed(inst, factory).schedule;
}

}  // namespace dbp
