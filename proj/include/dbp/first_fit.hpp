#pragma once

#include "dbp/events.hpp"
#include "dbp/schedule.hpp"

#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dbp {

/// Dynamic First-Fit. An arriving interval goes to the open machine with the
/// earliest opening time that can take it; otherwise a new machine opens. A
/// machine closes when its last interval departs and is never reused.
///
/// Every interval already on a machine started no later than the arrival, so
/// a machine's committed load is non-increasing from the arrival on. Fitting
/// at the arrival step is therefore the same as fitting over the whole span,
/// and no end time is needed to decide.
class FirstFit {
public:
    explicit FirstFit(ScheduleBuilder& builder) : builder_(&builder) {}

    MachineId arrive(IntervalId id, Time now, const Rational& size) {
        if (size <= 0 || size > 1) throw std::invalid_argument("interval size must be in (0,1]");
        now_ = now;
        OpenMachine* target = nullptr;
        for (OpenMachine& m : open_)
            if (m.load + size <= 1) {
                target = &m;
                break;
            }
        if (target == nullptr) {
            open_.push_back({builder_->open_machine(), now, Rational(0), 0});
            target = &open_.back();
        }
        target->load += size;
        ++target->live;
        builder_->assign(id, target->id);
        live_.emplace(id, Live{target->id, size});
        return target->id;
    }

    void depart(IntervalId id, Time now) {
        auto it = live_.find(id);
        if (it == live_.end()) throw std::logic_error("departure of an interval First-Fit does not hold");
        now_ = now;
        for (auto m = open_.begin(); m != open_.end(); ++m) {
            if (m->id != it->second.machine) continue;
            m->load -= it->second.size;
            if (--m->live == 0) open_.erase(m);
            break;
        }
        live_.erase(it);
    }

    std::size_t active_machines() const { return open_.size(); }
    bool holds(IntervalId id) const { return live_.count(id) != 0; }

    /// Opening times of the currently open machines, in First-Fit order.
    std::vector<Time> opening_times() const {
        std::vector<Time> out;
        for (const auto& m : open_) out.push_back(m.opened);
        return out;
    }

private:
    struct OpenMachine {
        MachineId id;
        Time opened;
        Rational load;
        int live;
    };
    struct Live {
        MachineId machine;
        Rational size;
    };

    ScheduleBuilder* builder_;
    std::vector<OpenMachine> open_;
    std::unordered_map<IntervalId, Live> live_;
    Time now_ = 0;
};

static_assert(OnlineScheduler<FirstFit>);

/// Runs First-Fit over the instance's event stream into `builder`.
inline void first_fit_into(const Instance& inst, ScheduleBuilder& builder) {
    FirstFit ff(builder);
    replay(
        inst, [&](const Interval& iv) { ff.arrive(iv.id, iv.start, iv.size); },
        [&](const Interval& iv) { ff.depart(iv.id, iv.end); });
}

inline Schedule first_fit_dynamic(const Instance& inst) {
    ScheduleBuilder builder;
    first_fit_into(inst, builder);
    return builder.build(inst);
}

}  // namespace dbp
