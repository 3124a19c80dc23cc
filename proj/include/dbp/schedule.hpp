#pragma once

#include "dbp/instance.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dbp {

using MachineId = std::int64_t;

/// Half-open activity span [begin, end).
struct Segment {
    Time begin = 0;
    Time end = 0;
    Time length() const { return end - begin; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct Machine {
    MachineId id = 0;
    std::vector<Segment> segments;        // disjoint, sorted
    std::vector<IntervalId> intervals;    // assigned requests
};

/// Sorted, merged union of the spans [start, end).
inline std::vector<Segment> union_of_spans(std::vector<Segment> spans) {
    std::sort(spans.begin(), spans.end(), [](const Segment& a, const Segment& b) { return a.begin < b.begin; });
    std::vector<Segment> out;
    for (const Segment& s : spans) {
        if (!out.empty() && s.begin <= out.back().end)
            out.back().end = std::max(out.back().end, s.end);
        else
            out.push_back(s);
    }
    return out;
}

class Schedule {
public:
    Schedule() = default;
    explicit Schedule(std::vector<Machine> machines) : machines_(std::move(machines)) {
        std::sort(machines_.begin(), machines_.end(), [](const Machine& a, const Machine& b) { return a.id < b.id; });
        for (const Machine& m : machines_)
            for (IntervalId id : m.intervals) assignment_.emplace(id, m.id);
    }

    std::span<const Machine> machines() const { return machines_; }
    std::size_t machine_count() const { return machines_.size(); }

    std::optional<MachineId> machine_of(IntervalId id) const {
        auto it = assignment_.find(id);
        if (it == assignment_.end()) return std::nullopt;
        return it->second;
    }
    const std::unordered_map<IntervalId, MachineId>& assignment() const { return assignment_; }

    /// Number of machines active at time t.
    std::size_t active_at(Time t) const {
        std::size_t n = 0;
        for (const Machine& m : machines_)
            for (const Segment& s : m.segments)
                if (s.begin <= t && t < s.end) ++n;
        return n;
    }

    Time cost() const;

private:
    std::vector<Machine> machines_;
    std::unordered_map<IntervalId, MachineId> assignment_;
};

/// Total active machine-time. Throws std::invalid_argument when a machine's
/// segments overlap or are out of order.
inline Time schedule_cost(const Schedule& schedule) {
    Time total = 0;
    for (const Machine& m : schedule.machines()) {
        for (std::size_t i = 0; i < m.segments.size(); ++i) {
            const Segment& s = m.segments[i];
            if (s.end <= s.begin)
                throw std::invalid_argument("machine " + std::to_string(m.id) + " has an empty segment");
            if (i > 0 && s.begin < m.segments[i - 1].end)
                throw std::invalid_argument("machine " + std::to_string(m.id) + " has overlapping segments");
            total += s.length();
        }
    }
    return total;
}

inline Time Schedule::cost() const { return schedule_cost(*this); }

/// Collects interval-to-machine decisions from one or more schedulers and
/// turns them into a Schedule whose machine segments are the union of the
/// assigned spans. Machine ids are allocated from 1 upwards.
class ScheduleBuilder {
public:
    MachineId open_machine() {
        MachineId id = next_id_++;
        members_[id];
        return id;
    }

    void assign(IntervalId interval, MachineId machine) {
        auto it = members_.find(machine);
        if (it == members_.end()) throw std::logic_error("assignment to a machine that was never opened");
        it->second.push_back(interval);
    }

    /// Copies every machine of `other` under fresh ids.
    void absorb(const Schedule& other) {
        for (const Machine& m : other.machines()) {
            MachineId id = open_machine();
            for (IntervalId iv : m.intervals) assign(iv, id);
        }
    }

    std::size_t machines_opened() const { return members_.size(); }

    Schedule build(const Instance& inst) const {
        std::vector<Machine> machines;
        machines.reserve(members_.size());
        for (const auto& [id, ivs] : members_) {
            if (ivs.empty()) continue;
            Machine m;
            m.id = id;
            m.intervals = ivs;
            std::vector<Segment> spans;
            spans.reserve(ivs.size());
            for (IntervalId iv : ivs) {
                const Interval& x = inst.by_id(iv);
                spans.push_back({x.start, x.end});
            }
            m.segments = union_of_spans(std::move(spans));
            machines.push_back(std::move(m));
        }
        return Schedule(std::move(machines));
    }

private:
    MachineId next_id_ = 1;
    std::map<MachineId, std::vector<IntervalId>> members_;
};

/// Build a schedule from explicit (interval, machine) pairs.
inline Schedule schedule_from_assignment(const Instance& inst,
                                         std::span<const std::pair<IntervalId, MachineId>> pairs) {
    std::map<MachineId, std::vector<IntervalId>> groups;
    for (const auto& [iv, m] : pairs) groups[m].push_back(iv);
    std::vector<Machine> machines;
    for (auto& [id, ivs] : groups) {
        Machine m;
        m.id = id;
        std::vector<Segment> spans;
        for (IntervalId iv : ivs)
            if (inst.has_id(iv)) spans.push_back({inst.by_id(iv).start, inst.by_id(iv).end});
        m.segments = union_of_spans(std::move(spans));
        m.intervals = std::move(ivs);
        machines.push_back(std::move(m));
    }
    return Schedule(std::move(machines));
}

struct Violation {
    enum class Kind { Unassigned, DuplicateAssignment, UnknownInterval, Overload, SegmentMismatch, MalformedSegments };
    Kind kind;
    std::optional<MachineId> machine;
    std::optional<IntervalId> interval;
    std::optional<Time> time;
    Rational load{0};  // total load on the machine at `time` for Overload
    std::string message;
};

/// Checks that every interval is placed exactly once, that no machine exceeds
/// unit capacity at any step, and that machine segments equal the union of
/// their intervals' spans. Returns the first violation found.
inline std::optional<Violation> validate_schedule(const Instance& inst, const Schedule& schedule) {
    using K = Violation::Kind;
    std::unordered_map<IntervalId, int> seen;
    for (const Machine& m : schedule.machines()) {
        for (IntervalId id : m.intervals) {
            if (!inst.has_id(id))
                return Violation{K::UnknownInterval, m.id, id, std::nullopt, Rational(0),
                                 "interval " + std::to_string(id) + " is not part of the instance"};
            if (++seen[id] > 1)
                return Violation{K::DuplicateAssignment, m.id, id, std::nullopt, Rational(0),
                                 "interval " + std::to_string(id) + " assigned more than once"};
        }
    }
    for (const Interval& iv : inst)
        if (!seen.count(iv.id))
            return Violation{K::Unassigned, std::nullopt, iv.id, std::nullopt, Rational(0),
                             "interval " + std::to_string(iv.id) + " unassigned"};

    for (const Machine& m : schedule.machines()) {
        // Capacity: sweep the machine's start/end events.
        std::vector<std::pair<Time, Load>> events;
        events.reserve(2 * m.intervals.size());
        std::vector<Segment> spans;
        for (IntervalId id : m.intervals) {
            std::size_t i = inst.index_of(id);
            events.emplace_back(inst[i].start, inst.scaled_size(i));
            events.emplace_back(inst[i].end, -inst.scaled_size(i));
            spans.push_back({inst[i].start, inst[i].end});
        }
        std::sort(events.begin(), events.end());
        Load load = 0;
        for (std::size_t e = 0; e < events.size();) {
            Time t = events[e].first;
            while (e < events.size() && events[e].first == t) load += events[e++].second;
            if (load > inst.scale()) {
                Rational total(load, inst.scale());
                return Violation{K::Overload, m.id, std::nullopt, t, total,
                                 "machine " + std::to_string(m.id) + " overloaded at t=" + std::to_string(t) +
                                     " (load " + to_string(total) + ", overload " + to_string(total - 1) + ")"};
            }
        }
        for (std::size_t s = 0; s < m.segments.size(); ++s) {
            if (m.segments[s].end <= m.segments[s].begin ||
                (s > 0 && m.segments[s].begin <= m.segments[s - 1].end))
                return Violation{K::MalformedSegments, m.id, std::nullopt, m.segments[s].begin, Rational(0),
                                 "machine " + std::to_string(m.id) + " has malformed segments"};
        }
        if (union_of_spans(std::move(spans)) != m.segments)
            return Violation{K::SegmentMismatch, m.id, std::nullopt, std::nullopt, Rational(0),
                             "machine " + std::to_string(m.id) + " segments differ from its intervals' spans"};
    }
    return std::nullopt;
}

}  // namespace dbp
