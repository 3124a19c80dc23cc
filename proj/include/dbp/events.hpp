#pragma once

#include "dbp/instance.hpp"

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <vector>

namespace dbp {

struct Event {
    enum class Kind { Departure, Arrival };
    Kind kind;
    Time time;
    const Interval* interval;
};

/// Arrival/departure stream of an instance. At equal times departures come
/// first; within a kind, events are ordered by interval id. Simultaneous
/// arrivals are thus separate micro-events processed one after another.
inline std::vector<Event> event_stream(const Instance& inst) {
    std::vector<Event> events;
    events.reserve(2 * inst.size());
    for (const Interval& iv : inst) {
        events.push_back({Event::Kind::Arrival, iv.start, &iv});
        events.push_back({Event::Kind::Departure, iv.end, &iv});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return a.kind == Event::Kind::Departure;
        return a.interval->id < b.interval->id;
    });
    return events;
}

template <class OnArrival, class OnDeparture>
void replay(const Instance& inst, OnArrival&& on_arrival, OnDeparture&& on_departure) {
    for (const Event& e : event_stream(inst)) {
        if (e.kind == Event::Kind::Arrival)
            on_arrival(*e.interval);
        else
            on_departure(*e.interval);
    }
}

/// A non-clairvoyant online scheduler: placement sees only id, arrival time
/// and size; departures are announced separately.
template <class S>
concept OnlineScheduler = requires(S s, IntervalId id, Time t, Rational w) {
    s.arrive(id, t, w);
    s.depart(id, t);
    { s.active_machines() } -> std::convertible_to<std::size_t>;
};

}  // namespace dbp
