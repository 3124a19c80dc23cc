#pragma once

#include "dbp/instance.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace dbp {

namespace detail {

struct WeightedInterval {
    const Interval* interval;
    Load weight;
};

// Core of the intersecting-intervals selector on integer weights. Every member
// must contain a common step and the members' total weight must exceed
// `alpha`. Peels the earliest-starting prefix and the latest-ending suffix
// whose weights sum to at most alpha/2 each; any survivor sees more than
// alpha/2 of the set's load across its whole span. Returns the survivor with
// the smallest id.
inline const Interval* select_intersecting(std::vector<WeightedInterval> members, Load alpha) {
    Load total = 0;
    for (const auto& m : members) total += m.weight;
    if (total <= alpha) throw std::invalid_argument("set load does not exceed alpha");

    std::vector<char> peeled(members.size(), 0);
    std::vector<std::size_t> order(members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return by_start_then_id(*members[a].interval, *members[b].interval);
    });
    Load prefix = 0;
    for (std::size_t i : order) {
        if (2 * (prefix + members[i].weight) > alpha) break;
        prefix += members[i].weight;
        peeled[i] = 1;
    }

    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Interval& x = *members[a].interval;
        const Interval& y = *members[b].interval;
        return x.end != y.end ? x.end > y.end : x.id < y.id;
    });
    Load suffix = 0;
    for (std::size_t i : order) {
        if (2 * (suffix + members[i].weight) > alpha) break;
        suffix += members[i].weight;
        peeled[i] = 1;
    }

    const Interval* best = nullptr;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (!peeled[i] && (best == nullptr || members[i].interval->id < best->id)) best = members[i].interval;
    if (best == nullptr) throw std::logic_error("intersecting-interval selection left no survivor");
    return best;
}

}  // namespace detail

/// Given intervals that all contain step `t` and whose total size exceeds
/// `alpha`, returns a member I such that the set's own load stays strictly
/// above alpha/2 at every step of I.
inline Interval select_intersecting_interval(std::span<const Interval> active, Time t, const Rational& alpha) {
    if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
    Load scale = 4;
    scale = checked_lcm(scale, alpha.denominator());
    for (const Interval& iv : active) {
        if (!iv.contains(t))
            throw std::invalid_argument("interval " + std::to_string(iv.id) + " does not contain the anchor step");
        scale = checked_lcm(scale, iv.size.denominator());
    }
    std::vector<detail::WeightedInterval> members;
    members.reserve(active.size());
    for (const Interval& iv : active)
        members.push_back({&iv, iv.size.numerator() * (scale / iv.size.denominator())});
    return *detail::select_intersecting(std::move(members), alpha.numerator() * (scale / alpha.denominator()));
}

}  // namespace dbp
