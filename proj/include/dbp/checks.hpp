#pragma once

#include "dbp/bounds.hpp"
#include "dbp/combined.hpp"
#include "dbp/online_covering.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <string>

namespace dbp {

/// Per-instance bound for dynamic First-Fit in terms of the ceiled load
/// vector: ||v||_0 when ||v||_inf <= 1, ||v||_inf ||v||_0 for uniform
/// sizes, (||v||_inf / (1 - beta) + 1) ||v||_0 when beta <= 1/2, and
/// 4 ||v||_inf ||v||_0 otherwise.
inline Rational first_fit_bound(const Instance& inst) {
    LoadVector v = compute_load_vector(inst, LoadMode::Ceiled);
    Rational n0(v.norm_0());
    Rational ninf = v.norm_inf();
    if (ninf <= 1) return n0;
    if (inst.uniform()) return ninf * n0;
    if (inst.beta() <= Rational(1, 2)) return (ninf / (1 - inst.beta()) + 1) * n0;
    return 4 * ninf * n0;
}

/// Load of each class routed to the shared First-Fit never exceeds q_j.
inline std::optional<std::string> check_first_fit_class_loads(const Instance& inst, const CombinedResult& r) {
    if (inst.empty()) return std::nullopt;
    LengthClasses classes(r.v_avg);
    std::map<int, std::vector<Rational>> load;
    for (const CombinedRoute& route : r.routes) {
        if (!route.first_fit) continue;
        const Interval& iv = inst.by_id(route.id);
        auto& v = load[route.cls];
        if (v.empty()) v.assign(static_cast<std::size_t>(inst.horizon()), Rational(0));
        for (Time t = iv.start; t < iv.end; ++t) v[static_cast<std::size_t>(t - inst.origin())] += iv.size;
    }
    for (const auto& [j, v] : load)
        for (std::size_t t = 0; t < v.size(); ++t)
            if (static_cast<long double>(to_double(v[t])) > classes.threshold(j) + kClassTolerance)
                return "class " + std::to_string(j) + " First-Fit load " + to_string(v[t]) + " exceeds q_j at t=" +
                       std::to_string(inst.origin() + static_cast<Time>(t));
    return std::nullopt;
}

/// With lengths normalized so the shortest is 1, the largest class n that
/// received an interval satisfies sum_{i<n} eps_i <= ln mu.
inline std::optional<std::string> check_class_count(const Instance& inst, const CombinedResult& r) {
    if (inst.empty()) return std::nullopt;
    if (inst.min_length() != 1) return "class-count check needs a shortest length of 1";
    LengthClasses classes(r.v_avg);
    long double s = classes.offset(r.max_class);
    long double ln_mu = std::log(static_cast<long double>(inst.max_length()));
    if (s > ln_mu + kClassTolerance)
        return "largest class " + std::to_string(r.max_class) + " has offset " + std::to_string(static_cast<double>(s)) +
               " > ln mu " + std::to_string(static_cast<double>(ln_mu));
    return std::nullopt;
}

/// Accepted load of every filter copy lies within
/// [min{(theta' - Delta_t)^+, offered_t}, cap] pointwise, where theta' is 1
/// (uniform) or 1/2 - beta_n and cap is 2 (uniform) or 1, and Delta is the
/// copy's overestimate minus the load actually offered to it. Accepted loads
/// only grow as events are processed, so the cap holding on the final state
/// means it held after every event; the floor is a statement about settled
/// steps and is checked on the final state.
inline std::optional<std::string> check_accepted_load_sandwich(const OnlineCoveringResult& r) {
    const Rational cap = r.uniform ? Rational(2) : Rational(1);
    const Rational base = r.uniform ? Rational(1) : Rational(1, 2) - r.beta_n;
    for (std::size_t i = 0; i < r.copies.size(); ++i) {
        const CoverCopySummary& c = r.copies[i];
        for (std::size_t t = 0; t < c.accepted.size(); ++t) {
            Rational delta = c.overestimate[t] - c.offered[t];
            std::string where = "copy " + std::to_string(i + 1) + " step " + std::to_string(t);
            if (delta < 0) return where + ": overestimate below offered load";
            if (c.accepted[t] > cap) return where + ": accepted load " + to_string(c.accepted[t]) + " above cap";
            Rational floor_value = std::min(positive_part(base - delta), c.offered[t]);
            if (c.accepted[t] < floor_value)
                return where + ": accepted load " + to_string(c.accepted[t]) + " below " + to_string(floor_value);
        }
    }
    return std::nullopt;
}

/// The first j copies together accept at least min{j, v_t} (uniform) or
/// min{(j (1/2 - beta_n) - v^w_t)^+, v^n_t} (otherwise) at every step, where
/// v^w and v^n are the loads of intervals above and at most 1/4.
inline std::optional<std::string> check_prefix_coverage(const Instance& inst, const OnlineCoveringResult& r) {
    const std::size_t steps = static_cast<std::size_t>(inst.horizon());
    std::vector<Rational> wide(steps, Rational(0)), narrow(steps, Rational(0));
    for (const Interval& iv : inst) {
        auto& v = (!r.uniform && iv.size > Rational(1, 4)) ? wide : narrow;
        for (Time t = iv.start; t < iv.end; ++t) v[static_cast<std::size_t>(t - inst.origin())] += iv.size;
    }
    std::vector<Rational> prefix(steps, Rational(0));
    for (std::size_t j = 1; j <= r.copies.size(); ++j) {
        const CoverCopySummary& c = r.copies[j - 1];
        for (std::size_t t = 0; t < steps; ++t) {
            prefix[t] += c.accepted[t];
            Rational need = r.uniform ? std::min(Rational(static_cast<std::int64_t>(j)), narrow[t])
                                      : std::min(positive_part(static_cast<std::int64_t>(j) * r.step - wide[t]), narrow[t]);
            if (prefix[t] < need)
                return "first " + std::to_string(j) + " copies accept " + to_string(prefix[t]) + " < " + to_string(need) +
                       " at step " + std::to_string(t);
        }
    }
    for (std::size_t t = 0; t < steps; ++t)
        if (prefix[t] != narrow[t]) return "intervals left unaccepted at step " + std::to_string(t);
    return std::nullopt;
}

}  // namespace dbp
