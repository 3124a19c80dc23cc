#pragma once

#include "dbp/events.hpp"
#include "dbp/load_vector.hpp"
#include "dbp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace dbp {

struct OptResult {
    Time cost = 0;
    Schedule witness;
};

namespace detail {

class DynamicOptSearch {
public:
    explicit DynamicOptSearch(const Instance& inst) : inst_(inst), order_(inst.sorted_by_start()) {
        labels_.resize(order_.size());
    }

    OptResult run() {
        best_ = std::numeric_limits<Time>::max();
        search(0, 0);
        std::vector<std::pair<IntervalId, MachineId>> pairs;
        for (std::size_t i = 0; i < order_.size(); ++i) pairs.emplace_back(order_[i].id, best_labels_[i] + 1);
        return {best_ == std::numeric_limits<Time>::max() ? 0 : best_, schedule_from_assignment(inst_, pairs)};
    }

private:
    struct Bin {
        std::vector<Load> load;
        std::vector<int> cover;
    };

    void search(std::size_t i, Time cost) {
        if (cost >= best_) return;
        if (i == order_.size()) {
            best_ = cost;
            best_labels_ = labels_;
            return;
        }
        const Interval& iv = order_[i];
        Load w = inst_.scaled(iv.size);
        // Existing labels, then one fresh label; labels are interchangeable.
        for (std::size_t b = 0; b < bins_.size(); ++b) try_label(i, b, w, cost);
        std::size_t steps = static_cast<std::size_t>(inst_.horizon());
        bins_.push_back({std::vector<Load>(steps, 0), std::vector<int>(steps, 0)});
        try_label(i, bins_.size() - 1, w, cost);
        bins_.pop_back();
    }

    void try_label(std::size_t i, std::size_t b, Load w, Time cost) {
        const Interval& iv = order_[i];
        Bin& bin = bins_[b];
        Time added = 0;
        for (Time t = iv.start; t < iv.end; ++t) {
            std::size_t k = static_cast<std::size_t>(t - inst_.origin());
            if (bin.load[k] + w > inst_.scale()) return;
            added += bin.cover[k] == 0;
        }
        apply(bin, iv, w, +1);
        labels_[i] = b;
        search(i + 1, cost + added);
        apply(bins_[b], iv, w, -1);
    }

    void apply(Bin& bin, const Interval& iv, Load w, int sign) {
        for (Time t = iv.start; t < iv.end; ++t) {
            std::size_t k = static_cast<std::size_t>(t - inst_.origin());
            bin.load[k] += sign * w;
            bin.cover[k] += sign;
        }
    }

    const Instance& inst_;
    std::vector<Interval> order_;
    std::vector<Bin> bins_;
    std::vector<std::size_t> labels_;
    std::vector<std::size_t> best_labels_;
    Time best_ = 0;
};

}  // namespace detail

/// Minimum total active machine-time by exhaustive search. Intervals are
/// taken in start order and may join any used machine or one new machine.
inline OptResult brute_force_opt(const Instance& inst, std::size_t max_intervals = 8) {
    if (inst.size() > max_intervals)
        throw std::invalid_argument("brute force limited to " + std::to_string(max_intervals) + " intervals");
    if (inst.empty()) return {};
    return detail::DynamicOptSearch(inst).run();
}

/// Minimum number of unit bins for the given sizes (branch and bound).
inline std::size_t brute_force_static_opt(std::span<const Rational> sizes, std::size_t max_items = 10) {
    if (sizes.size() > max_items)
        throw std::invalid_argument("static brute force limited to " + std::to_string(max_items) + " items");
    Load scale = 1;
    for (const Rational& s : sizes) {
        if (s <= 0 || s > 1) throw std::invalid_argument("item size must be in (0,1]");
        scale = checked_lcm(scale, s.denominator());
    }
    std::vector<Load> items;
    for (const Rational& s : sizes) items.push_back(s.numerator() * (scale / s.denominator()));
    std::sort(items.rbegin(), items.rend());

    std::size_t best = items.size();
    std::vector<Load> bins;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (bins.size() >= best) return;
        if (i == items.size()) {
            best = bins.size();
            return;
        }
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (bins[b] + items[i] > scale) continue;
            bool seen = false;  // bins with equal fill are interchangeable
            for (std::size_t c = 0; c < b && !seen; ++c) seen = bins[c] == bins[b];
            if (seen) continue;
            bins[b] += items[i];
            go(i + 1);
            bins[b] -= items[i];
        }
        bins.push_back(items[i]);
        go(i + 1);
        bins.pop_back();
    };
    go(0);
    return best;
}

/// Sum of per-step loads; no schedule can cost less.
inline Rational lower_bound_l1(const Instance& inst, LoadMode mode = LoadMode::Raw) {
    return compute_load_vector(inst, mode).norm_1();
}

struct AdversaryStep {
    Time t = 0;
    std::size_t machines = 0;  // victim machines active after the step's arrivals
    std::size_t emitted = 0;
    bool completed = false;  // the victim reached the machine target
};

struct AdversaryResult {
    Instance instance;
    Rational w{0};
    double n_target = 0;
    std::size_t n_ceil = 0;
    std::vector<AdversaryStep> rounds;       // t = 1..mu
    std::vector<std::size_t> machine_counts;  // per step until the last departure
    Rational norm_1{0};
    Time horizon = 0;
    Time normalized_horizon = 0;
    Rational average_load{0};  // over the normalized horizon
    std::size_t victim_cost = 0;
};

/// Emits, at each step t = 1..mu and while the victim has fewer than
/// ceil(sqrt(2a ln mu)) active machines, requests of size sqrt(2a / ln mu)
/// with lengths 1, 2, 4, ... capped at mu. The victim sees each request
/// immediately. Afterwards the horizon is stretched until the average load
/// drops to a.
template <OnlineScheduler Victim>
AdversaryResult adversary_generate(double a, Time mu, Victim& victim) {
    if (mu < 2) throw std::invalid_argument("adversary needs mu >= 2");
    const double ln_mu = std::log(static_cast<double>(mu));
    if (!(a > 0) || a >= ln_mu / 2) throw std::invalid_argument("adversary needs 0 < a < ln(mu)/2");

    AdversaryResult r;
    const std::int64_t kDen = 1000000;
    r.w = Rational(static_cast<std::int64_t>(std::floor(std::sqrt(2 * a / ln_mu) * kDen)), kDen);
    r.n_target = std::sqrt(2 * a * ln_mu);
    r.n_ceil = static_cast<std::size_t>(std::ceil(r.n_target));
    const int max_i = static_cast<int>(std::ceil(std::log2(static_cast<double>(mu))));

    std::vector<Interval> emitted;
    std::vector<std::pair<Time, IntervalId>> pending;  // (end, id)
    IntervalId next_id = 1;
    auto depart_at = [&](Time t) {
        std::vector<IntervalId> due;
        for (auto& [end, id] : pending)
            if (end == t) due.push_back(id);
        std::sort(due.begin(), due.end());
        for (IntervalId id : due) victim.depart(id, t);
        std::erase_if(pending, [t](const auto& p) { return p.first == t; });
    };

    Time t = 1;
    for (; t <= mu; ++t) {
        depart_at(t);
        AdversaryStep step{t, 0, 0, false};
        for (int i = 0; i <= max_i && victim.active_machines() < r.n_ceil; ++i) {
            Time len = std::min<Time>(Time{1} << i, mu);
            Interval iv{next_id++, t, t + len, r.w};
            victim.arrive(iv.id, t, iv.size);
            emitted.push_back(iv);
            pending.emplace_back(iv.end, iv.id);
            ++step.emitted;
        }
        step.machines = victim.active_machines();
        step.completed = step.machines >= r.n_ceil;
        r.rounds.push_back(step);
        r.machine_counts.push_back(step.machines);
    }
    for (; !pending.empty(); ++t) {
        depart_at(t);
        if (!pending.empty()) r.machine_counts.push_back(victim.active_machines());
    }

    r.instance = Instance(std::move(emitted));
    r.norm_1 = lower_bound_l1(r.instance);
    r.horizon = r.instance.horizon();
    r.normalized_horizon = r.horizon;
    if (r.horizon > 0 && r.norm_1 / r.horizon > Rational(static_cast<std::int64_t>(std::llround(a * kDen)), kDen)) {
        Rational target(static_cast<std::int64_t>(std::llround(a * kDen)), kDen);
        r.normalized_horizon = std::max(r.horizon, floor(r.norm_1 / target));
    }
    r.average_load = r.normalized_horizon > 0 ? r.norm_1 / r.normalized_horizon : Rational(0);
    for (std::size_t c : r.machine_counts) r.victim_cost += c;
    return r;
}

}  // namespace dbp
