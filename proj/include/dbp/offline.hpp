#pragma once

#include "dbp/first_fit.hpp"
#include "dbp/intersecting.hpp"
#include "dbp/load_vector.hpp"
#include "dbp/packers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace dbp {

/// A subset of a working set whose load stays within [min(v_t, lower), upper]
/// at every step, where v is the working set's load.
struct Cover {
    std::vector<IntervalId> members;
    Rational lower{0};
    Rational upper{0};
};

struct CoverRound {
    std::vector<IntervalId> members;
    std::size_t machines = 0;  // machines First-Fit opened for this cover
};

struct CoveringResult {
    Schedule schedule;
    std::vector<IntervalId> dedicated;  // intervals given their own machine
    std::vector<CoverRound> rounds;
};

/// Bundle of intervals that fits one machine, anchored at a step of high load.
struct DenseSet {
    std::vector<IntervalId> members;
    Time anchor = 0;
    long double class_length = 0;  // shortest length of the chosen length class
    long double epsilon = 0;
    long double density_threshold = 0;  // 2 + 4 ln(mu) of the working set
    Rational anchor_load{0};
    Rational size{0};
    Rational c{1};  // members' total size is at least 1/c
    Time span = 0;  // max end - min start of the members
};

/// No start/length bucket reached unit load. The counting argument allows
/// this when integer rounding makes the real bucket count exceed its estimate.
struct NoDenseBucket : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DensityResult {
    Schedule schedule;
    std::vector<DenseSet> dense_sets;
    std::size_t fallbacks = 0;  // extractions abandoned with NoDenseBucket
    Time residue_cost = 0;
};

namespace detail {

struct Working {
    const Instance* inst;
    std::vector<std::size_t> members;  // indices into *inst

    Rational beta() const {
        Rational b(0);
        for (std::size_t i : members) b = std::max(b, (*inst)[i].size);
        return b;
    }
    Time min_length() const {
        Time m = 0;
        for (std::size_t i : members)
            if (m == 0 || (*inst)[i].length() < m) m = (*inst)[i].length();
        return m;
    }
    Time max_length() const {
        Time m = 0;
        for (std::size_t i : members) m = std::max(m, (*inst)[i].length());
        return m;
    }
    long double ln_mu() const {
        if (members.empty()) return 0;
        return std::log(static_cast<long double>(max_length()) / static_cast<long double>(min_length()));
    }
    std::vector<Load> loads() const { return raw_loads(*inst, members, inst->origin(), inst->horizon()); }
    void remove(const std::vector<std::size_t>& gone) {
        std::vector<char> drop(inst->size(), 0);
        for (std::size_t i : gone) drop[i] = 1;
        std::erase_if(members, [&](std::size_t i) { return drop[i] != 0; });
    }
};

inline Working whole(const Instance& inst) {
    Working w{&inst, {}};
    w.members.resize(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) w.members[i] = i;
    return w;
}

// Peels a [lower, upper]-cover out of `w`. Removal only lowers loads, so a
// step once at or below `upper` stays there and the scan moves left to right.
inline std::vector<std::size_t> peel_cover(const Working& w, Load upper) {
    const Instance& inst = *w.inst;
    std::vector<Load> load = w.loads();
    std::vector<char> in(inst.size(), 0);
    for (std::size_t i : w.members) in[i] = 1;

    for (std::size_t t = 0; t < load.size(); ++t) {
        Time at = inst.origin() + static_cast<Time>(t);
        while (load[t] > upper) {
            std::vector<WeightedInterval> active;
            for (std::size_t i : w.members)
                if (in[i] && inst[i].contains(at)) active.push_back({&inst[i], inst.scaled_size(i)});
            const Interval* drop = select_intersecting(std::move(active), upper);
            std::size_t idx = inst.index_of(drop->id);
            in[idx] = 0;
            for (Time s = drop->start; s < drop->end; ++s)
                load[static_cast<std::size_t>(s - inst.origin())] -= inst.scaled_size(idx);
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i : w.members)
        if (in[i]) out.push_back(i);
    return out;
}

inline std::pair<Rational, Rational> cover_bounds(bool uniform, const Rational& beta) {
    if (uniform) return {Rational(1), Rational(2)};
    return {Rational(1, 2) - beta, Rational(1)};
}

inline CoveringResult covering(const Working& start, bool uniform, ScheduleBuilder& builder) {
    const Instance& inst = *start.inst;
    CoveringResult result;
    Working w = start;
    if (!uniform) {
        std::vector<std::size_t> big;
        for (std::size_t i : w.members)
            if (inst[i].size > Rational(1, 4)) big.push_back(i);
        for (std::size_t i : big) {
            builder.assign(inst[i].id, builder.open_machine());
            result.dedicated.push_back(inst[i].id);
        }
        w.remove(big);
    }
    while (!w.members.empty()) {
        Rational upper = cover_bounds(uniform, w.beta()).second;
        std::vector<std::size_t> cover = peel_cover(w, inst.scaled(upper));
        if (cover.empty()) throw std::logic_error("cover extraction returned an empty set");

        CoverRound round;
        std::size_t before = builder.machines_opened();
        FirstFit ff(builder);
        std::vector<Interval> part;
        for (std::size_t i : cover) {
            part.push_back(inst[i]);
            round.members.push_back(inst[i].id);
        }
        replay(
            Instance(std::move(part)), [&](const Interval& iv) { ff.arrive(iv.id, iv.start, iv.size); },
            [&](const Interval& iv) { ff.depart(iv.id, iv.end); });
        round.machines = builder.machines_opened() - before;
        result.rounds.push_back(std::move(round));
        w.remove(cover);
    }
    return result;
}

inline Rational dense_c(bool uniform, const Rational& beta) {
    if (uniform) return Rational(1);
    if (beta >= Rational(1, 2)) return Rational(2);
    return 1 / (1 - beta);
}

inline DenseSet dense_set(const Working& w, Time t, bool uniform) {
    const Instance& inst = *w.inst;
    std::vector<std::size_t> active;
    Load vt = 0;
    for (std::size_t i : w.members)
        if (inst[i].contains(t)) {
            active.push_back(i);
            vt += inst.scaled_size(i);
        }
    const long double D = 2 + 4 * w.ln_mu();
    const long double load = static_cast<long double>(vt) / static_cast<long double>(inst.scale());
    if (load < D - 1e-12L) throw std::invalid_argument("load at anchor step is below the density threshold");

    const long double eps = std::sqrt(D / load);
    const long double min_len = static_cast<long double>(w.min_length());

    struct Key {
        int cls;
        std::int64_t sub;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::vector<std::size_t>> buckets;
    std::map<Key, Load> bucket_load;
    std::map<int, long double> class_len;
    for (std::size_t i : active) {
        const long double len = static_cast<long double>(inst[i].length());
        int cls = 1;
        while (min_len * std::pow(1 + eps, static_cast<long double>(cls)) <= len) ++cls;
        const long double ell = min_len * std::pow(1 + eps, static_cast<long double>(cls - 1));
        const long double lo = static_cast<long double>(t) - ell * (1 + eps);
        auto sub = static_cast<std::int64_t>(std::ceil((static_cast<long double>(inst[i].start) - lo) / (eps * ell)));
        sub = std::max<std::int64_t>(sub, 1);
        Key key{cls, sub};
        buckets[key].push_back(i);
        bucket_load[key] += inst.scaled_size(i);
        class_len[cls] = ell;
    }

    const Key* best = nullptr;
    Load best_load = -1;
    for (const auto& [key, l] : bucket_load)
        if (l > best_load) {
            best = &key;
            best_load = l;
        }
    if (best == nullptr || best_load < inst.scale())
        throw NoDenseBucket("no bucket at step " + std::to_string(t) + " carries unit load");

    std::vector<std::size_t> pool = buckets.at(*best);
    std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
        if (inst[a].size != inst[b].size) return inst[a].size > inst[b].size;
        return inst[a].id < inst[b].id;
    });

    DenseSet ds;
    ds.anchor = t;
    ds.class_length = class_len.at(best->cls);
    ds.epsilon = eps;
    ds.density_threshold = D;
    ds.anchor_load = Rational(vt, inst.scale());
    ds.c = dense_c(uniform, w.beta());
    Load taken = 0;
    Time lo = 0, hi = 0;
    for (std::size_t i : pool) {
        if (uniform && static_cast<std::int64_t>(ds.members.size()) == *inst.uniform_granularity()) break;
        if (taken + inst.scaled_size(i) > inst.scale()) continue;
        taken += inst.scaled_size(i);
        if (ds.members.empty()) {
            lo = inst[i].start;
            hi = inst[i].end;
        }
        lo = std::min(lo, inst[i].start);
        hi = std::max(hi, inst[i].end);
        ds.members.push_back(inst[i].id);
    }
    ds.size = Rational(taken, inst.scale());
    ds.span = hi - lo;
    return ds;
}

inline std::vector<std::size_t> indices_of(const Instance& inst, const std::vector<IntervalId>& ids) {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (IntervalId id : ids) out.push_back(inst.index_of(id));
    return out;
}

}  // namespace detail

/// Uniform working sets yield a [1,2]-cover; otherwise every size must be at
/// most 1/2 and the result is a [1/2 - beta, 1]-cover.
inline Cover extract_cover(const Instance& working) {
    bool uniform = working.uniform();
    if (!uniform && working.beta() > Rational(1, 2))
        throw std::invalid_argument("cover extraction needs sizes of at most 1/2");
    auto [lower, upper] = detail::cover_bounds(uniform, working.beta());
    Cover c;
    c.lower = lower;
    c.upper = upper;
    for (std::size_t i : detail::peel_cover(detail::whole(working), working.scaled(upper)))
        c.members.push_back(working[i].id);
    return c;
}

inline CoveringResult covering_algorithm_detailed(const Instance& inst) {
    ScheduleBuilder builder;
    CoveringResult r = detail::covering(detail::whole(inst), inst.uniform(), builder);
    r.schedule = builder.build(inst);
    return r;
}

inline Schedule covering_algorithm(const Instance& inst) { return covering_algorithm_detailed(inst).schedule; }

/// Finds a set of intervals alive at `t` with similar lengths and close start
/// times whose total size is in [1/c, 1], so one short-lived machine holds it.
/// Requires the raw load at t to be at least 2 + 4 ln(mu).
inline DenseSet extract_dense_set(const Instance& working, Time t) {
    return detail::dense_set(detail::whole(working), t, working.uniform());
}

inline DensityResult density_algorithm_detailed(const Instance& inst) {
    ScheduleBuilder builder;
    DensityResult result;
    detail::Working w = detail::whole(inst);
    const bool uniform = inst.uniform();
    while (!w.members.empty()) {
        std::vector<Load> load = w.loads();
        auto peak = std::max_element(load.begin(), load.end());
        long double vmax = static_cast<long double>(*peak) / static_cast<long double>(inst.scale());
        if (vmax < 2 + 4 * w.ln_mu() - 1e-12L) break;
        Time t = inst.origin() + static_cast<Time>(peak - load.begin());
        DenseSet ds;
        try {
            ds = detail::dense_set(w, t, uniform);
        } catch (const NoDenseBucket&) {
            ++result.fallbacks;
            break;
        }
        MachineId m = builder.open_machine();
        for (IntervalId id : ds.members) builder.assign(id, m);
        w.remove(detail::indices_of(inst, ds.members));
        result.dense_sets.push_back(std::move(ds));
    }
    ScheduleBuilder residue;
    detail::covering(w, uniform, residue);
    Schedule rest = residue.build(inst);
    result.residue_cost = rest.cost();
    builder.absorb(rest);
    result.schedule = builder.build(inst);
    return result;
}

inline Schedule density_algorithm(const Instance& inst) { return density_algorithm_detailed(inst).schedule; }

using OfflineScheduler = std::function<Schedule(const Instance&)>;

/// Splits intervals into harmonic size classes and schedules each class on
/// its own machines with `base`.
inline Schedule partition_algorithm(const Instance& inst, int k, const OfflineScheduler& base) {
    if (k < 3) throw std::invalid_argument("partition needs k >= 3");
    std::vector<std::vector<Interval>> classes(static_cast<std::size_t>(k));
    for (const Interval& iv : inst) classes[static_cast<std::size_t>(harmonic_class(iv.size, k) - 1)].push_back(iv);
    ScheduleBuilder builder;
    for (auto& members : classes)
        if (!members.empty()) builder.absorb(base(Instance(std::move(members))));
    return builder.build(inst);
}

}  // namespace dbp
