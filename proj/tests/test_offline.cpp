#include "catch_amalgamated.hpp"

#include "dbp/bounds.hpp"
#include "dbp/offline.hpp"
#include "dbp/oracle.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace dbp;
using fixtures::instance_a;

namespace {

// Checks lower/upper cover bounds pointwise from the members alone.
bool is_cover(const Instance& working, const Cover& c) {
    std::vector<Interval> all(working.begin(), working.end());
    std::vector<Interval> members;
    for (IntervalId id : c.members) members.push_back(working.by_id(id));
    for (Time t = working.origin(); t < working.origin() + working.horizon(); ++t) {
        Rational v = oracle::load_at(all, t);
        Rational mine = oracle::load_at(members, t);
        if (mine > c.upper || mine < std::min(v, c.lower)) return false;
    }
    return true;
}

Instance random_working(std::mt19937_64& rng, bool uniform) {
    using namespace harness;
    std::uint64_t seed = rng();
    std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 30)(rng);
    LengthDist len = LengthDist::parse("uniform:1:8");
    if (uniform) return generate_uniform(std::uniform_int_distribution<std::int64_t>(1, 4)(rng), n, 20, len, seed);
    static const Rational betas[] = {Rational(1, 10), Rational(1, 4), Rational(2, 5), Rational(1, 2)};
    return generate_nonuniform(betas[rng() % 4], n, 20, len, seed);
}

std::size_t peak_machines(const Schedule& s, const Instance& inst) {
    std::size_t peak = 0;
    for (Time t = inst.origin(); t < inst.origin() + inst.horizon(); ++t) peak = std::max(peak, s.active_at(t));
    return peak;
}

}  // namespace

TEST_CASE("cover extraction examples") {
    Instance a = instance_a();
    Cover c = extract_cover(a);
    CHECK(c.members.size() == 4);
    CHECK(c.lower == Rational(1));
    CHECK(c.upper == Rational(2));

    Rational h(1, 2);
    Instance a5({{1, 0, 4, h}, {2, 0, 2, h}, {3, 1, 3, h}, {4, 2, 4, h}, {5, 1, 3, h}});
    CHECK(extract_cover(a5).members.size() == 5);

    Instance a6({{1, 0, 4, h}, {2, 0, 2, h}, {3, 1, 3, h}, {4, 2, 4, h}, {5, 1, 3, h}, {6, 1, 3, h}});
    Cover c6 = extract_cover(a6);
    CHECK(c6.members.size() == 5);
    CHECK(is_cover(a6, c6));
    std::vector<Interval> kept;
    for (IntervalId id : c6.members) kept.push_back(a6.by_id(id));
    for (Time t = 1; t < 3; ++t) {
        CHECK(oracle::load_at(kept, t) >= 1);
        CHECK(oracle::load_at(kept, t) <= 2);
    }

    Instance single({{1, 0, 3, Rational(2, 5)}});
    Cover s = extract_cover(single);
    CHECK(s.members == std::vector<IntervalId>{1});
    CHECK(s.lower == Rational(1, 10));
    CHECK(s.upper == Rational(1));

    CHECK_THROWS_AS(extract_cover(Instance({{1, 0, 3, Rational(3, 5)}, {2, 0, 2, Rational(1, 3)}})),
                    std::invalid_argument);
}

TEST_CASE("extracted covers respect their bounds") {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 400; ++round) {
        Instance w = random_working(rng, round % 2 == 0);
        Cover c = extract_cover(w);
        CHECK(is_cover(w, c));
        CHECK_FALSE(c.members.empty());
    }
}

TEST_CASE("covering algorithm examples") {
    Instance a = instance_a();
    CoveringResult r = covering_algorithm_detailed(a);
    CHECK(r.rounds.size() == 1);
    CHECK(r.schedule.cost() == 6);
    CHECK(r.schedule.cost() == oracle::first_fit(a).cost);
    CHECK(Rational(r.schedule.cost()) <= offline_covering_bound(a).value);
    CHECK(offline_covering_bound(a).value == Rational(12));

    Instance big({{1, 3, 10, Rational(9, 10)}});
    CoveringResult b = covering_algorithm_detailed(big);
    CHECK(b.dedicated == std::vector<IntervalId>{1});
    CHECK(b.schedule.cost() == 7);

    CHECK(covering_algorithm(Instance{}).cost() == 0);
}

TEST_CASE("covering algorithm bounds and per-round machine use") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 400; ++round) {
        bool uniform = round % 2 == 0;
        Instance inst = uniform ? random_working(rng, true)
                                : harness::generate_nonuniform(Rational(std::uniform_int_distribution<int>(1, 4)(rng), 4),
                                                               std::uniform_int_distribution<int>(1, 40)(rng), 25,
                                                               harness::LengthDist::parse("uniform:1:8"), rng());
        CoveringResult r = covering_algorithm_detailed(inst);
        CHECK_FALSE(validate_schedule(inst, r.schedule).has_value());
        LoadVector ceiled = compute_load_vector(inst, LoadMode::Ceiled);
        Rational cost(r.schedule.cost());
        CHECK(cost <= (inst.uniform() ? 2 : 4) * ceiled.norm_1());
        if (!inst.uniform() && inst.beta() <= Rational(1, 4))
            CHECK(cost <= Rational(small_beta_bound(compute_load_vector(inst), inst.beta())));

        for (const CoverRound& cr : r.rounds) {
            std::vector<Interval> part;
            for (IntervalId id : cr.members) part.push_back(inst.by_id(id));
            Instance sub(part);
            CHECK(peak_machines(first_fit_dynamic(sub), sub) <= (inst.uniform() ? 2u : 1u));
        }
    }
}

TEST_CASE("dense set examples") {
    std::vector<Interval> ivs;
    for (int i = 0; i < 40; ++i) ivs.push_back({i + 1, 0, 1, Rational(1)});
    Instance forty(ivs);
    DenseSet d = extract_dense_set(forty, 0);
    long double eps = std::sqrt(2.0L / 40.0L);
    CHECK(d.density_threshold == Catch::Approx(2.0));
    CHECK(static_cast<double>(d.epsilon) == Catch::Approx(static_cast<double>(eps)));
    CHECK(d.members.size() == 1);
    CHECK(d.size == Rational(1));
    CHECK(static_cast<long double>(d.span) <= d.class_length * (1 + 2 * eps));

    Instance two({{1, 0, 1, Rational(1)}, {2, 0, 1, Rational(1)}});
    CHECK(extract_dense_set(two, 0).members.size() == 1);

    Instance one({{1, 0, 1, Rational(1)}});
    CHECK_THROWS_AS(extract_dense_set(one, 0), std::invalid_argument);
}

TEST_CASE("dense sets satisfy size, length and span invariants") {
    std::mt19937_64 rng(23);
    int extracted = 0;
    for (int round = 0; round < 150; ++round) {
        std::int64_t g = round % 2 == 0 ? std::uniform_int_distribution<std::int64_t>(1, 4)(rng) : 0;
        Instance inst = harness::generate_burst(g, Rational(1, 2), 120, 40, harness::LengthDist::parse("uniform:1:12"), rng());
        DensityResult r = density_algorithm_detailed(inst);
        CHECK_FALSE(validate_schedule(inst, r.schedule).has_value());
        for (const DenseSet& d : r.dense_sets) {
            ++extracted;
            CHECK(d.size <= 1);
            CHECK(d.size * d.c >= 1);
            Time lo = std::numeric_limits<Time>::max(), hi = std::numeric_limits<Time>::min();
            for (IntervalId id : d.members) {
                const Interval& iv = inst.by_id(id);
                CHECK(static_cast<long double>(iv.length()) >= d.class_length - 1e-9L);
                CHECK(iv.contains(d.anchor));
                lo = std::min(lo, iv.start);
                hi = std::max(hi, iv.end);
            }
            CHECK(hi - lo == d.span);
            long double limit = d.class_length * (1 + 2 * std::sqrt(d.density_threshold /
                                                                     static_cast<long double>(to_double(d.anchor_load))));
            CHECK(static_cast<long double>(d.span) <= limit + 1e-9L);
        }
    }
    CHECK(extracted > 0);
}

TEST_CASE("density algorithm examples") {
    std::vector<Interval> ivs;
    for (int i = 0; i < 64; ++i) ivs.push_back({i + 1, 0, 1, Rational(1, 4)});
    Instance inst(ivs);
    DensityResult r = density_algorithm_detailed(inst);
    CHECK(r.dense_sets.size() == 15);
    for (const DenseSet& d : r.dense_sets) CHECK(d.members.size() == 4);
    CHECK(r.schedule.cost() == 16);
    CHECK(r.residue_cost == 1);
    double ceiling = 16 + 10 * std::sqrt(2.0 * 16);
    CHECK(r.schedule.cost() <= ceiling);

    Instance a = instance_a();
    Schedule cov = covering_algorithm(a);
    Schedule den = density_algorithm(a);
    CHECK(den.cost() == cov.cost());
    CHECK(den.assignment() == cov.assignment());

    Instance single({{1, 4, 9, Rational(1, 3)}});
    CHECK(density_algorithm(single).cost() == 5);
}

TEST_CASE("partition algorithm") {
    auto base = [](const Instance& i) { return covering_algorithm(i); };

    Instance small({{1, 0, 4, Rational(1, 5)}, {2, 1, 3, Rational(1, 6)}, {3, 2, 9, Rational(1, 4)}});
    CHECK(partition_algorithm(small, 4, base).cost() == covering_algorithm(small).cost());

    Instance three({{1, 0, 4, Rational(3, 5)}, {2, 0, 4, Rational(2, 5)}, {3, 0, 4, Rational(1, 5)}});
    Schedule s = partition_algorithm(three, 3, base);
    CHECK(s.machine_count() == 3);
    CHECK(s.cost() == 12);

    Instance a = instance_a();
    CHECK(partition_algorithm(a, 3, base).cost() == covering_algorithm(a).cost());
    CHECK_THROWS_AS(partition_algorithm(a, 2, base), std::invalid_argument);
}

TEST_CASE("partition bound against the exact optimum") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Instance inst = fixtures::random_small(seed, 7, 10);
        Time opt = oracle::dynamic_opt(inst);
        std::int64_t n0 = compute_load_vector(inst).norm_0();
        for (int k : {3, 6}) {
            Schedule s = partition_algorithm(inst, k, [](const Instance& i) { return covering_algorithm(i); });
            CHECK_FALSE(validate_schedule(inst, s).has_value());
            CHECK(Rational(s.cost()) <= partition_bound(k, opt, n0));
        }
    }
}
