#include "catch_amalgamated.hpp"

#include "dbp/bounds.hpp"
#include "dbp/first_fit.hpp"
#include "dbp/oracle.hpp"
#include "dbp/packers.hpp"
#include "dbp/checks.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <random>

using namespace dbp;
using fixtures::instance_a;

namespace {

std::vector<StaticItem> items(std::initializer_list<Rational> sizes) {
    std::vector<StaticItem> out;
    ItemId id = 1;
    for (const Rational& s : sizes) out.push_back({id++, s});
    return out;
}

std::size_t max_active(const std::vector<PackEvent>& log) {
    std::size_t active = 0, peak = 0;
    for (const PackEvent& e : log) {
        if (e.kind == PackEvent::Kind::Open) peak = std::max(peak, ++active);
        if (e.kind == PackEvent::Kind::Close) --active;
    }
    return peak;
}

std::vector<Rational> random_sizes(std::mt19937_64& rng, int n, int top) {
    std::vector<Rational> out;
    for (int i = 0; i < n; ++i) out.emplace_back(std::uniform_int_distribution<int>(1, top)(rng), 60);
    return out;
}

std::size_t pack_count(const std::vector<Rational>& sizes, const PackerFactory& f) {
    std::vector<StaticItem> it;
    for (std::size_t i = 0; i < sizes.size(); ++i) it.push_back({static_cast<ItemId>(i), sizes[i]});
    return static_pack(it, f).bins;
}

}  // namespace

TEST_CASE("first fit on the four-request example") {
    Instance a = instance_a();
    Schedule s = first_fit_dynamic(a);
    CHECK(s.machine_of(1) == s.machine_of(2));
    CHECK(s.machine_of(4) == s.machine_of(1));
    CHECK(s.machine_of(3) != s.machine_of(1));
    // m1 runs [0,4) and m2 runs [1,3).
    CHECK(s.cost() == 6);
    CHECK(s.cost() == oracle::first_fit(a).cost);
}

TEST_CASE("first fit simple cases") {
    Instance one({{1, 2, 9, Rational(1, 3)}});
    CHECK(first_fit_dynamic(one).cost() == 7);

    Instance full({{1, 0, 5, Rational(1)}, {2, 1, 6, Rational(1)}, {3, 2, 7, Rational(1)}});
    Schedule s = first_fit_dynamic(full);
    CHECK(s.machine_count() == 3);
    LoadVector v = compute_load_vector(full);
    for (Time t = 0; t < 7; ++t) CHECK(Rational(static_cast<std::int64_t>(s.active_at(t))) == v.at(t));
}

TEST_CASE("first fit never reuses a closed machine") {
    ScheduleBuilder b;
    FirstFit ff(b);
    MachineId m1 = ff.arrive(1, 0, Rational(1, 2));
    ff.depart(1, 2);
    CHECK(ff.active_machines() == 0);
    MachineId m2 = ff.arrive(2, 3, Rational(1, 2));
    CHECK(m2 != m1);
    CHECK_THROWS(ff.depart(7, 4));
    CHECK_THROWS(ff.arrive(3, 4, Rational(3, 2)));
}

TEST_CASE("first fit agrees with the step-by-step replay") {
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        Instance inst = fixtures::random_small(seed, 25, 30);
        Schedule s = first_fit_dynamic(inst);
        auto ref = oracle::first_fit(inst);
        CHECK(s.cost() == ref.cost);
        // Same grouping of intervals into machines.
        for (const Interval& x : inst)
            for (const Interval& y : inst)
                CHECK((s.machine_of(x.id) == s.machine_of(y.id)) == (ref.machine_of[x.id] == ref.machine_of[y.id]));
        CHECK(Rational(s.cost()) <= first_fit_bound(inst));
    }
}

TEST_CASE("first fit uses one machine when load never exceeds one") {
    Instance inst({{1, 0, 4, Rational(1, 3)}, {2, 1, 3, Rational(1, 3)}, {3, 2, 9, Rational(1, 3)}, {4, 12, 14, Rational(1)}});
    CHECK(Rational(first_fit_dynamic(inst).cost()) == Rational(compute_load_vector(inst).norm_0()));
}

TEST_CASE("next fit examples") {
    NextFitPacker nf;
    auto r = static_pack(items({Rational(3, 5), Rational(3, 5), Rational(3, 10)}), nf);
    CHECK(r.bins == 2);
    CHECK(r.events.front() == PackEvent{PackEvent::Kind::Open, 0, -1});
    CHECK(r.events[2] == PackEvent{PackEvent::Kind::Close, 0, -1});
    CHECK(r.events[3] == PackEvent{PackEvent::Kind::Open, 1, -1});
    CHECK(r.events.back() == PackEvent{PackEvent::Kind::Place, 1, 3});

    CHECK(static_pack(items({Rational(1), Rational(1)}), next_fit_factory()).bins == 2);
    CHECK(static_pack(std::vector<StaticItem>{}, next_fit_factory()).bins == 0);
    CHECK(static_pack(items({Rational(1, 3)}), next_fit_factory()).bins == 1);

    std::vector<StaticItem> halves;
    for (int i = 0; i < 10; ++i) halves.push_back({i, Rational(1, 2)});
    CHECK(static_pack(halves, next_fit_factory()).bins == 5);

    NextFitPacker bad;
    CHECK_THROWS_AS(bad.place(1, Rational(3, 2)), std::invalid_argument);
}

TEST_CASE("harmonic classes and examples") {
    CHECK(harmonic_class(Rational(9, 10), 3) == 1);
    CHECK(harmonic_class(Rational(1, 2), 3) == 2);
    CHECK(harmonic_class(Rational(2, 5), 3) == 2);
    CHECK(harmonic_class(Rational(1, 3), 3) == 3);
    CHECK(harmonic_class(Rational(1, 10), 3) == 3);
    // 1/2 is outside (1/2, 1], so with k = 2 it falls in the last class.
    CHECK(harmonic_class(Rational(1, 2), 2) == 2);

    auto r = static_pack(items({Rational(9, 10), Rational(3, 5), Rational(2, 5), Rational(3, 10), Rational(1, 10)}),
                         harmonic_factory(3));
    CHECK(r.bins == 4);

    std::vector<StaticItem> halves;
    for (int i = 0; i < 4; ++i) halves.push_back({i, Rational(1, 2)});
    CHECK(static_pack(halves, harmonic_factory(2)).bins == 2);

    std::vector<StaticItem> kth;
    for (int i = 0; i < 10; ++i) kth.push_back({i, Rational(1, 4)});
    CHECK(static_pack(kth, harmonic_factory(4)).bins == 3);

    CHECK_THROWS_AS(HarmonicPacker(1), std::invalid_argument);
    HarmonicPacker h(3);
    CHECK_THROWS_AS(h.place(1, Rational(0)), std::invalid_argument);
}

TEST_CASE("harmonic ratio values") {
    CHECK(harmonic_ratio(2) == Rational(2));
    CHECK(harmonic_ratio(3) == Rational(7, 4));
    CHECK(harmonic_ratio(6) == Rational(17, 10));
    CHECK(to_double(harmonic_ratio(12)) == Catch::Approx(1.692).margin(1e-3));
    CHECK(to_double(harmonic_ratio(1000)) == Catch::Approx(1.691).margin(1e-3));
    for (int k = 3; k < 50; ++k) CHECK(harmonic_ratio(k + 1) <= harmonic_ratio(k));
}

TEST_CASE("brute-force static optimum matches subset dynamic programming") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 300; ++round) {
        auto sizes = random_sizes(rng, std::uniform_int_distribution<int>(0, 9)(rng), 60);
        CHECK(brute_force_static_opt(sizes) == oracle::static_opt(sizes));
    }
    std::vector<Rational> ex{Rational(3, 5), Rational(3, 5), Rational(3, 10)};
    CHECK(brute_force_static_opt(ex) == 2);
    CHECK(brute_force_static_opt(std::vector<Rational>{}) == 0);
    CHECK(brute_force_static_opt(std::vector<Rational>(10, Rational(1))) == 10);
    CHECK_THROWS(brute_force_static_opt(std::vector<Rational>(11, Rational(1, 2))));
}

TEST_CASE("static packer guarantees against the optimum") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 400; ++round) {
        int n = std::uniform_int_distribution<int>(1, 8)(rng);
        bool uniform = round % 3 == 0;
        std::vector<Rational> sizes;
        if (uniform) {
            sizes.assign(n, Rational(1, std::uniform_int_distribution<int>(1, 5)(rng)));
        } else {
            sizes = random_sizes(rng, n, 60);
        }
        Rational beta = *std::max_element(sizes.begin(), sizes.end());
        std::int64_t opt = static_cast<std::int64_t>(oracle::static_opt(sizes));
        Rational c = next_fit_constant(uniform, beta);
        CHECK(Rational(static_cast<std::int64_t>(pack_count(sizes, next_fit_factory()))) <= c * opt + 1);
        for (int k : {3, 6}) {
            std::size_t bins = pack_count(sizes, harmonic_factory(k));
            CHECK(Rational(static_cast<std::int64_t>(bins)) <= harmonic_ratio(k) * opt + k);
        }
    }
}

TEST_CASE("packers decompose over splits of the input") {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 300; ++round) {
        int n = std::uniform_int_distribution<int>(2, 8)(rng);
        auto sizes = random_sizes(rng, n, 60);
        Rational beta = *std::max_element(sizes.begin(), sizes.end());
        std::int64_t opt = static_cast<std::int64_t>(oracle::static_opt(sizes));
        int parts = std::uniform_int_distribution<int>(2, 3)(rng);
        std::vector<std::vector<Rational>> split(parts);
        for (const Rational& s : sizes) split[std::uniform_int_distribution<int>(0, parts - 1)(rng)].push_back(s);

        std::int64_t nf = 0, h3 = 0, h6 = 0;
        for (const auto& part : split) {
            nf += static_cast<std::int64_t>(pack_count(part, next_fit_factory()));
            h3 += static_cast<std::int64_t>(pack_count(part, harmonic_factory(3)));
            h6 += static_cast<std::int64_t>(pack_count(part, harmonic_factory(6)));
        }
        CHECK(Rational(nf) <= next_fit_constant(false, beta) * opt + parts);
        CHECK(Rational(h3) <= harmonic_ratio(3) * opt + 3 * parts);
        CHECK(Rational(h6) <= harmonic_ratio(6) * opt + 6 * parts);
    }
}

TEST_CASE("event logs never exceed the space bound") {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 200; ++round) {
        auto sizes = random_sizes(rng, 40, 60);
        for (int k : {2, 3, 6}) {
            HarmonicPacker h(k);
            for (std::size_t i = 0; i < sizes.size(); ++i) {
                auto ev = h.place(static_cast<ItemId>(i), sizes[i]);
                REQUIRE_FALSE(ev.empty());
                CHECK(ev.back().kind == PackEvent::Kind::Place);
                CHECK(h.is_active(ev.back().bin));
            }
            CHECK(max_active(h.log()) <= static_cast<std::size_t>(k));
        }
        NextFitPacker nf;
        for (std::size_t i = 0; i < sizes.size(); ++i) nf.place(static_cast<ItemId>(i), sizes[i]);
        CHECK(max_active(nf.log()) == 1);
    }
}
