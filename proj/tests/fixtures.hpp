#pragma once

#include "dbp/harness/generators.hpp"
#include "dbp/instance.hpp"

#include <random>
#include <vector>

namespace fixtures {

using dbp::Instance;
using dbp::Interval;
using dbp::Rational;

// Four half-size requests: [0,4), [0,2), [1,3), [2,4).
inline Instance instance_a() {
    Rational h(1, 2);
    return Instance({{1, 0, 4, h}, {2, 0, 2, h}, {3, 1, 3, h}, {4, 2, 4, h}});
}

/// Small random instance, alternating uniform and non-uniform sizes by seed.
inline Instance random_small(std::uint64_t seed, std::int64_t max_n = 8, dbp::Time horizon = 12) {
    using namespace dbp::harness;
    std::mt19937_64 rng(seed * 7919 + 13);
    std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, max_n)(rng);
    LengthDist len = LengthDist::parse("uniform:1:6");
    if (seed % 2 == 0) {
        std::int64_t g = std::uniform_int_distribution<std::int64_t>(1, 4)(rng);
        return generate_uniform(g, n, horizon, len, seed);
    }
    static const Rational betas[] = {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
    return generate_nonuniform(betas[seed % 4], n, horizon, len, seed);
}

}  // namespace fixtures
