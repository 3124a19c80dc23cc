#pragma once

#include "dbp/first_fit.hpp"
#include "dbp/harness/trace.hpp"
#include "dbp/oracle.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dbp::harness {

/// Interval length distribution: `fixed:L`, `uniform:a:b` (integers in
/// [a, b]) or `pow2:e` (2^i with i uniform in [0, e]).
struct LengthDist {
    enum class Kind { Fixed, Uniform, Pow2 };
    Kind kind = Kind::Fixed;
    Time a = 1;
    Time b = 1;

    static LengthDist parse(std::string_view text) {
        auto f = detail::split(text, ':');
        auto num = [&](std::size_t i) {
            if (i >= f.size()) throw std::invalid_argument("length distribution '" + std::string(text) + "' is incomplete");
            return detail::parse_integer(f[i]);
        };
        LengthDist d;
        if (f[0] == "fixed") {
            d = {Kind::Fixed, num(1), num(1)};
        } else if (f[0] == "uniform") {
            d = {Kind::Uniform, num(1), num(2)};
        } else if (f[0] == "pow2") {
            d = {Kind::Pow2, 0, num(1)};
            if (d.b < 0 || d.b > 40) throw std::invalid_argument("pow2 exponent must be in [0, 40]");
            return d;
        } else {
            throw std::invalid_argument("unknown length distribution '" + std::string(f[0]) + "'");
        }
        if (d.a < 1 || d.b < d.a) throw std::invalid_argument("lengths must satisfy 1 <= a <= b");
        return d;
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::Fixed: return "fixed:" + std::to_string(a);
            case Kind::Uniform: return "uniform:" + std::to_string(a) + ":" + std::to_string(b);
            case Kind::Pow2: return "pow2:" + std::to_string(b);
        }
        return "";
    }

    Time draw(std::mt19937_64& rng) const {
        switch (kind) {
            case Kind::Fixed: return a;
            case Kind::Uniform: return std::uniform_int_distribution<Time>(a, b)(rng);
            case Kind::Pow2: return Time{1} << std::uniform_int_distribution<int>(0, static_cast<int>(b))(rng);
        }
        return a;
    }
};

inline constexpr std::int64_t kSizeDenominator = 240;

namespace detail {

inline Interval place(IntervalId id, Time horizon, Time len, Rational size, std::mt19937_64& rng) {
    len = std::min(len, horizon);
    Time start = std::uniform_int_distribution<Time>(0, horizon - len)(rng);
    return {id, start, start + len, size};
}

inline void check_common(std::int64_t n, Time horizon) {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    if (horizon < 1) throw std::invalid_argument("T must be positive");
}

}  // namespace detail

/// n intervals of size 1/g with random starts in [0, T).
inline Instance generate_uniform(std::int64_t g, std::int64_t n, Time horizon, const LengthDist& len, std::uint64_t seed) {
    if (g < 1) throw std::invalid_argument("g must be positive");
    detail::check_common(n, horizon);
    std::mt19937_64 rng(seed);
    std::vector<Interval> out;
    for (std::int64_t i = 0; i < n; ++i) out.push_back(detail::place(i + 1, horizon, len.draw(rng), Rational(1, g), rng));
    return Instance(std::move(out));
}

/// n intervals with sizes k/240, k uniform in [1, floor(240 beta_max)].
inline Instance generate_nonuniform(const Rational& beta_max, std::int64_t n, Time horizon, const LengthDist& len,
                                    std::uint64_t seed) {
    detail::check_common(n, horizon);
    std::int64_t top = floor(beta_max * kSizeDenominator);
    if (beta_max > 1 || top < 1) throw std::invalid_argument("beta_max must be in [1/240, 1]");
    std::mt19937_64 rng(seed);
    std::vector<Interval> out;
    for (std::int64_t i = 0; i < n; ++i) {
        Time l = len.draw(rng);
        Rational size(std::uniform_int_distribution<std::int64_t>(1, top)(rng), kSizeDenominator);
        out.push_back(detail::place(i + 1, horizon, l, size, rng));
    }
    return Instance(std::move(out));
}

/// n intervals that all contain step T/2, with sizes 1/g (g > 0) or random
/// k/240 up to beta_max (g == 0). Produces one dominant dense burst.
inline Instance generate_burst(std::int64_t g, const Rational& beta_max, std::int64_t n, Time horizon,
                               const LengthDist& len, std::uint64_t seed) {
    detail::check_common(n, horizon);
    std::int64_t top = floor(beta_max * kSizeDenominator);
    if (g == 0 && (beta_max > 1 || top < 1)) throw std::invalid_argument("beta_max must be in [1/240, 1]");
    std::mt19937_64 rng(seed);
    const Time anchor = horizon / 2;
    std::vector<Interval> out;
    for (std::int64_t i = 0; i < n; ++i) {
        Time l = std::min(len.draw(rng), horizon);
        Time lo = std::max<Time>(0, anchor - l + 1);
        Time hi = std::min(anchor, horizon - l);
        Time start = std::uniform_int_distribution<Time>(lo, std::max(lo, hi))(rng);
        Rational size = g > 0 ? Rational(1, g)
                              : Rational(std::uniform_int_distribution<std::int64_t>(1, top)(rng), kSizeDenominator);
        out.push_back({i + 1, start, start + l, size});
    }
    return Instance(std::move(out));
}

/// Instance produced by the lower-bound adversary against First-Fit.
inline Instance generate_adversarial(double a, Time mu) {
    ScheduleBuilder builder;
    FirstFit victim(builder);
    return adversary_generate(a, mu, victim).instance;
}

/// Generator description `kind:key=value,...`, e.g.
/// `uniform:g=2,n=50,T=100,len=uniform:1:10`.
struct GeneratorSpec {
    std::string kind = "uniform";
    std::int64_t g = 2;
    Rational beta_max{1, 2};
    std::int64_t n = 20;
    Time horizon = 50;
    LengthDist len = LengthDist::parse("uniform:1:10");
    double a = 2;
    Time mu = 64;

    static GeneratorSpec parse(std::string_view text) {
        GeneratorSpec s;
        std::size_t colon = text.find(':');
        s.kind = std::string(detail::trim(text.substr(0, colon)));
        if (s.kind != "uniform" && s.kind != "nonuniform" && s.kind != "burst" && s.kind != "adversarial")
            throw std::invalid_argument("unknown generator '" + s.kind + "'");
        if (colon == std::string_view::npos) return s;
        for (std::string_view kv : detail::split(text.substr(colon + 1), ',')) {
            if (kv.empty()) continue;
            std::size_t eq = kv.find('=');
            if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value, got '" + std::string(kv) + "'");
            std::string_view key = detail::trim(kv.substr(0, eq));
            std::string_view value = detail::trim(kv.substr(eq + 1));
            if (key == "g") s.g = detail::parse_integer(value);
            else if (key == "beta") s.beta_max = parse_rational(value);
            else if (key == "n") s.n = detail::parse_integer(value);
            else if (key == "T") s.horizon = detail::parse_integer(value);
            else if (key == "len") s.len = LengthDist::parse(value);
            else if (key == "a") s.a = std::stod(std::string(value));
            else if (key == "mu") s.mu = detail::parse_integer(value);
            else throw std::invalid_argument("unknown generator parameter '" + std::string(key) + "'");
        }
        return s;
    }

    std::string to_string() const {
        if (kind == "adversarial") return kind + ":a=" + std::to_string(a) + ",mu=" + std::to_string(mu);
        std::string out = kind + ":";
        if (kind != "nonuniform") out += "g=" + std::to_string(g) + ",";
        if (kind != "uniform") out += "beta=" + dbp::to_string(beta_max) + ",";
        return out + "n=" + std::to_string(n) + ",T=" + std::to_string(horizon) + ",len=" + len.to_string();
    }
};

inline Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed) {
    if (spec.kind == "uniform") return generate_uniform(spec.g, spec.n, spec.horizon, spec.len, seed);
    if (spec.kind == "nonuniform") return generate_nonuniform(spec.beta_max, spec.n, spec.horizon, spec.len, seed);
    if (spec.kind == "burst") return generate_burst(spec.g, spec.beta_max, spec.n, spec.horizon, spec.len, seed);
    if (spec.kind == "adversarial") return generate_adversarial(spec.a, spec.mu);
    throw std::invalid_argument("unknown generator '" + spec.kind + "'");
}

}  // namespace dbp::harness
