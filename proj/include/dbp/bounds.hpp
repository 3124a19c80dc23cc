#pragma once

#include "dbp/load_vector.hpp"

#include <cmath>
#include <stdexcept>

namespace dbp {

/// Asymptotic ratio of Harmonic(k), exact. With t_1 = 2 and
/// t_{i+1} = t_i (t_i - 1) + 1 (2, 3, 7, 43, ...), and m such that
/// t_m < k <= t_{m+1}: sum_{i<=m} 1/(t_i - 1) + k / ((k-1)(t_{m+1} - 1)).
inline Rational harmonic_ratio(int k) {
    if (k < 2) throw std::invalid_argument("harmonic ratio needs k >= 2");
    Rational sum(0);
    std::int64_t t = 2;
    while (true) {
        std::int64_t next = t * (t - 1) + 1;
        sum += Rational(1, t - 1);
        if (k <= next) return sum + Rational(k, (static_cast<std::int64_t>(k) - 1) * (next - 1));
        t = next;
        if (t > (std::int64_t{1} << 30)) throw std::overflow_error("harmonic ratio: k too large");
    }
}

/// First-Fit-style constant for Next-Fit: 1 for uniform sizes, else
/// min{2, 1/(1 - beta)}.
inline Rational next_fit_constant(bool uniform, const Rational& beta) {
    if (uniform) return Rational(1);
    if (beta >= Rational(1, 2)) return Rational(2);
    return 1 / (1 - beta);
}

/// sum_t ceil(2 v_t / (1 - 2 beta)) over the raw load vector; needs beta < 1/2.
inline std::int64_t small_beta_bound(const LoadVector& raw, const Rational& beta) {
    if (beta >= Rational(1, 2)) throw std::invalid_argument("small-size bound needs beta < 1/2");
    std::int64_t total = 0;
    for (Load v : raw.scaled_values()) total += ceil(Rational(2 * v, raw.scale()) / (1 - 2 * beta));
    return total;
}

struct CoverBound {
    Rational value{0};
    const char* form = "";
};

/// Cost bound for the covering schedulers: `uniform_factor` * ||v||_1 (ceiled)
/// for uniform sizes, `general_factor` * ||v||_1 (ceiled) otherwise, and the
/// small-size form when beta <= 1/4 (the tighter of the two is returned).
inline CoverBound covering_bound(const Instance& inst, int uniform_factor, int general_factor) {
    LoadVector ceiled = compute_load_vector(inst, LoadMode::Ceiled);
    if (inst.uniform()) return {uniform_factor * ceiled.norm_1(), "uniform"};
    CoverBound b{general_factor * ceiled.norm_1(), "general"};
    if (inst.beta() <= Rational(1, 4)) {
        Rational small(small_beta_bound(compute_load_vector(inst, LoadMode::Raw), inst.beta()));
        if (small < b.value) b = {small, "small-size"};
    }
    return b;
}

inline CoverBound offline_covering_bound(const Instance& inst) { return covering_bound(inst, 2, 4); }
inline CoverBound online_covering_bound(const Instance& inst) { return covering_bound(inst, 2, 8); }

/// c * mu * OPT + max{k, l} * ||v||_0 for the transform over a packer with
/// static guarantee c * OPT + l and space bound k.
inline Rational transform_bound(const Rational& c, const Rational& mu, std::int64_t opt, std::int64_t k,
                                std::int64_t l, std::int64_t norm_0) {
    return c * mu * opt + std::max(k, l) * norm_0;
}

/// 2 (1 + 1/(k-2)) Pi_k OPT + k ||v||_0 for the size-class partition run
/// with the covering scheduler.
inline Rational partition_bound(int k, std::int64_t opt, std::int64_t norm_0) {
    if (k < 3) throw std::invalid_argument("partition bound needs k >= 3");
    return 2 * (1 + Rational(1, k - 2)) * harmonic_ratio(k) * opt + Rational(k) * norm_0;
}

/// Additive slack constant for the noisy combined-algorithm check,
/// calibrated as the largest (cost - OPT)^+ / (T sqrt(v_avg (1 + ln mu)))
/// seen on the noiseless calibration sweep (0.9647), rounded up.
inline constexpr double kNoiseSlack = 0.97;

/// (1+alpha)(1+lambda)(OPT + T C sqrt((1+delta) v_avg (1 + ln mu))).
inline double noise_bound(double opt, double horizon, double v_avg, double mu, double delta, double alpha,
                          double lambda, double slack = kNoiseSlack) {
    return (1 + alpha) * (1 + lambda) *
           (opt + horizon * slack * std::sqrt((1 + delta) * v_avg * (1 + std::log(mu))));
}

}  // namespace dbp
