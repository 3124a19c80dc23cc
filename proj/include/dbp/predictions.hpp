#pragma once

#include "dbp/load_vector.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace dbp {

inline constexpr long double kClassTolerance = 1e-12L;

/// Geometric length classes driven by a predicted average load. Class j
/// covers [e^{S_j}, e^{S_j + eps_j}) with S_j the sum of eps_i for i < j,
/// eps_j = min(1, j / v_avg) and threshold q_j = min(1, sqrt(v_avg / j)).
class LengthClasses {
public:
    explicit LengthClasses(long double v_avg) : v_avg_(v_avg) {
        if (!(v_avg > 0)) throw std::invalid_argument("average load must be positive");
    }

    long double v_avg() const { return v_avg_; }
    long double epsilon(int j) const { return std::min(1.0L, static_cast<long double>(j) / v_avg_); }
    long double threshold(int j) const { return std::min(1.0L, std::sqrt(v_avg_ / static_cast<long double>(j))); }

    /// Sum of eps_i over i < j.
    long double offset(int j) const {
        long double s = 0;
        for (int i = 1; i < j; ++i) s += epsilon(i);
        return s;
    }
    long double lower_boundary(int j) const { return std::exp(offset(j)); }

    int classify(long double length) const {
        if (!(length >= 1)) throw std::invalid_argument("length must be at least 1");
        int j = 1;
        long double s = 0;
        while (length >= std::exp(s + epsilon(j)) - kClassTolerance) {
            s += epsilon(j);
            ++j;
        }
        return j;
    }

private:
    long double v_avg_;
};

inline int classify(long double predicted_length, long double v_avg) {
    return LengthClasses(v_avg).classify(predicted_length);
}

struct NoiseParams {
    double delta = 0;   // average-load error factor
    double alpha = 0;   // length under-prediction factor
    double lambda = 0;  // length over-prediction factor

    bool noiseless() const { return delta == 0 && alpha == 0 && lambda == 0; }
};

/// Lookahead view of a load vector: at time `now` only steps in
/// [now, now + window) may be read.
class LoadVectorPrediction {
public:
    LoadVectorPrediction(LoadVector v, Time window, Rational narrow_beta)
        : v_(std::move(v)), window_(window), narrow_beta_(narrow_beta) {
        if (window < 1) throw std::invalid_argument("prediction window must be positive");
    }

    Rational at(Time now, Time t) const {
        if (t < now || t >= now + window_)
            throw std::out_of_range("prediction for step " + std::to_string(t) + " outside window at " +
                                    std::to_string(now));
        return v_.at(t);
    }
    Load scaled_at(Time now, Time t) const {
        if (t < now || t >= now + window_)
            throw std::out_of_range("prediction for step " + std::to_string(t) + " outside window at " +
                                    std::to_string(now));
        return v_.scaled_at(t);
    }

    Time window() const { return window_; }
    Load scale() const { return v_.scale(); }
    /// Largest size among intervals of size at most 1/4, used for the
    /// per-copy offsets in the non-uniform case.
    Rational narrow_beta() const { return narrow_beta_; }
    const LoadVector& vector() const { return v_; }

private:
    LoadVector v_;
    Time window_;
    Rational narrow_beta_;
};

/// Exact lookahead for an instance: the raw load vector, a window of the
/// longest length, and the true largest narrow size (0 if none).
inline LoadVectorPrediction exact_load_prediction(const Instance& inst) {
    Rational nb(0);
    for (const Interval& iv : inst)
        if (iv.size <= Rational(1, 4)) nb = std::max(nb, iv.size);
    return LoadVectorPrediction(compute_load_vector(inst, LoadMode::Raw), std::max<Time>(inst.max_length(), 1), nb);
}

enum class PredictionMode { AvgLoad, LoadVector };

struct PredictionBundle {
    PredictionMode mode = PredictionMode::AvgLoad;
    long double v_avg = 0;
    std::unordered_map<IntervalId, long double> lengths;
    NoiseParams noise;
};

/// Raw average load over the instance horizon.
inline long double true_average_load(const Instance& inst) {
    if (inst.horizon() == 0) return 0;
    return static_cast<long double>(to_double(compute_load_vector(inst).average()));
}

/// Predictions that match the instance exactly.
inline PredictionBundle exact_predictions(const Instance& inst) {
    PredictionBundle b;
    b.v_avg = true_average_load(inst);
    for (const Interval& iv : inst) b.lengths[iv.id] = static_cast<long double>(iv.length());
    return b;
}

/// Draws v'_avg uniformly from [v_avg/(1+delta), v_avg(1+delta)] and each
/// length uniformly from [len/(1+alpha), len(1+lambda)]. A zero parameter
/// leaves the matching values exact.
inline PredictionBundle apply_noise(const NoiseParams& noise, const Instance& truth, std::uint64_t seed) {
    if (noise.delta < 0 || noise.alpha < 0 || noise.lambda < 0)
        throw std::invalid_argument("noise parameters must be nonnegative");
    PredictionBundle b = exact_predictions(truth);
    b.noise = noise;
    std::mt19937_64 rng(seed);
    if (noise.delta > 0) {
        std::uniform_real_distribution<long double> d(b.v_avg / (1 + noise.delta), b.v_avg * (1 + noise.delta));
        b.v_avg = d(rng);
    }
    if (noise.alpha > 0 || noise.lambda > 0) {
        for (const Interval& iv : truth) {
            long double len = static_cast<long double>(iv.length());
            std::uniform_real_distribution<long double> d(len / (1 + noise.alpha), len * (1 + noise.lambda));
            b.lengths[iv.id] = d(rng);
        }
    }
    return b;
}

}  // namespace dbp
