#pragma once

#include "dbp/instance.hpp"

#include <span>
#include <vector>

namespace dbp {

enum class LoadMode { Raw, Ceiled };

/// Per-step total demand over [origin, origin + horizon). Values are held as
/// integers at a fixed scale, so every norm is exact.
class LoadVector {
public:
    LoadVector() = default;
    LoadVector(Time origin, Load scale, std::vector<Load> scaled, LoadMode mode)
        : origin_(origin), scale_(scale), scaled_(std::move(scaled)), mode_(mode) {}

    Time origin() const { return origin_; }
    Time horizon() const { return static_cast<Time>(scaled_.size()); }
    Time end() const { return origin_ + horizon(); }
    LoadMode mode() const { return mode_; }
    Load scale() const { return scale_; }

    Load scaled_at(Time t) const {
        if (t < origin_ || t >= end()) return 0;
        return scaled_[static_cast<std::size_t>(t - origin_)];
    }
    Rational at(Time t) const { return Rational(scaled_at(t), scale_); }
    std::span<const Load> scaled_values() const { return scaled_; }

    std::vector<Rational> values() const {
        std::vector<Rational> out;
        out.reserve(scaled_.size());
        for (Load v : scaled_) out.emplace_back(v, scale_);
        return out;
    }

    std::int64_t norm_0() const {
        std::int64_t n = 0;
        for (Load v : scaled_) n += v > 0;
        return n;
    }
    Rational norm_1() const {
        Load s = 0;
        for (Load v : scaled_) s += v;
        return Rational(s, scale_);
    }
    Rational norm_inf() const {
        Load m = 0;
        for (Load v : scaled_) m = std::max(m, v);
        return Rational(m, scale_);
    }
    Rational average() const {
        if (scaled_.empty()) return Rational(0);
        return norm_1() / Rational(horizon());
    }

private:
    Time origin_ = 0;
    Load scale_ = 1;
    std::vector<Load> scaled_;
    LoadMode mode_ = LoadMode::Raw;
};

namespace detail {

// Raw scaled loads of a subset of an instance over the instance's window.
inline std::vector<Load> raw_loads(const Instance& inst, std::span<const std::size_t> members, Time origin,
                                   Time horizon) {
    std::vector<Load> diff(static_cast<std::size_t>(horizon) + 1, 0);
    for (std::size_t i : members) {
        diff[static_cast<std::size_t>(inst[i].start - origin)] += inst.scaled_size(i);
        diff[static_cast<std::size_t>(inst[i].end - origin)] -= inst.scaled_size(i);
    }
    std::vector<Load> out(static_cast<std::size_t>(horizon));
    Load run = 0;
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = run += diff[t];
    return out;
}

}  // namespace detail

inline LoadVector compute_load_vector(const Instance& inst, LoadMode mode = LoadMode::Raw) {
    std::vector<std::size_t> all(inst.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<Load> v = detail::raw_loads(inst, all, inst.origin(), inst.horizon());
    if (mode == LoadMode::Ceiled)
        for (Load& x : v) x = ceil_div(x, inst.scale()) * inst.scale();
    return LoadVector(inst.origin(), inst.scale(), std::move(v), mode);
}

}  // namespace dbp
