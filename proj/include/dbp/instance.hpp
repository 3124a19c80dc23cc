#pragma once

#include "dbp/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dbp {

using IntervalId = std::int64_t;

/// One VM request occupying [start, end) with a fractional share of a machine.
struct Interval {
    IntervalId id = 0;
    Time start = 0;
    Time end = 0;
    Rational size{1};

    Time length() const { return end - start; }
    bool contains(Time t) const { return start <= t && t < end; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

inline bool by_start_then_id(const Interval& a, const Interval& b) {
    return a.start != b.start ? a.start < b.start : a.id < b.id;
}

/// An immutable, validated set of intervals plus the statistics the
/// algorithms and their bounds are stated in terms of.
///
/// Sizes are exact rationals. `scale()` is a common denominator (always a
/// multiple of 4 so that the thresholds 1/2 and 1/4 are representable);
/// `scaled_size(i)` is size * scale as an integer.
class Instance {
public:
    Instance() = default;

    explicit Instance(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
        std::ostringstream errors;
        std::size_t error_count = 0;
        index_.reserve(intervals_.size());
        scale_ = 4;
        for (std::size_t i = 0; i < intervals_.size(); ++i) {
            const Interval& iv = intervals_[i];
            if (iv.end <= iv.start) {
                errors << "interval " << iv.id << ": end must exceed start\n";
                ++error_count;
            }
            if (iv.size <= 0 || iv.size > 1) {
                errors << "interval " << iv.id << ": size " << to_string(iv.size) << " not in (0,1]\n";
                ++error_count;
            }
            if (!index_.emplace(iv.id, i).second) {
                errors << "interval " << iv.id << ": duplicate id\n";
                ++error_count;
            }
            if (error_count == 0) scale_ = checked_lcm(scale_, iv.size.denominator());
        }
        if (error_count > 0) throw std::invalid_argument(errors.str());

        scaled_.reserve(intervals_.size());
        for (const Interval& iv : intervals_) scaled_.push_back(iv.size.numerator() * (scale_ / iv.size.denominator()));

        if (intervals_.empty()) return;
        origin_ = intervals_.front().start;
        Time last = intervals_.front().end;
        min_length_ = max_length_ = intervals_.front().length();
        beta_ = intervals_.front().size;
        bool uniform = true;
        for (const Interval& iv : intervals_) {
            origin_ = std::min(origin_, iv.start);
            last = std::max(last, iv.end);
            min_length_ = std::min(min_length_, iv.length());
            max_length_ = std::max(max_length_, iv.length());
            beta_ = std::max(beta_, iv.size);
            if (iv.size.numerator() != 1 || iv.size != intervals_.front().size) uniform = false;
        }
        horizon_ = last - origin_;
        if (uniform) granularity_ = intervals_.front().size.denominator();
    }

    std::span<const Interval> intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }
    const Interval& operator[](std::size_t i) const { return intervals_[i]; }
    auto begin() const { return intervals_.begin(); }
    auto end() const { return intervals_.end(); }

    bool has_id(IntervalId id) const { return index_.count(id) != 0; }
    std::size_t index_of(IntervalId id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw std::out_of_range("unknown interval id " + std::to_string(id));
        return it->second;
    }
    const Interval& by_id(IntervalId id) const { return intervals_[index_of(id)]; }

    /// g when every size is exactly 1/g.
    std::optional<std::int64_t> uniform_granularity() const { return granularity_; }
    bool uniform() const { return granularity_.has_value(); }

    Rational mu() const { return empty() ? Rational(1) : Rational(max_length_, min_length_); }
    Rational beta() const { return beta_; }
    Time origin() const { return origin_; }
    Time horizon() const { return horizon_; }
    Time min_length() const { return min_length_; }
    Time max_length() const { return max_length_; }

    Load scale() const { return scale_; }
    Load scaled_size(std::size_t i) const { return scaled_[i]; }
    Load scaled(const Rational& r) const {
        if (scale_ % r.denominator() != 0) throw std::invalid_argument("value not representable at instance scale");
        return r.numerator() * (scale_ / r.denominator());
    }

    template <class Pred>
    Instance filter(Pred&& keep) const {
        std::vector<Interval> out;
        for (const Interval& iv : intervals_)
            if (keep(iv)) out.push_back(iv);
        return Instance(std::move(out));
    }

    /// Intervals ordered by start time, ties by id.
    std::vector<Interval> sorted_by_start() const {
        std::vector<Interval> out(intervals_);
        std::sort(out.begin(), out.end(), by_start_then_id);
        return out;
    }

    friend bool operator==(const Instance& a, const Instance& b) { return a.intervals_ == b.intervals_; }

private:
    std::vector<Interval> intervals_;
    std::vector<Load> scaled_;
    std::unordered_map<IntervalId, std::size_t> index_;
    std::optional<std::int64_t> granularity_;
    Rational beta_{0};
    Load scale_ = 4;
    Time origin_ = 0;
    Time horizon_ = 0;
    Time min_length_ = 1;
    Time max_length_ = 1;
};

}  // namespace dbp
