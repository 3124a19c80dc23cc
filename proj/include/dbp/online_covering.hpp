#pragma once

#include "dbp/first_fit.hpp"
#include "dbp/predictions.hpp"

#include <deque>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dbp {

/// State of one filter copy that accepts an interval when, at some step of
/// its span, the overestimate minus the load this copy already rejected is
/// at most theta. Loads are tracked over the steps [origin, origin + horizon).
class CoverCopyState {
public:
    using Overestimate = std::function<Rational(Time now, Time t)>;

    CoverCopyState(Time origin, Time horizon, Rational theta, Overestimate overestimate)
        : origin_(origin),
          theta_(theta),
          overestimate_(std::move(overestimate)),
          accepted_(static_cast<std::size_t>(horizon), Rational(0)),
          rejected_(static_cast<std::size_t>(horizon), Rational(0)) {}

    Rational theta() const { return theta_; }
    Time origin() const { return origin_; }
    Rational overestimate(Time now, Time t) const { return overestimate_(now, t); }
    Rational accepted_at(Time t) const { return get(accepted_, t); }
    Rational rejected_at(Time t) const { return get(rejected_, t); }
    const std::vector<Rational>& accepted() const { return accepted_; }
    const std::vector<Rational>& rejected() const { return rejected_; }

    void add(const Interval& iv, bool accept) {
        std::vector<Rational>& v = accept ? accepted_ : rejected_;
        for (Time t = iv.start; t < iv.end; ++t) {
            if (t < origin_ || t - origin_ >= static_cast<Time>(v.size()))
                throw std::out_of_range("interval outside the tracked horizon");
            v[static_cast<std::size_t>(t - origin_)] += iv.size;
        }
    }

private:
    Rational get(const std::vector<Rational>& v, Time t) const {
        if (t < origin_ || t - origin_ >= static_cast<Time>(v.size())) return Rational(0);
        return v[static_cast<std::size_t>(t - origin_)];
    }

    Time origin_;
    Rational theta_;
    Overestimate overestimate_;
    std::vector<Rational> accepted_;
    std::vector<Rational> rejected_;
};

/// Offers `iv` at time `now` and records the outcome. Returns true on accept.
inline bool cover_filter_offer(CoverCopyState& state, const Interval& iv, Time now) {
    bool accept = false;
    for (Time t = iv.start; t < iv.end && !accept; ++t)
        accept = state.overestimate(now, t) - state.rejected_at(t) <= state.theta();
    state.add(iv, accept);
    return accept;
}

struct CoverCopySummary {
    std::vector<IntervalId> accepted_ids;
    std::vector<Rational> accepted;  // per step over the instance horizon
    std::vector<Rational> offered;   // accepted + rejected
    std::vector<Rational> overestimate;
};

struct OnlineCoveringResult {
    Schedule schedule;
    bool uniform = true;
    Rational beta_n{0};
    Rational step{1};  // overestimate offset between consecutive copies
    std::vector<IntervalId> dedicated;
    std::vector<CoverCopySummary> copies;
};

/// Chain of filter copies fed by a load-vector lookahead. Copy i sees the
/// overestimate (v_t - (i-1) step)^+ and receives every interval rejected by
/// the copies before it; each copy's accepted intervals go to its own
/// First-Fit. In the non-uniform case intervals larger than 1/4 get a
/// dedicated machine instead.
class OnlineCoveringAlgorithm {
public:
    OnlineCoveringAlgorithm(const LoadVectorPrediction& prediction, bool uniform, Time origin, Time horizon,
                            ScheduleBuilder& builder)
        : prediction_(&prediction), uniform_(uniform), origin_(origin), horizon_(horizon), builder_(&builder) {
        step_ = uniform ? Rational(1) : Rational(1, 2) - prediction.narrow_beta();
        theta_ = uniform ? Rational(1) : Rational(1, 2);
        if (step_ <= 0) throw std::invalid_argument("narrow size bound must be below 1/2");
    }

    MachineId arrive(IntervalId id, Time now, const Rational& size, Time end) {
        Interval iv{id, now, end, size};
        if (end - now > prediction_->window())
            throw std::out_of_range("prediction window " + std::to_string(prediction_->window()) +
                                    " shorter than interval " + std::to_string(id));
        if (!uniform_ && size > Rational(1, 4)) {
            MachineId m = builder_->open_machine();
            builder_->assign(id, m);
            dedicated_.push_back(id);
            live_.emplace(id, -1);
            return m;
        }
        for (std::size_t i = 0;; ++i) {
            if (i == copies_.size()) add_copy();
            Copy& c = copies_[i];
            if (cover_filter_offer(c.state, iv, now)) {
                c.accepted_ids.push_back(id);
                live_.emplace(id, static_cast<int>(i));
                return c.first_fit.arrive(id, now, size);
            }
        }
    }

    void depart(IntervalId id, Time now) {
        auto it = live_.find(id);
        if (it == live_.end()) throw std::logic_error("departure of an interval the scheduler does not hold");
        if (it->second >= 0) copies_[static_cast<std::size_t>(it->second)].first_fit.depart(id, now);
        else
            ++departed_dedicated_;
        live_.erase(it);
    }

    std::size_t active_machines() const {
        std::size_t n = dedicated_.size() - departed_dedicated_;
        for (const Copy& c : copies_) n += c.first_fit.active_machines();
        return n;
    }

    std::size_t copy_count() const { return copies_.size(); }
    Rational step() const { return step_; }

    void summarize(OnlineCoveringResult& out) const {
        out.uniform = uniform_;
        out.beta_n = prediction_->narrow_beta();
        out.step = step_;
        out.dedicated = dedicated_;
        for (std::size_t i = 0; i < copies_.size(); ++i) {
            const Copy& c = copies_[i];
            CoverCopySummary s;
            s.accepted_ids = c.accepted_ids;
            s.accepted = c.state.accepted();
            s.offered = c.state.accepted();
            for (std::size_t t = 0; t < s.offered.size(); ++t) s.offered[t] += c.state.rejected()[t];
            for (Time t = 0; t < horizon_; ++t)
                s.overestimate.push_back(overestimate(i, prediction_->vector().at(origin_ + t)));
            out.copies.push_back(std::move(s));
        }
    }

private:
    struct Copy {
        CoverCopyState state;
        FirstFit first_fit;
        std::vector<IntervalId> accepted_ids;
    };

    Rational overestimate(std::size_t copy, const Rational& v) const {
        return positive_part(v - Rational(static_cast<std::int64_t>(copy)) * step_);
    }

    void add_copy() {
        std::size_t i = copies_.size();
        auto over = [this, i](Time now, Time t) { return overestimate(i, prediction_->at(now, t)); };
        copies_.push_back(Copy{CoverCopyState(origin_, horizon_, theta_, over), FirstFit(*builder_), {}});
    }

    const LoadVectorPrediction* prediction_;
    bool uniform_;
    Time origin_;
    Time horizon_;
    ScheduleBuilder* builder_;
    Rational step_{1};
    Rational theta_{1};
    std::deque<Copy> copies_;
    std::vector<IntervalId> dedicated_;
    std::size_t departed_dedicated_ = 0;
    std::unordered_map<IntervalId, int> live_;
};

inline OnlineCoveringResult online_covering_algorithm(const Instance& inst, const LoadVectorPrediction& prediction) {
    ScheduleBuilder builder;
    OnlineCoveringAlgorithm alg(prediction, inst.uniform(), inst.origin(), inst.horizon(), builder);
    replay(
        inst, [&](const Interval& iv) { alg.arrive(iv.id, iv.start, iv.size, iv.end); },
        [&](const Interval& iv) { alg.depart(iv.id, iv.end); });
    OnlineCoveringResult r;
    alg.summarize(r);
    r.schedule = builder.build(inst);
    return r;
}

inline OnlineCoveringResult online_covering_algorithm(const Instance& inst) {
    return online_covering_algorithm(inst, exact_load_prediction(inst));
}

}  // namespace dbp
