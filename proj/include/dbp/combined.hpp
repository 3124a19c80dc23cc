#pragma once

#include "dbp/first_fit.hpp"
#include "dbp/predictions.hpp"
#include "dbp/transform.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dbp {

struct CombinedConfig {
    int k = 6;
    std::optional<PackerFactory> packer;  // defaults by instance type
};

struct CombinedRoute {
    IntervalId id = 0;
    int cls = 1;
    bool first_fit = false;
    long double class_load = 0;  // class load at arrival, including the interval
};

/// Online scheduler using predicted lengths and a predicted average load.
/// Each arrival is classified by predicted length; if the live load of its
/// class (itself included) is at most q_j it joins a shared First-Fit,
/// otherwise it goes to that class's transform over a bounded-space packer.
class CombinedAlgorithm {
public:
    CombinedAlgorithm(long double v_avg, PackerFactory packer, ScheduleBuilder& builder)
        : classes_(v_avg), packer_(std::move(packer)), builder_(&builder), first_fit_(builder) {}

    MachineId arrive(IntervalId id, Time now, const Rational& size, long double predicted_length) {
        int j = classes_.classify(std::max(1.0L, predicted_length));
        Rational& load = class_load_[j];
        load += size;
        CombinedRoute route{id, j, false, static_cast<long double>(to_double(load))};
        route.first_fit = route.class_load <= classes_.threshold(j) + kClassTolerance;
        live_.emplace(id, Live{j, size, route.first_fit});
        routes_.push_back(route);
        if (route.first_fit) return first_fit_.arrive(id, now, size);
        auto it = copies_.find(j);
        if (it == copies_.end())
            it = copies_.emplace(j, std::make_unique<DynamicTransform>(packer_(), *builder_)).first;
        return it->second->arrive(id, now, size);
    }

    void depart(IntervalId id, Time now) {
        auto it = live_.find(id);
        if (it == live_.end()) throw std::logic_error("departure of an interval the scheduler does not hold");
        class_load_[it->second.cls] -= it->second.size;
        if (it->second.first_fit)
            first_fit_.depart(id, now);
        else
            copies_.at(it->second.cls)->depart(id, now);
        live_.erase(it);
    }

    std::size_t active_machines() const {
        std::size_t n = first_fit_.active_machines();
        for (const auto& [j, c] : copies_) n += c->active_machines();
        return n;
    }

    const LengthClasses& classes() const { return classes_; }
    const std::vector<CombinedRoute>& routes() const { return routes_; }

private:
    struct Live {
        int cls;
        Rational size;
        bool first_fit;
    };

    LengthClasses classes_;
    PackerFactory packer_;
    ScheduleBuilder* builder_;
    FirstFit first_fit_;
    std::map<int, std::unique_ptr<DynamicTransform>> copies_;
    std::map<int, Rational> class_load_;
    std::unordered_map<IntervalId, Live> live_;
    std::vector<CombinedRoute> routes_;
};

struct CombinedResult {
    Schedule schedule;
    std::vector<CombinedRoute> routes;
    long double v_avg = 0;
    int max_class = 0;  // largest class index that received an interval
};

inline PackerFactory default_packer(const Instance& inst, int k) {
    return inst.uniform() ? next_fit_factory() : harmonic_factory(k);
}

inline CombinedResult combined_algorithm(const Instance& inst, const PredictionBundle& predictions,
                                         const CombinedConfig& config = {}) {
    if (config.k < 2) throw std::invalid_argument("combined algorithm needs k >= 2");
    CombinedResult result;
    if (inst.empty()) return result;
    if (!(predictions.v_avg > 0)) throw std::invalid_argument("predicted average load must be positive");

    ScheduleBuilder builder;
    CombinedAlgorithm alg(predictions.v_avg, config.packer ? *config.packer : default_packer(inst, config.k),
                          builder);
    replay(
        inst,
        [&](const Interval& iv) {
            auto p = predictions.lengths.find(iv.id);
            if (p == predictions.lengths.end())
                throw std::invalid_argument("no predicted length for interval " + std::to_string(iv.id));
            alg.arrive(iv.id, iv.start, iv.size, p->second);
        },
        [&](const Interval& iv) { alg.depart(iv.id, iv.end); });

    result.schedule = builder.build(inst);
    result.routes = alg.routes();
    result.v_avg = predictions.v_avg;
    for (const CombinedRoute& r : result.routes) result.max_class = std::max(result.max_class, r.cls);
    return result;
}

}  // namespace dbp
