#pragma once

#include "dbp/checks.hpp"
#include "dbp/harness/generators.hpp"
#include "dbp/harness/trace.hpp"
#include "dbp/offline.hpp"
#include "dbp/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace dbp::harness {

inline const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names{"first-fit", "covering",  "density",         "partition",
                                                "transform", "combined", "online-covering"};
    return names;
}

struct ExperimentConfig {
    std::string algorithm = "covering";
    int k = 6;
    std::string packer = "auto";  // auto | next-fit | harmonic
    NoiseParams noise;
    std::optional<GeneratorSpec> generator;
    std::string trace_path;
    std::string loads_path;  // optional load sidecar for online-covering
    std::uint64_t seed = 1;
    std::size_t brute_force_limit = 8;
};

/// Ordered key=value metrics, one per line.
class Report {
public:
    void set(std::string key, std::string value) {
        for (auto& [k, v] : entries_)
            if (k == key) {
                v = std::move(value);
                return;
            }
        entries_.emplace_back(std::move(key), std::move(value));
    }
    void set(std::string key, const Rational& value) { set(std::move(key), to_string(value)); }
    void set(std::string key, std::int64_t value) { set(std::move(key), std::to_string(value)); }
    void set(std::string key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g", value);
        set(std::move(key), std::string(buf));
    }

    std::optional<std::string> get(const std::string& key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return v;
        return std::nullopt;
    }

    void fail(const std::string& check, const std::string& message) {
        violations_.push_back(check + ": " + message);
        set("check." + check, "FAIL");
    }
    void pass(const std::string& check) { set("check." + check, "ok"); }
    void check(const std::string& name, const std::optional<std::string>& failure) {
        if (failure)
            fail(name, *failure);
        else
            pass(name);
    }

    bool ok() const { return violations_.empty(); }
    const std::vector<std::string>& violations() const { return violations_; }

    std::string to_text(bool with_wall_time = true) const {
        std::ostringstream out;
        for (const auto& [k, v] : entries_) {
            if (!with_wall_time && k == "wall_time_ms") continue;
            out << k << '=' << v << '\n';
        }
        out << "violations=" << violations_.size() << '\n';
        for (const std::string& v : violations_) out << "violation=" << v << '\n';
        return out.str();
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::vector<std::string> violations_;
};

inline PackerFactory packer_for(const ExperimentConfig& cfg, const Instance& inst) {
    if (cfg.packer == "next-fit") return next_fit_factory();
    if (cfg.packer == "harmonic") return harmonic_factory(cfg.k);
    if (cfg.packer == "auto") return default_packer(inst, cfg.k);
    throw std::invalid_argument("unknown packer '" + cfg.packer + "'");
}

inline bool uses_next_fit(const ExperimentConfig& cfg, const Instance& inst) {
    return cfg.packer == "next-fit" || (cfg.packer == "auto" && inst.uniform());
}

/// Runs one algorithm on one instance, validates the schedule and checks
/// every bound that applies. Brute-force OPT is computed for instances of
/// at most `brute_force_limit` intervals.
inline Report run_on_instance(const Instance& inst, const ExperimentConfig& cfg, const Trace* trace = nullptr,
                              const LoadVector* loads = nullptr, Schedule* schedule_out = nullptr) {
    auto started = std::chrono::steady_clock::now();
    Report rep;
    rep.set("algorithm", cfg.algorithm);
    rep.set("seed", static_cast<std::int64_t>(cfg.seed));
    rep.set("intervals", static_cast<std::int64_t>(inst.size()));

    LoadVector raw = compute_load_vector(inst, LoadMode::Raw);
    LoadVector ceiled = compute_load_vector(inst, LoadMode::Ceiled);
    rep.set("uniform", std::string(inst.uniform() ? "true" : "false"));
    rep.set("mu", inst.mu());
    rep.set("beta", inst.beta());
    rep.set("horizon", inst.horizon());
    rep.set("norm_0", raw.norm_0());
    rep.set("norm_1", raw.norm_1());
    rep.set("norm_1_ceiled", ceiled.norm_1());
    rep.set("norm_inf", raw.norm_inf());
    rep.set("v_avg", raw.average());

    std::optional<Time> opt;
    if (!inst.empty() && inst.size() <= cfg.brute_force_limit) {
        opt = brute_force_opt(inst, cfg.brute_force_limit).cost;
        rep.set("opt", *opt);
    }

    Schedule schedule;
    const std::string& alg = cfg.algorithm;
    if (alg == "first-fit") {
        schedule = first_fit_dynamic(inst);
        Rational b = first_fit_bound(inst);
        rep.set("bound.first_fit", b);
        rep.check("first_fit_bound", schedule.cost() <= b ? std::nullopt
                                                           : std::optional<std::string>("cost above First-Fit bound"));
    } else if (alg == "covering") {
        schedule = covering_algorithm(inst);
        CoverBound b = offline_covering_bound(inst);
        rep.set("bound.covering", b.value);
        rep.set("bound.covering_form", std::string(b.form));
        rep.check("covering_bound",
                  schedule.cost() <= b.value ? std::nullopt : std::optional<std::string>("cost above covering bound"));
    } else if (alg == "density") {
        DensityResult d = density_algorithm_detailed(inst);
        schedule = std::move(d.schedule);
        rep.set("dense_sets", static_cast<std::int64_t>(d.dense_sets.size()));
        rep.set("dense_fallbacks", static_cast<std::int64_t>(d.fallbacks));
    } else if (alg == "partition") {
        if (cfg.k < 3) throw std::invalid_argument("partition needs k >= 3");
        schedule = partition_algorithm(inst, cfg.k, [](const Instance& part) { return covering_algorithm(part); });
        if (opt) {
            Rational b = partition_bound(cfg.k, *opt, raw.norm_0());
            rep.set("bound.partition", b);
            rep.check("partition_bound",
                      schedule.cost() <= b ? std::nullopt : std::optional<std::string>("cost above partition bound"));
        }
    } else if (alg == "transform") {
        schedule = dynamic_transform(inst, packer_for(cfg, inst));
        if (opt) {
            bool nf = uses_next_fit(cfg, inst);
            Rational c = nf ? next_fit_constant(inst.uniform(), inst.beta()) : harmonic_ratio(cfg.k);
            std::int64_t k = nf ? 1 : cfg.k;
            Rational b = transform_bound(c, inst.mu(), *opt, k, k, raw.norm_0());
            rep.set("bound.transform", b);
            rep.check("transform_bound",
                      schedule.cost() <= b ? std::nullopt : std::optional<std::string>("cost above transform bound"));
        }
    } else if (alg == "combined") {
        PredictionBundle pred = apply_noise(cfg.noise, inst, cfg.seed);
        if (trace && !trace->predicted_lengths.empty() && cfg.noise.noiseless())
            for (const auto& [id, len] : trace->predicted_lengths) pred.lengths[id] = len;
        if (inst.empty()) {
            rep.set("cost", std::int64_t{0});
        } else {
            CombinedConfig cc;
            cc.k = cfg.k;
            cc.packer = packer_for(cfg, inst);
            CombinedResult r = combined_algorithm(inst, pred, cc);
            schedule = std::move(r.schedule);
            r.schedule = Schedule();
            rep.set("predicted_v_avg", static_cast<double>(pred.v_avg));
            rep.set("max_class", static_cast<std::int64_t>(r.max_class));
            rep.check("class_first_fit_load", check_first_fit_class_loads(inst, r));
            if (cfg.noise.noiseless() && inst.min_length() == 1 && !(trace && !trace->predicted_lengths.empty()))
                rep.check("class_count", check_class_count(inst, r));
            if (opt) {
                double b = noise_bound(static_cast<double>(*opt), static_cast<double>(inst.horizon()),
                                       to_double(raw.average()), to_double(inst.mu()), cfg.noise.delta,
                                       cfg.noise.alpha, cfg.noise.lambda);
                // The slack constant is empirical, so exceeding it is reported but not a violation.
                rep.set("bound.noise", b);
                rep.set("advisory.noise_bound",
                        std::string(static_cast<double>(schedule.cost()) <= b + 1e-9 ? "within" : "exceeded"));
            }
        }
    } else if (alg == "online-covering") {
        OnlineCoveringResult r;
        if (loads) {
            Rational nb(0);
            for (const Interval& iv : inst)
                if (iv.size <= Rational(1, 4)) nb = std::max(nb, iv.size);
            r = online_covering_algorithm(inst, LoadVectorPrediction(*loads, std::max<Time>(inst.max_length(), 1), nb));
        } else {
            r = online_covering_algorithm(inst);
        }
        schedule = std::move(r.schedule);
        rep.set("copies", static_cast<std::int64_t>(r.copies.size()));
        CoverBound b = online_covering_bound(inst);
        rep.set("bound.online_covering", b.value);
        rep.set("bound.online_covering_form", std::string(b.form));
        rep.check("online_covering_bound", schedule.cost() <= b.value
                                               ? std::nullopt
                                               : std::optional<std::string>("cost above online covering bound"));
        if (!loads) {
            rep.check("accepted_load_sandwich", check_accepted_load_sandwich(r));
            rep.check("prefix_coverage", check_prefix_coverage(inst, r));
        }
    } else {
        throw std::invalid_argument("unknown algorithm '" + alg + "'");
    }

    Time cost = schedule.cost();
    rep.set("cost", cost);
    rep.set("machines", static_cast<std::int64_t>(schedule.machine_count()));
    if (raw.norm_1() > 0) rep.set("ratio", to_double(Rational(cost) / raw.norm_1()));
    auto violation = validate_schedule(inst, schedule);
    rep.check("valid", violation ? std::optional<std::string>(violation->message) : std::nullopt);
    rep.check("lower_bound", Rational(cost) >= ceiled.norm_1()
                                 ? std::nullopt
                                 : std::optional<std::string>("cost below the per-step load sum"));
    if (opt)
        rep.check("opt", cost >= *opt ? std::nullopt : std::optional<std::string>("cost below brute-force optimum"));

    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    rep.set("wall_time_ms", ms);
    if (schedule_out) *schedule_out = std::move(schedule);
    return rep;
}

/// Instance and schedule of a run, for callers that store them.
struct RunArtifacts {
    Instance instance;
    Schedule schedule;
};

inline Report run_experiment(const ExperimentConfig& cfg, RunArtifacts* artifacts = nullptr) {
    Schedule* schedule_out = artifacts ? &artifacts->schedule : nullptr;
    if (!cfg.trace_path.empty()) {
        Trace trace = read_trace(cfg.trace_path);
        std::optional<LoadVector> loads;
        if (!cfg.loads_path.empty()) {
            auto in = detail::open_input(cfg.loads_path);
            loads = parse_load_sidecar(in, cfg.loads_path);
        }
        Report r = run_on_instance(trace.instance, cfg, &trace, loads ? &*loads : nullptr, schedule_out);
        r.set("source", cfg.trace_path);
        if (artifacts) artifacts->instance = std::move(trace.instance);
        return r;
    }
    GeneratorSpec spec = cfg.generator.value_or(GeneratorSpec{});
    Instance inst = generate_instance(spec, cfg.seed);
    Report r = run_on_instance(inst, cfg, nullptr, nullptr, schedule_out);
    r.set("source", spec.to_string());
    if (artifacts) artifacts->instance = std::move(inst);
    return r;
}

/// Runs seeds [first, last) with up to `threads` workers; reports come back
/// in seed order.
inline std::vector<Report> sweep(const ExperimentConfig& base, std::uint64_t first, std::uint64_t last,
                                 unsigned threads = std::thread::hardware_concurrency()) {
    std::vector<Report> out(last > first ? last - first : 0);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(out.size());
    auto work = [&] {
        for (std::size_t i; (i = next++) < out.size();) {
            ExperimentConfig cfg = base;
            cfg.seed = first + i;
            try {
                out[i] = run_experiment(cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(out.size(), 1))));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace dbp::harness
