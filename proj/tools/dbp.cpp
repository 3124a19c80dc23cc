#include "dbp/dbp.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace dbp;
using namespace dbp::harness;

namespace {

struct Options {
    ExperimentConfig cfg;
    std::string generator = "uniform:g=2,n=20,T=50,len=uniform:1:10";
    std::string schedule_out;
    std::string trace_out;
    std::string loads_out;
    std::string schedule_in;
    std::uint64_t first = 0;
    std::uint64_t last = 100;
    unsigned threads = 0;
    bool no_wall_time = false;
    bool summary = false;
};

void add_experiment_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("-a,--algorithm", o.cfg.algorithm, "Scheduler")
        ->check(CLI::IsMember(algorithm_names()))
        ->capture_default_str();
    cmd->add_option("-k", o.cfg.k, "Bounded-space parameter for Harmonic and the size partition")->capture_default_str();
    cmd->add_option("--packer", o.cfg.packer, "Packer for transform and combined")
        ->check(CLI::IsMember({"auto", "next-fit", "harmonic"}))
        ->capture_default_str();
    cmd->add_option("--delta", o.cfg.noise.delta, "Average-load prediction error")->check(CLI::NonNegativeNumber);
    cmd->add_option("--alpha", o.cfg.noise.alpha, "Length under-prediction factor")->check(CLI::NonNegativeNumber);
    cmd->add_option("--lambda", o.cfg.noise.lambda, "Length over-prediction factor")->check(CLI::NonNegativeNumber);
    cmd->add_option("-g,--gen", o.generator, "Generator spec, e.g. nonuniform:beta=1/4,n=50,T=100,len=pow2:4")
        ->capture_default_str();
    cmd->add_option("--brute-force-limit", o.cfg.brute_force_limit, "Largest instance given an exact optimum")
        ->capture_default_str();
    cmd->add_flag("--no-wall-time", o.no_wall_time, "Omit wall time so reports compare byte for byte");
}

int run(Options& o) {
    o.cfg.generator = GeneratorSpec::parse(o.generator);
    RunArtifacts artifacts;
    Report r = run_experiment(o.cfg, &artifacts);
    std::cout << r.to_text(!o.no_wall_time);
    if (!o.schedule_out.empty()) {
        std::ofstream out(o.schedule_out);
        if (!out) throw std::runtime_error("cannot write " + o.schedule_out);
        write_schedule(out, artifacts.schedule);
    }
    if (!o.trace_out.empty()) {
        std::ofstream out(o.trace_out);
        if (!out) throw std::runtime_error("cannot write " + o.trace_out);
        write_trace(out, artifacts.instance);
    }
    return r.ok() ? 0 : 1;
}

int generate(Options& o) {
    Instance inst = generate_instance(GeneratorSpec::parse(o.generator), o.cfg.seed);
    if (o.trace_out.empty() || o.trace_out == "-") {
        write_trace(std::cout, inst);
    } else {
        std::ofstream out(o.trace_out);
        if (!out) throw std::runtime_error("cannot write " + o.trace_out);
        write_trace(out, inst);
    }
    if (!o.loads_out.empty()) {
        std::ofstream out(o.loads_out);
        if (!out) throw std::runtime_error("cannot write " + o.loads_out);
        write_load_sidecar(out, compute_load_vector(inst));
    }
    return 0;
}

int verify(Options& o) {
    Trace trace = read_trace(o.cfg.trace_path);
    auto in = harness::detail::open_input(o.schedule_in);
    Schedule s = parse_schedule(in, trace.instance, o.schedule_in);
    Report r;
    r.set("source", o.cfg.trace_path);
    r.set("intervals", static_cast<std::int64_t>(trace.instance.size()));
    r.set("machines", static_cast<std::int64_t>(s.machine_count()));
    auto v = validate_schedule(trace.instance, s);
    r.check("valid", v ? std::optional<std::string>(v->message) : std::nullopt);
    if (!v) {
        Rational lb = lower_bound_l1(trace.instance, LoadMode::Ceiled);
        r.set("cost", s.cost());
        r.set("norm_1_ceiled", lb);
        r.check("lower_bound", Rational(s.cost()) >= lb ? std::nullopt
                                                        : std::optional<std::string>("cost below the per-step load sum"));
    }
    std::cout << r.to_text();
    return r.ok() ? 0 : 1;
}

int run_sweep(Options& o) {
    o.cfg.generator = GeneratorSpec::parse(o.generator);
    unsigned threads = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<Report> reports = sweep(o.cfg, o.first, o.last, threads);
    std::size_t failed = 0;
    for (const Report& r : reports) {
        if (!r.ok()) ++failed;
        if (o.summary) {
            std::cout << "seed=" << *r.get("seed") << " cost=" << *r.get("cost")
                      << " ratio=" << r.get("ratio").value_or("nan") << " violations=" << r.violations().size() << '\n';
            for (const std::string& v : r.violations()) std::cout << "  violation=" << v << '\n';
        } else {
            std::cout << r.to_text(!o.no_wall_time) << '\n';
        }
    }
    std::cout << "runs=" << reports.size() << " failed=" << failed << '\n';
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic bin packing schedulers, generators and bound checks"};
    app.require_subcommand(1);
    Options o;

    CLI::App* run_cmd = app.add_subcommand("run", "Run one scheduler on a trace or a generated instance");
    add_experiment_flags(run_cmd, o);
    run_cmd->add_option("-t,--trace", o.cfg.trace_path, "Trace file (overrides --gen)")->check(CLI::ExistingFile);
    run_cmd->add_option("--loads", o.cfg.loads_path, "Per-step load sidecar for online-covering")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("-s,--seed", o.cfg.seed, "Seed for the generator and noise")->capture_default_str();
    run_cmd->add_option("--schedule-out", o.schedule_out, "Write the schedule as interval_id,machine_id");
    run_cmd->add_option("--trace-out", o.trace_out, "Write the instance that was run");

    CLI::App* gen_cmd = app.add_subcommand("generate", "Write a generated instance as a trace");
    gen_cmd->add_option("-g,--gen", o.generator, "Generator spec")->capture_default_str();
    gen_cmd->add_option("-s,--seed", o.cfg.seed, "Seed")->capture_default_str();
    gen_cmd->add_option("-o,--output", o.trace_out, "Trace path (default stdout)");
    gen_cmd->add_option("--loads-out", o.loads_out, "Also write the per-step load sidecar");

    CLI::App* verify_cmd = app.add_subcommand("verify", "Re-check a stored schedule against its trace");
    verify_cmd->add_option("-t,--trace", o.cfg.trace_path, "Trace file")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--schedule", o.schedule_in, "Schedule file")->required()->check(CLI::ExistingFile);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a seed range in parallel");
    add_experiment_flags(sweep_cmd, o);
    sweep_cmd->add_option("--from", o.first, "First seed")->capture_default_str();
    sweep_cmd->add_option("--to", o.last, "One past the last seed")->capture_default_str();
    sweep_cmd->add_option("-j,--threads", o.threads, "Worker threads (default: hardware concurrency)");
    sweep_cmd->add_flag("--summary", o.summary, "One line per seed instead of full reports");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run_cmd) return run(o);
        if (*gen_cmd) return generate(o);
        if (*verify_cmd) return verify(o);
        return run_sweep(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
