#include "catch_amalgamated.hpp"

#include "dbp/harness/experiment.hpp"
#include "fixtures.hpp"

#include <sstream>

using namespace dbp;
using namespace dbp::harness;
using fixtures::instance_a;

namespace {

bool same_intervals(const Instance& a, const Instance& b) {
    if (a.size() != b.size()) return false;
    for (const Interval& iv : a) {
        if (!b.has_id(iv.id)) return false;
        const Interval& o = b.by_id(iv.id);
        if (o.start != iv.start || o.end != iv.end || o.size != iv.size) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("trace parsing and round trip") {
    std::istringstream text("# id,arrival,departure,size\n1,0,4,1/2\n2, 0, 2, 0.5\n\n3,1,3,1/2 # comment\n4,2,4,2/4\n");
    Trace t = parse_trace(text);
    CHECK(same_intervals(t.instance, instance_a()));
    CHECK(t.predicted_lengths.empty());

    std::ostringstream out;
    write_trace(out, instance_a());
    std::istringstream back(out.str());
    CHECK(same_intervals(parse_trace(back).instance, instance_a()));

    std::unordered_map<IntervalId, long double> pred{{1, 3.25L}, {2, 2.0L}};
    std::ostringstream with;
    write_trace(with, instance_a(), &pred);
    std::istringstream wback(with.str());
    Trace tp = parse_trace(wback);
    CHECK(tp.predicted_lengths.at(1) == 3.25L);
    CHECK(tp.predicted_lengths.size() == 2);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Instance inst = fixtures::random_small(seed, 30, 40);
        std::ostringstream o;
        write_trace(o, inst);
        std::istringstream i(o.str());
        CHECK(same_intervals(parse_trace(i).instance, inst));
    }

    std::istringstream empty("");
    CHECK(parse_trace(empty).instance.empty());
}

TEST_CASE("trace errors carry line numbers") {
    auto line_of = [](const std::string& s) -> std::size_t {
        std::istringstream in(s);
        try {
            parse_trace(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("1,0,4,1/2\n2,0,2,3/2\n") == 2);
    CHECK(line_of("# header\n1,0,4,1/2\n\n1,1,2,1/2\n") == 4);
    CHECK(line_of("1,0.5,4,1/2\n") == 1);
    CHECK(line_of("1,4,4,1/2\n") == 1);
    CHECK(line_of("1,0,4\n") == 1);
    CHECK(line_of("1,0,4,0\n") == 1);
    CHECK(line_of("1,0,4,abc\n") == 1);
    CHECK_THROWS_AS(read_trace("/nonexistent/trace.csv"), std::runtime_error);
}

TEST_CASE("load sidecar and schedule files round trip") {
    Instance a = instance_a();
    LoadVector v = compute_load_vector(a);
    std::ostringstream o;
    write_load_sidecar(o, v);
    std::istringstream i(o.str());
    LoadVector back = parse_load_sidecar(i);
    CHECK(back.origin() == v.origin());
    CHECK(back.values() == v.values());

    Schedule s = first_fit_dynamic(a);
    std::ostringstream so;
    write_schedule(so, s);
    std::istringstream si(so.str());
    Schedule sb = parse_schedule(si, a);
    CHECK(sb.cost() == s.cost());
    CHECK(sb.assignment() == s.assignment());
}

TEST_CASE("generators") {
    // Pinned seed: this draw is exactly the four-request example.
    Instance pinned = generate_uniform(2, 4, 4, LengthDist::parse("uniform:2:4"), 1132);
    CHECK(same_intervals(pinned, instance_a()));
    CHECK(same_intervals(generate_instance(GeneratorSpec::parse("uniform:g=2,n=4,T=4,len=uniform:2:4"), 1132),
                         instance_a()));

    CHECK(generate_uniform(3, 0, 10, LengthDist::parse("fixed:2"), 1).empty());

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Instance n = generate_nonuniform(Rational(1, 4), 100, 50, LengthDist::parse("pow2:4"), seed);
        CHECK(n.beta() <= Rational(1, 4));
        CHECK(n.max_length() <= 16);
        CHECK(same_intervals(n, generate_nonuniform(Rational(1, 4), 100, 50, LengthDist::parse("pow2:4"), seed)));
        Instance b = generate_burst(0, Rational(1, 2), 40, 30, LengthDist::parse("uniform:1:10"), seed);
        for (const Interval& iv : b) CHECK(iv.contains(15));
    }

    GeneratorSpec s = GeneratorSpec::parse("nonuniform:beta=1/4,n=12,T=30,len=fixed:3");
    CHECK(s.kind == "nonuniform");
    CHECK(s.beta_max == Rational(1, 4));
    CHECK(GeneratorSpec::parse(s.to_string()).to_string() == s.to_string());
    CHECK_THROWS_AS(GeneratorSpec::parse("zipf:n=3"), std::invalid_argument);
    CHECK_THROWS_AS(GeneratorSpec::parse("uniform:q=3"), std::invalid_argument);
    CHECK_THROWS_AS(LengthDist::parse("uniform:5:2"), std::invalid_argument);
    CHECK_THROWS_AS(generate_uniform(0, 3, 10, LengthDist::parse("fixed:1"), 1), std::invalid_argument);
}

TEST_CASE("experiment reports") {
    std::ostringstream o;
    write_trace(o, instance_a());
    std::string path = "test_harness_instance_a.csv";
    {
        std::ofstream f(path);
        f << o.str();
    }
    ExperimentConfig cfg;
    cfg.algorithm = "covering";
    cfg.trace_path = path;
    Report r = run_experiment(cfg);
    CHECK(r.ok());
    CHECK(std::stoll(*r.get("cost")) <= 12);
    CHECK(r.get("check.valid") == "ok");
    std::remove(path.c_str());

    ExperimentConfig comb;
    comb.algorithm = "combined";
    comb.generator = GeneratorSpec::parse("uniform:g=2,n=6,T=8,len=uniform:1:4");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        comb.seed = seed;
        Report c = run_experiment(comb);
        CHECK(c.ok());
        REQUIRE(c.get("opt"));
        CHECK(std::stoll(*c.get("cost")) >= std::stoll(*c.get("opt")));
    }

    for (const std::string& alg : algorithm_names()) {
        ExperimentConfig e;
        e.algorithm = alg;
        e.noise = {0.25, 0.25, 0.25};
        e.generator = GeneratorSpec::parse("nonuniform:beta=1/2,n=40,T=40,len=uniform:1:12");
        e.seed = 9;
        Report a1 = run_experiment(e);
        Report a2 = run_experiment(e);
        CHECK(a1.ok());
        CHECK(a1.to_text(false) == a2.to_text(false));
    }

    ExperimentConfig bad;
    bad.algorithm = "nope";
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
}

TEST_CASE("sweep returns reports in seed order") {
    ExperimentConfig base;
    base.algorithm = "first-fit";
    base.generator = GeneratorSpec::parse("uniform:g=3,n=7,T=10,len=uniform:1:5");
    std::vector<Report> serial = sweep(base, 100, 160, 1);
    std::vector<Report> parallel = sweep(base, 100, 160, 4);
    REQUIRE(serial.size() == 60);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].ok());
        CHECK(serial[i].get("seed") == std::to_string(100 + i));
        CHECK(serial[i].to_text(false) == parallel[i].to_text(false));
    }
    CHECK(sweep(base, 5, 5).empty());
}
