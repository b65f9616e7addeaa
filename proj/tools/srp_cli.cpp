// Command-line front end: solve a scenario file, run the built-in demo,
// or run the invariant self-tests.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "srp/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

nlohmann::json record_to_json(const srp::RunRecord& rec) {
    return nlohmann::json{{"digest", rec.digest},
                          {"trace", rec.trace},
                          {"approx", rec.approx},
                          {"true_source", rec.true_source},
                          {"distance_error", rec.distance_error},
                          {"wall_time_sec", rec.wall_time_sec},
                          {"halt", rec.halt}};
}

void print_appendix_style(const srp::RunRecord& rec) {
    int iter = 0;
    for (const std::string& line : rec.trace) {
        if (line.rfind("iter ", 0) != 0) continue;
        std::istringstream ss(line);
        std::string word;
        int k = 0;
        std::size_t n = 0;
        ss >> word >> k >> word >> n;
        std::cout << "Iteration " << k << ": " << n << " coverands\n";
        ++iter;
    }
    (void)iter;
    std::cout << "Approximated source: Point(" << srp::detail::fmt_point(rec.approx) << ")\n";
    std::cout << "Real source: Point(" << srp::detail::fmt_point(rec.true_source) << ")\n";
    std::cout << "Distance error: " << srp::detail::fmt17(rec.distance_error) << "\n";
    std::cout << "Time: " << rec.wall_time_sec << " sec\n";
}

int run_scenario(const srp::Scenario& sc, const std::string& trace_path,
                 const std::string& json_path) {
    srp::RunRecord rec;
    try {
        rec = srp::run(sc);
    } catch (const srp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        for (const std::string& line : rec.trace) out << line << "\n";
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        out << record_to_json(rec).dump(2) << "\n";
    }
    print_appendix_style(rec);
    return kExitOk;
}

srp::Scenario appendix_scenario() {
    const std::string config = R"(
[space]
dim = 2
p = 5.6789

[sensors]
kind = random_box
count = 64
seed = 20191001
lo = -10, -10
hi = 10, 10

[source]
kind = random_box
seed = 7701565
lo = -10, -10
hi = 10, 10
emit_time = 0

[solve]
algorithm = rc
defect = sup
delta = 0.1
initial_center = 0, 0
initial_radius = 12
)";
    return srp::parse_scenario(config);
}

int selftest() {
    using namespace srp;
    int failures = 0;
    auto check = [&](bool ok, const std::string& name) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    SplitMix64 rng(12345);
    for (double p : {1.0, 2.0, 3.5}) {
        LpSpace space(3, p);
        bool metric_ok = true;
        for (int it = 0; it < 2000; ++it) {
            Point a{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
            Point b{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
            Point c{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
            const double ab = space.distance(a, b), bc = space.distance(b, c),
                         ac = space.distance(a, c);
            metric_ok &= ab >= 0 && std::abs(ab - space.distance(b, a)) <= 1e-12;
            metric_ok &= ac <= ab + bc + 1e-12;
            metric_ok &= std::abs(ac - bc) <= ab + 1e-12;
        }
        check(metric_ok, "metric axioms p=" + detail::fmt17(p));
    }

    {
        LpSpace space(2, 2.0);
        bool lipschitz_ok = true, dominance_ok = true;
        SplitMix64 gen(99);
        std::vector<Point> sensors;
        for (int i = 0; i < 8; ++i)
            sensors.push_back({gen.uniform(-3, 3), gen.uniform(-3, 3)});
        auto inst = SrpInstance::from_ground_truth(space, sensors, {{0.5, -0.25}, 0.0});
        for (int it = 0; it < 2000; ++it) {
            Point x{gen.uniform(-4, 4), gen.uniform(-4, 4)};
            Point y{gen.uniform(-4, 4), gen.uniform(-4, 4)};
            lipschitz_ok &= std::abs(inst.defect_sup(x) - inst.defect_sup(y)) <=
                            2 * space.distance(x, y) + 1e-12;
            dominance_ok &= inst.defect_sum(x) <= inst.defect_sup(x) + 1e-12;
        }
        check(lipschitz_ok, "defect Lipschitz bound");
        check(dominance_ok, "D1 <= Dinf");
        check(inst.defect({0.5, -0.25}) <= 1e-12, "defect zero at source");
    }

    return failures == 0 ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Source ranging toolkit"};
    app.require_subcommand(1);

    std::string config_path, trace_path, json_path;
    CLI::App* solve = app.add_subcommand("solve", "Run a scenario from a config file");
    solve->add_option("--config", config_path, "scenario config file")->required();
    solve->add_option("--trace", trace_path, "write per-iteration trace here");
    solve->add_option("--json-report", json_path, "write the JSON report here");

    std::string demo_trace, demo_json;
    CLI::App* demo = app.add_subcommand("demo-appendix", "Run the built-in reference scenario");
    demo->add_option("--trace", demo_trace, "write per-iteration trace here");
    demo->add_option("--json-report", demo_json, "write the JSON report here");

    app.add_subcommand("selftest", "Run the invariant suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "config error: cannot open " << config_path << "\n";
                return kExitConfig;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            srp::Scenario sc;
            try {
                sc = srp::parse_scenario(buf.str());
            } catch (const srp::ConfigError& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return kExitConfig;
            }
            return run_scenario(sc, trace_path, json_path);
        }
        if (demo->parsed()) return run_scenario(appendix_scenario(), demo_trace, demo_json);
        return selftest();
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}
