// Scenario generation, config parsing, and run/trace emission.
#ifndef SRP_HARNESS_HPP
#define SRP_HARNESS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "srp/epsnet.hpp"
#include "srp/problem.hpp"
#include "srp/rc.hpp"
#include "srp/space.hpp"
#include "srp/sphere.hpp"

namespace srp {

/// splitmix64: the fixed scenario generator. The update constants are part
/// of the file-format contract so ports reproduce identical scenarios.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [lo, hi) from the top 53 bits.
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

private:
    std::uint64_t state_;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SensorSpec { RandomBox, CanonicalL2, Explicit };
enum class SourceSpec { Explicit, RandomBox };
enum class Algorithm { Rc, Sphere, Epsnet };

struct Scenario {
    std::size_t dim = 2;
    double p = 2.0;

    SensorSpec sensor_spec = SensorSpec::RandomBox;
    std::size_t sensor_count = 0;
    std::uint64_t sensor_seed = 0;
    Point sensor_lo, sensor_hi;
    std::vector<Point> explicit_sensors;

    SourceSpec source_spec = SourceSpec::Explicit;
    Point source_point;
    std::uint64_t source_seed = 0;
    Point source_lo, source_hi;
    double emit_time = 0.0;

    Algorithm algorithm = Algorithm::Rc;
    DefectKind defect_kind = DefectKind::Sup;
    double delta = 1e-3;
    Point initial_center;
    double initial_radius = 0.0;
    int max_level = 60;
    std::size_t max_family = 10'000'000;
    double bound = 0.0;        // M for sphere/epsnet
    std::size_t budget = 0;    // epsnet step budget
    std::size_t samples = 256; // sphere angular samples
};

struct RunRecord {
    std::string digest;
    std::vector<std::string> trace;
    Point approx;
    Point true_source;
    double distance_error = 0.0;
    double wall_time_sec = 0.0;
    std::string halt;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_point(const Point& x) {
    std::string out = "[";
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j) out += ", ";
        out += fmt17(x[j]);
    }
    return out + "]";
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_reals(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad number: '" + item + "'");
        }
    }
    return out;
}

}  // namespace detail

/// Key-value config with [section] headers; keys may repeat within a section.
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text) {
        ConfigFile cfg;
        std::stringstream ss(text);
        std::string line, section;
        std::size_t lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
                section = detail::trim(line.substr(1, line.size() - 2));
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            cfg.entries_[section].emplace_back(detail::trim(line.substr(0, eq)),
                                               detail::trim(line.substr(eq + 1)));
        }
        return cfg;
    }

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        auto it = entries_.find(section);
        if (it == entries_.end()) return std::nullopt;
        std::optional<std::string> found;
        for (const auto& [k, v] : it->second)
            if (k == key) found = v;  // last wins
        return found;
    }

    std::string require(const std::string& section, const std::string& key) const {
        auto v = get(section, key);
        if (!v) throw ConfigError("missing [" + section + "] " + key);
        return *v;
    }

    std::vector<std::string> get_all(const std::string& section, const std::string& key) const {
        std::vector<std::string> out;
        auto it = entries_.find(section);
        if (it == entries_.end()) return out;
        for (const auto& [k, v] : it->second)
            if (k == key) out.push_back(v);
        return out;
    }

private:
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> entries_;
};

inline Scenario parse_scenario(const std::string& text) {
    const ConfigFile cfg = ConfigFile::parse(text);
    Scenario sc;
    sc.dim = static_cast<std::size_t>(std::stoul(cfg.require("space", "dim")));
    sc.p = detail::parse_reals(cfg.require("space", "p")).at(0);

    const std::string skind = cfg.get("sensors", "kind").value_or("random_box");
    if (skind == "random_box") {
        sc.sensor_spec = SensorSpec::RandomBox;
        sc.sensor_count = static_cast<std::size_t>(std::stoul(cfg.require("sensors", "count")));
        sc.sensor_seed = std::stoull(cfg.require("sensors", "seed"));
        sc.sensor_lo = detail::parse_reals(cfg.require("sensors", "lo"));
        sc.sensor_hi = detail::parse_reals(cfg.require("sensors", "hi"));
    } else if (skind == "canonical_l2") {
        sc.sensor_spec = SensorSpec::CanonicalL2;
    } else if (skind == "explicit") {
        sc.sensor_spec = SensorSpec::Explicit;
        for (const std::string& v : cfg.get_all("sensors", "sensor"))
            sc.explicit_sensors.push_back(detail::parse_reals(v));
        if (sc.explicit_sensors.empty()) throw ConfigError("explicit sensors: none given");
    } else {
        throw ConfigError("unknown sensors kind '" + skind + "'");
    }

    const std::string srckind = cfg.get("source", "kind").value_or("explicit");
    if (srckind == "explicit") {
        sc.source_spec = SourceSpec::Explicit;
        sc.source_point = detail::parse_reals(cfg.require("source", "point"));
    } else if (srckind == "random_box") {
        sc.source_spec = SourceSpec::RandomBox;
        sc.source_seed = std::stoull(cfg.require("source", "seed"));
        sc.source_lo = detail::parse_reals(cfg.require("source", "lo"));
        sc.source_hi = detail::parse_reals(cfg.require("source", "hi"));
    } else {
        throw ConfigError("unknown source kind '" + srckind + "'");
    }
    if (auto v = cfg.get("source", "emit_time")) sc.emit_time = detail::parse_reals(*v).at(0);

    const std::string alg = cfg.get("solve", "algorithm").value_or("rc");
    if (alg == "rc")
        sc.algorithm = Algorithm::Rc;
    else if (alg == "sphere")
        sc.algorithm = Algorithm::Sphere;
    else if (alg == "epsnet")
        sc.algorithm = Algorithm::Epsnet;
    else
        throw ConfigError("unknown algorithm '" + alg + "'");

    const std::string dk = cfg.get("solve", "defect").value_or("sup");
    if (dk == "sup")
        sc.defect_kind = DefectKind::Sup;
    else if (dk == "sum")
        sc.defect_kind = DefectKind::Sum;
    else
        throw ConfigError("unknown defect '" + dk + "'");

    if (auto v = cfg.get("solve", "delta")) sc.delta = detail::parse_reals(*v).at(0);
    if (auto v = cfg.get("solve", "initial_center")) sc.initial_center = detail::parse_reals(*v);
    if (auto v = cfg.get("solve", "initial_radius"))
        sc.initial_radius = detail::parse_reals(*v).at(0);
    if (auto v = cfg.get("solve", "max_level")) sc.max_level = std::stoi(*v);
    if (auto v = cfg.get("solve", "max_family"))
        sc.max_family = static_cast<std::size_t>(std::stoull(*v));
    if (auto v = cfg.get("solve", "bound")) sc.bound = detail::parse_reals(*v).at(0);
    if (auto v = cfg.get("solve", "budget")) sc.budget = static_cast<std::size_t>(std::stoull(*v));
    if (auto v = cfg.get("solve", "samples"))
        sc.samples = static_cast<std::size_t>(std::stoull(*v));
    return sc;
}

/// Canonical serialization: the digest source and the determinism anchor.
inline std::string canonical_string(const Scenario& sc) {
    std::string out;
    auto add = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
    add("dim", std::to_string(sc.dim));
    add("p", detail::fmt17(sc.p));
    add("sensor_spec", std::to_string(static_cast<int>(sc.sensor_spec)));
    add("sensor_count", std::to_string(sc.sensor_count));
    add("sensor_seed", std::to_string(sc.sensor_seed));
    add("sensor_lo", detail::fmt_point(sc.sensor_lo));
    add("sensor_hi", detail::fmt_point(sc.sensor_hi));
    for (const Point& r : sc.explicit_sensors) add("sensor", detail::fmt_point(r));
    add("source_spec", std::to_string(static_cast<int>(sc.source_spec)));
    add("source_point", detail::fmt_point(sc.source_point));
    add("source_seed", std::to_string(sc.source_seed));
    add("source_lo", detail::fmt_point(sc.source_lo));
    add("source_hi", detail::fmt_point(sc.source_hi));
    add("emit_time", detail::fmt17(sc.emit_time));
    add("algorithm", std::to_string(static_cast<int>(sc.algorithm)));
    add("defect", std::to_string(static_cast<int>(sc.defect_kind)));
    add("delta", detail::fmt17(sc.delta));
    add("initial_center", detail::fmt_point(sc.initial_center));
    add("initial_radius", detail::fmt17(sc.initial_radius));
    add("max_level", std::to_string(sc.max_level));
    add("max_family", std::to_string(sc.max_family));
    add("bound", detail::fmt17(sc.bound));
    add("budget", std::to_string(sc.budget));
    add("samples", std::to_string(sc.samples));
    return out;
}

inline std::string scenario_digest(const Scenario& sc) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(canonical_string(sc))));
    return buf;
}

namespace detail {

inline Point draw_box_point(SplitMix64& rng, const Point& lo, const Point& hi) {
    Point out(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j) out[j] = rng.uniform(lo[j], hi[j]);
    return out;
}

}  // namespace detail

/// Draws the instance and ground truth deterministically from the scenario.
inline std::pair<SrpInstance, GroundTruth> generate(const Scenario& sc) {
    LpSpace space(sc.dim, sc.p);
    std::vector<Point> sensors;
    switch (sc.sensor_spec) {
        case SensorSpec::RandomBox: {
            if (sc.sensor_lo.size() != sc.dim || sc.sensor_hi.size() != sc.dim)
                throw ConfigError("sensor box bounds must match dim");
            if (sc.sensor_count == 0) throw ConfigError("sensor count must be positive");
            SplitMix64 rng(sc.sensor_seed);
            for (std::size_t i = 0; i < sc.sensor_count; ++i)
                sensors.push_back(detail::draw_box_point(rng, sc.sensor_lo, sc.sensor_hi));
            break;
        }
        case SensorSpec::CanonicalL2: {
            // r_1 = -e_1, r_2 = theta, r_i = e_{i-2} for 3 <= i <= m+2.
            Point neg_e1(sc.dim, 0.0);
            neg_e1[0] = -1.0;
            sensors.push_back(neg_e1);
            sensors.push_back(Point(sc.dim, 0.0));
            for (std::size_t j = 0; j < sc.dim; ++j) {
                Point e(sc.dim, 0.0);
                e[j] = 1.0;
                sensors.push_back(e);
            }
            break;
        }
        case SensorSpec::Explicit:
            sensors = sc.explicit_sensors;
            if (sensors.empty()) throw ConfigError("explicit sensors: none given");
            break;
    }

    GroundTruth truth;
    truth.emit_time = sc.emit_time;
    if (sc.source_spec == SourceSpec::Explicit) {
        truth.source = sc.source_point;
    } else {
        if (sc.source_lo.size() != sc.dim || sc.source_hi.size() != sc.dim)
            throw ConfigError("source box bounds must match dim");
        SplitMix64 rng(sc.source_seed);
        truth.source = detail::draw_box_point(rng, sc.source_lo, sc.source_hi);
    }
    space.check_dim(truth.source);

    if (sc.algorithm == Algorithm::Rc) {
        if (sc.initial_center.size() != sc.dim || !(sc.initial_radius > 0.0))
            throw ConfigError("rc needs initial_center and initial_radius");
        if (space.distance(sc.initial_center, truth.source) > sc.initial_radius)
            throw ConfigError("source lies outside the declared initial coverand");
    }

    return {SrpInstance::from_ground_truth(space, std::move(sensors), truth, sc.defect_kind),
            truth};
}

/// Runs the scenario's solver and assembles the report. The trace mirrors
/// the fixed line format `iter <k> coverands <N> r_k <v> d_k <v>`.
inline RunRecord run(const Scenario& sc) {
    RunRecord rec;
    rec.digest = scenario_digest(sc);
    const auto t_start = std::chrono::steady_clock::now();

    switch (sc.algorithm) {
        case Algorithm::Rc: {
            auto [inst, truth] = generate(sc);
            RcConfig cfg;
            cfg.delta = sc.delta;
            cfg.defect_kind = sc.defect_kind;
            cfg.max_level = sc.max_level;
            cfg.max_family = sc.max_family;
            cfg.initial = Coverand::ball(sc.initial_center, sc.initial_radius);
            SolveReport report = rc_solve(inst, cfg, [&](const LevelRecord& r) {
                rec.trace.push_back("iter " + std::to_string(r.level) + " coverands " +
                                    std::to_string(r.survivors) + " r_k " +
                                    detail::fmt17(r.radius) + " d_k " +
                                    detail::fmt17(r.spread));
            });
            rec.approx = report.approx;
            rec.true_source = truth.source;
            rec.halt = report.halt == HaltReason::PrecisionReached ? "precision_reached"
                       : report.halt == HaltReason::BudgetExhausted ? "budget_exhausted"
                                                                    : "family_overflow";
            break;
        }
        case Algorithm::Sphere: {
            LpSpace space(sc.dim, sc.p);
            if (sc.source_spec != SourceSpec::Explicit)
                throw ConfigError("sphere scenarios need an explicit source");
            GroundTruth truth{sc.source_point, sc.emit_time};
            space.check_dim(truth.source);
            ArrivalOracle oracle = [&space, truth](const Point& r) {
                return truth.emit_time + space.distance(r, truth.source);
            };
            SphericalArrival arr = find_extremes(space, oracle, sc.samples);
            rec.trace.push_back("sphere t_b " + detail::fmt17(arr.t_b) + " t_w " +
                                detail::fmt17(arr.t_w));
            if (classify(arr) == SourceClass::Inside) {
                rec.approx = recover_inside(arr);
                rec.halt = "closed_form";
            } else {
                if (!(sc.bound > 0.0)) throw ConfigError("sphere outside case needs bound M");
                RayProblem rp = make_ray_problem(space, arr, oracle, sc.bound, sc.samples);
                rec.approx = recover_outside(rp, sc.delta, sc.max_level);
                rec.halt = "precision_reached";
            }
            rec.true_source = truth.source;
            break;
        }
        case Algorithm::Epsnet: {
            auto [inst, truth] = generate(sc);
            if (!(sc.bound > 0.0)) throw ConfigError("epsnet needs bound M");
            if (sc.budget == 0) throw ConfigError("epsnet needs a step budget");
            CompactFamily fam;
            for (std::size_t n = 1; n <= sc.dim; ++n)
                fam.members.push_back({inst.space(), n, sc.bound});
            fam.diam_bound = 2.0 * sc.bound;
            SequenceState st = run_sequence(inst, fam, sc.budget, [&](const EpsnetStep& s) {
                rec.trace.push_back("net n " + std::to_string(s.n) + " k " +
                                    std::to_string(s.k) + " survivors " +
                                    std::to_string(s.survivor_count) + " r_k " +
                                    detail::fmt17(s.radius));
            });
            if (st.sequence.empty())
                throw std::runtime_error("epsnet run produced no sequence points");
            rec.approx = st.sequence.back();
            rec.true_source = truth.source;
            rec.halt = "budget_exhausted";
            break;
        }
    }

    const auto t_end = std::chrono::steady_clock::now();
    rec.wall_time_sec = std::chrono::duration<double>(t_end - t_start).count();
    if (!rec.true_source.empty()) {
        LpSpace space(sc.dim, sc.p);
        rec.distance_error = space.distance(rec.approx, rec.true_source);
    }
    return rec;
}

}  // namespace srp

#endif  // SRP_HARNESS_HPP
