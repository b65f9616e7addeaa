// Source ranging problem instances: backward moments, defects, ball tests.
#ifndef SRP_PROBLEM_HPP
#define SRP_PROBLEM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "srp/space.hpp"

namespace srp {

enum class DefectKind { Sup, Sum };

/// The source and emission moment used to synthesize arrival times.
struct GroundTruth {
    Point source;
    double emit_time = 0.0;
};

/// Slack added to every D(c) <= 2r comparison. A false exclusion loses the
/// source for good, a false inclusion only costs another subdivision.
inline constexpr double kBallTestSlack = 1e-12;

/// An SRP instance: sensors r_i, arrival moments t_i, D1 weights p_i,
/// and the defect choice. Immutable after construction.
class SrpInstance {
public:
    SrpInstance(LpSpace space, std::vector<Point> sensors, std::vector<double> times,
                DefectKind kind = DefectKind::Sup, std::vector<double> weights = {})
        : space_(space),
          sensors_(std::move(sensors)),
          times_(std::move(times)),
          kind_(kind),
          weights_(std::move(weights)) {
        if (sensors_.empty()) throw std::invalid_argument("SrpInstance: no sensors");
        if (times_.size() != sensors_.size())
            throw std::invalid_argument("SrpInstance: times/sensors length mismatch");
        if (weights_.empty())
            weights_.assign(sensors_.size(), 1.0 / static_cast<double>(sensors_.size()));
        if (weights_.size() != sensors_.size())
            throw std::invalid_argument("SrpInstance: weights/sensors length mismatch");
        double total = 0.0;
        for (double w : weights_) {
            if (!(w > 0.0)) throw std::invalid_argument("SrpInstance: weights must be positive");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("SrpInstance: weights must sum to 1");
        for (const Point& r : sensors_) space_.check_dim(r);
    }

    /// Builds times as t_i = t0 + rho(r_i, s).
    static SrpInstance from_ground_truth(LpSpace space, std::vector<Point> sensors,
                                         const GroundTruth& truth,
                                         DefectKind kind = DefectKind::Sup,
                                         std::vector<double> weights = {}) {
        std::vector<double> times;
        times.reserve(sensors.size());
        for (const Point& r : sensors)
            times.push_back(truth.emit_time + space.distance(r, truth.source));
        SrpInstance inst(space, std::move(sensors), std::move(times), kind, std::move(weights));
        inst.truth_ = truth;
        return inst;
    }

    const LpSpace& space() const { return space_; }
    const std::vector<Point>& sensors() const { return sensors_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& weights() const { return weights_; }
    DefectKind defect_kind() const { return kind_; }
    const std::optional<GroundTruth>& truth() const { return truth_; }

    /// tau_i(x) = t_i - rho(x, r_i): the moment a wave emitted at x would
    /// have to start to reach sensor i on time.
    double backward_moment(std::size_t i, const Point& x) const {
        if (i >= sensors_.size()) throw std::out_of_range("backward_moment: sensor index");
        return times_[i] - space_.distance(x, sensors_[i]);
    }

    /// D_inf(x) = max_i tau_i(x) - min_i tau_i(x).
    double defect_sup(const Point& x) const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < sensors_.size(); ++i) {
            const double tau = backward_moment(i, x);
            lo = std::min(lo, tau);
            hi = std::max(hi, tau);
        }
        return hi - lo;
    }

    /// D_1(x) = sum_i p_i |tau_i(x) - sum_j p_j tau_j(x)|.
    double defect_sum(const Point& x) const {
        std::vector<double> taus(sensors_.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < sensors_.size(); ++i) {
            taus[i] = backward_moment(i, x);
            mean += weights_[i] * taus[i];
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < sensors_.size(); ++i)
            acc += weights_[i] * std::abs(taus[i] - mean);
        return acc;
    }

    double defect(const Point& x) const { return defect(kind_, x); }

    double defect(DefectKind kind, const Point& x) const {
        return kind == DefectKind::Sup ? defect_sup(x) : defect_sum(x);
    }

    /// Keep-or-discard test for B[c;r]: false certifies s is not in the ball.
    bool ball_test(const Point& c, double r) const {
        if (!(r > 0.0)) throw std::invalid_argument("ball_test: r must be positive");
        return defect(c) <= 2.0 * r + kBallTestSlack;
    }

    bool ball_test(DefectKind kind, const Point& c, double r) const {
        if (!(r > 0.0)) throw std::invalid_argument("ball_test: r must be positive");
        return defect(kind, c) <= 2.0 * r + kBallTestSlack;
    }

    /// Certifies s not in B[y;r] from a witness x inside the ball with
    /// D(x) > 0 and r < D(x)/4. Returns false when no certificate follows.
    bool exclusion_by_witness(const Point& x, const Point& y, double r) const {
        if (space_.distance(x, y) > r + kBallTestSlack)
            throw std::invalid_argument("exclusion_by_witness: x must lie in B[y;r]");
        const double d = defect(x);
        return d > 0.0 && r < 0.25 * d;
    }

    bool is_solution(const Point& x, double tol) const {
        if (tol < 0.0) throw std::invalid_argument("is_solution: tol must be >= 0");
        return defect(x) <= tol;
    }

private:
    LpSpace space_;
    std::vector<Point> sensors_;
    std::vector<double> times_;
    DefectKind kind_;
    std::vector<double> weights_;
    std::optional<GroundTruth> truth_;
};

}  // namespace srp

#endif  // SRP_PROBLEM_HPP
