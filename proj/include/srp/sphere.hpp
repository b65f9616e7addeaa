// Dense sensors on the unit sphere of a strictly convex l_p space:
// classify by t_w - t_b, closed form inside, ray reduction outside.
#ifndef SRP_SPHERE_HPP
#define SRP_SPHERE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "srp/cover.hpp"
#include "srp/problem.hpp"
#include "srp/rc.hpp"
#include "srp/space.hpp"

namespace srp {

/// Arrival-time oracle over the unit sphere: r |-> t_0 + ||r - s||.
using ArrivalOracle = std::function<double(const Point&)>;

/// The two arrival extremes over S[theta;1]. For s != theta the best
/// approximant b equals s/||s|| and the worst w equals -b.
struct SphericalArrival {
    double t_b = 0.0;
    Point b;
    double t_w = 0.0;
    Point w;
};

enum class SourceClass { Inside, Outside };

struct InconsistentArrivalsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double golden_section_min(const std::function<double(double)>& f, double lo,
                                 double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline Point unit_from_angles(const LpSpace& space, double phi, double psi) {
    Point v(space.dim(), 0.0);
    if (space.dim() == 2) {
        v[0] = std::cos(phi);
        v[1] = std::sin(phi);
    } else {
        v[0] = std::cos(psi) * std::cos(phi);
        v[1] = std::cos(psi) * std::sin(phi);
        v[2] = std::sin(psi);
    }
    return space.scale_to_sphere(v);
}

// Minimizes g over the angular parameterization of S[theta;1]: coarse grid,
// then golden-section refinement (coordinate descent in dimension 3).
inline std::pair<double, Point> minimize_on_sphere(const LpSpace& space,
                                                   const std::function<double(const Point&)>& g,
                                                   std::size_t samples, double tol) {
    constexpr double kPi = 3.14159265358979323846;
    if (space.dim() == 2) {
        double best_phi = 0.0;
        double best_val = g(unit_from_angles(space, 0.0, 0.0));
        for (std::size_t i = 1; i < samples; ++i) {
            const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(samples);
            const double val = g(unit_from_angles(space, phi, 0.0));
            if (val < best_val) {
                best_val = val;
                best_phi = phi;
            }
        }
        const double h = 2.0 * kPi / static_cast<double>(samples);
        const double phi = golden_section_min(
            [&](double a) { return g(unit_from_angles(space, a, 0.0)); }, best_phi - h,
            best_phi + h, tol);
        Point u = unit_from_angles(space, phi, 0.0);
        return {g(u), u};
    }
    // dimension 3: grid over (phi, psi), then alternating golden sections
    // with a bracket that shrinks only once both coordinates settle.
    const std::size_t nphi = samples;
    const std::size_t npsi = samples / 2 + 1;
    double best_phi = 0.0, best_psi = 0.0;
    double best_val = g(unit_from_angles(space, 0.0, -0.5 * kPi));
    for (std::size_t i = 0; i < nphi; ++i) {
        const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(nphi);
        for (std::size_t j = 0; j < npsi; ++j) {
            const double psi = -0.5 * kPi + kPi * static_cast<double>(j) / static_cast<double>(npsi - 1);
            const double val = g(unit_from_angles(space, phi, psi));
            if (val < best_val) {
                best_val = val;
                best_phi = phi;
                best_psi = psi;
            }
        }
    }
    // pattern search: walk to any improving angular neighbor at step h,
    // halve h when none improves
    static constexpr double kDphi[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr double kDpsi[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    double h = 2.0 * kPi / static_cast<double>(nphi);
    double phi = best_phi, psi = best_psi;
    double cur = best_val;
    long evals = 0;
    while (h > tol && evals < 200000) {
        bool improved = false;
        for (int t = 0; t < 8; ++t) {
            const double np = phi + h * kDphi[t];
            const double nq = psi + h * kDpsi[t];
            const double v = g(unit_from_angles(space, np, nq));
            ++evals;
            if (v < cur) {
                cur = v;
                phi = np;
                psi = nq;
                improved = true;
                break;
            }
        }
        if (!improved) h *= 0.5;
    }
    // polish in ambient coordinates: the angular chart degenerates at its
    // poles, so finish with pole-free moves along the coordinate axes,
    // renormalized back onto the sphere
    Point u = unit_from_angles(space, phi, psi);
    double val = g(u);
    double step = 1e-3;
    while (step > tol && evals < 400000) {
        bool improved = false;
        for (std::size_t j = 0; j < space.dim() && !improved; ++j) {
            for (double sgn : {1.0, -1.0}) {
                Point cand = u;
                cand[j] += sgn * step;
                cand = space.scale_to_sphere(cand);
                const double v = g(cand);
                ++evals;
                if (v < val) {
                    u = std::move(cand);
                    val = v;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {val, u};
}

// Fixed, well-spread probe directions on the unit sphere for calibration.
inline std::vector<Point> probe_directions(const LpSpace& space) {
    constexpr double kPi = 3.14159265358979323846;
    std::vector<Point> out;
    if (space.dim() == 2) {
        for (int i = 0; i < 8; ++i)
            out.push_back(unit_from_angles(space, 0.35 + 2.0 * kPi * i / 8.0, 0.0));
    } else {
        for (double psi : {-0.9, 0.1, 1.0})
            for (int i = 0; i < 4; ++i)
                out.push_back(unit_from_angles(space, 0.35 + 2.0 * kPi * i / 4.0, psi));
    }
    return out;
}

// Gauss-Newton on t0 + ||r_i - s||_p = t_i over fixed sphere probes.  The
// surface search above is value-driven, so where the l_p sphere is nearly
// flat (p != 2 near axis points) its positional accuracy degrades to about
// eps^(1/4); this calibration restores machine-precision localization for
// sources strictly inside the ball.  Returns nullopt if the solve stalls.
inline std::optional<Point> refine_source(const LpSpace& space, const ArrivalOracle& oracle,
                                          Point s, double t0) {
    const std::vector<Point> probes = probe_directions(space);
    std::vector<double> times(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) times[i] = oracle(probes[i]);
    const std::size_t m = space.dim();
    const std::size_t n = m + 1;  // unknowns: s, t0
    const double p = space.p();
    auto residual_norm = [&](const Point& sc, double tc) {
        double acc = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double f = tc + space.distance(probes[i], sc) - times[i];
            acc += f * f;
        }
        return acc;
    };
    double best = residual_norm(s, t0);
    for (int it = 0; it < 50; ++it) {
        // Accumulate the normal equations A * delta = rhs, A = J^T J.
        std::vector<double> A(n * n, 0.0), rhs(n, 0.0), J(n);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double dist = space.distance(probes[i], s);
            if (dist < 1e-12) return std::nullopt;
            for (std::size_t j = 0; j < m; ++j) {
                const double xj = probes[i][j] - s[j];
                const double g = (xj == 0.0 ? 0.0 : (xj > 0 ? 1.0 : -1.0)) *
                                 std::pow(std::abs(xj), p - 1.0) / std::pow(dist, p - 1.0);
                J[j] = -g;  // d/ds_j ||r_i - s||
            }
            J[m] = 1.0;  // d/dt0
            const double f = t0 + dist - times[i];
            for (std::size_t a = 0; a < n; ++a) {
                rhs[a] -= J[a] * f;
                for (std::size_t b = 0; b < n; ++b) A[a * n + b] += J[a] * J[b];
            }
        }
        // Gaussian elimination with partial pivoting on the (m+1)x(m+1) system.
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
            if (std::abs(A[piv * n + col]) < 1e-14) return std::nullopt;
            if (piv != col) {
                for (std::size_t cc = 0; cc < n; ++cc) std::swap(A[piv * n + cc], A[col * n + cc]);
                std::swap(rhs[piv], rhs[col]);
            }
            for (std::size_t r = col + 1; r < n; ++r) {
                const double fac = A[r * n + col] / A[col * n + col];
                for (std::size_t cc = col; cc < n; ++cc) A[r * n + cc] -= fac * A[col * n + cc];
                rhs[r] -= fac * rhs[col];
            }
        }
        std::vector<double> delta(n);
        for (std::size_t r = n; r-- > 0;) {
            double acc = rhs[r];
            for (std::size_t cc = r + 1; cc < n; ++cc) acc -= A[r * n + cc] * delta[cc];
            delta[r] = acc / A[r * n + r];
        }
        double step_sq = 0.0;
        for (double d : delta) step_sq += d * d;
        Point sn = s;
        for (std::size_t j = 0; j < m; ++j) sn[j] += delta[j];
        const double tn = t0 + delta[m];
        const double rn = residual_norm(sn, tn);
        if (rn <= best) {
            s = std::move(sn);
            t0 = tn;
            best = rn;
        } else {
            break;
        }
        if (step_sq < 1e-28) break;
    }
    return s;
}

}  // namespace detail

/// Locates t_b = inf t_r and t_w = sup t_r over the unit sphere by angular
/// sampling and golden-section refinement, then (for sources that classify
/// as strictly inside) calibrates the extremes against a Gauss-Newton fit of
/// the arrival data over fixed sphere probes. Requires p > 1 and dim 2 or 3.
inline SphericalArrival find_extremes(const LpSpace& space, const ArrivalOracle& oracle,
                                      std::size_t m_samples = 256) {
    if (!space.strictly_convex())
        throw std::invalid_argument("find_extremes: requires a strictly convex norm (p > 1)");
    if (space.dim() < 2 || space.dim() > 3)
        throw std::invalid_argument("find_extremes: dim must be 2 or 3");
    SphericalArrival arr;
    auto [tb, b] = detail::minimize_on_sphere(space, oracle, m_samples, 1e-10);
    auto [neg_tw, w] = detail::minimize_on_sphere(
        space, [&](const Point& u) { return -oracle(u); }, m_samples, 1e-10);
    arr.t_b = tb;
    arr.b = std::move(b);
    arr.t_w = -neg_tw;
    arr.w = std::move(w);
    const double gap = arr.t_w - arr.t_b;
    if (gap > 1e-6 && gap < 2.0 - 1e-3) {
        // Strictly inside: seed the fit with the closed-form estimate.
        Point s0 = scaled(arr.b, 0.5 * gap);
        const double t00 = arr.t_b - (1.0 - 0.5 * gap);
        if (auto s = detail::refine_source(space, oracle, std::move(s0), t00)) {
            const double ns = space.norm(*s);
            if (ns > 1e-9 && ns < 1.0) {
                arr.b = space.scale_to_sphere(*s);
                arr.w = scaled(arr.b, -1.0);
                arr.t_b = oracle(arr.b);
                arr.t_w = oracle(arr.w);
            }
        }
    }
    return arr;
}

/// t_w - t_b is 2||s|| when ||s|| < 1 and exactly 2 when ||s|| >= 1.
inline SourceClass classify(const SphericalArrival& arr, double tol = 1e-6) {
    const double gap = arr.t_w - arr.t_b;
    if (gap > 2.0 + tol)
        throw InconsistentArrivalsError("classify: t_w - t_b exceeds 2; no source fits");
    if (std::abs(gap - 2.0) <= tol) return SourceClass::Outside;
    return SourceClass::Inside;
}

/// Closed form for the inside case: s = (t_w - t_b)/2 * b.
inline Point recover_inside(const SphericalArrival& arr, double tol = 1e-6) {
    if (classify(arr, tol) != SourceClass::Inside)
        throw std::invalid_argument("recover_inside: arrivals classify as outside");
    return scaled(arr.b, 0.5 * (arr.t_w - arr.t_b));
}

/// The one-dimensional SRP on the ray L = { d*b | d >= 1 } induced by the
/// anchor pairs (b;t_b), (w;t_w), (r;t_r).
struct RayProblem {
    LpSpace space;
    Point direction;    // b, unit
    Point third_sensor; // unit, away from +-b
    double t_b = 0.0;
    double t_w = 0.0;
    double t_r = 0.0;
    double bound = 0.0;  // M: the source satisfies ||s|| <= M + 1
};

/// D(x) restricted to the ray, at x = d*b:
/// |t_r - t_b - ||d*b - r|| + d - 1|.
inline double ray_defect(const RayProblem& rp, double d) {
    if (d < 1.0) throw std::invalid_argument("ray_defect: d must be >= 1");
    const Point x = scaled(rp.direction, d);
    return std::abs(rp.t_r - rp.t_b - rp.space.distance(x, rp.third_sensor) + d - 1.0);
}

/// Picks the third sensor as the grid unit vector farthest from both +-b.
inline Point pick_third_sensor(const LpSpace& space, const Point& b,
                               std::size_t m_samples = 256) {
    constexpr double kPi = 3.14159265358979323846;
    Point w = scaled(b, -1.0);
    Point best;
    double best_sep = -1.0;
    const std::size_t npsi = space.dim() == 2 ? 1 : m_samples / 2 + 1;
    for (std::size_t i = 0; i < m_samples; ++i) {
        const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m_samples);
        for (std::size_t j = 0; j < npsi; ++j) {
            const double psi = space.dim() == 2
                                   ? 0.0
                                   : -0.5 * kPi + kPi * static_cast<double>(j) /
                                                      static_cast<double>(npsi - 1);
            Point u = detail::unit_from_angles(space, phi, psi);
            const double sep = std::min(space.distance(u, b), space.distance(u, w));
            if (sep > best_sep) {
                best_sep = sep;
                best = std::move(u);
            }
        }
    }
    if (best_sep <= 1e-6)
        throw std::runtime_error("pick_third_sensor: no direction clear of +-b");
    return best;
}

inline RayProblem make_ray_problem(const LpSpace& space, const SphericalArrival& arr,
                                   const ArrivalOracle& oracle, double bound,
                                   std::size_t m_samples = 256) {
    RayProblem rp{space, arr.b, pick_third_sensor(space, arr.b, m_samples),
                  arr.t_b, arr.t_w, 0.0, bound};
    rp.t_r = oracle(rp.third_sensor);
    return rp;
}

/// Outside case: RC over segment coverands on K = L with d in [1, M+1].
/// The three anchor pairs form an ordinary SRP instance whose D_inf on the
/// ray reduces to ray_defect, so the generic solver applies unchanged.
inline Point recover_outside(const RayProblem& rp, double delta, int max_level = 60) {
    SrpInstance inst(rp.space, {rp.direction, scaled(rp.direction, -1.0), rp.third_sensor},
                     {rp.t_b, rp.t_w, rp.t_r}, DefectKind::Sup);
    RcConfig cfg;
    cfg.delta = delta;
    cfg.defect_kind = DefectKind::Sup;
    cfg.max_level = max_level;
    cfg.initial = Coverand::ray_segment(rp.space.origin(), rp.direction, 0.0, rp.bound);
    SolveReport report = rc_solve(inst, cfg);  // NoSurvivorError when M is too small
    return report.approx;
}

}  // namespace srp

#endif  // SRP_SPHERE_HPP
