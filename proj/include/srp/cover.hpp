// Covershapes and coverands: l_p balls and ray segments, with finite
// half-size subdivision.
#ifndef SRP_COVER_HPP
#define SRP_COVER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "srp/space.hpp"

namespace srp {

enum class CoverShape { LpBall, RaySegment };

/// A coverand C[x;r]: contains its anchor, contained in B[anchor; size].
///
/// LpBall realizes B[anchor; size] itself. RaySegment realizes
/// { origin + (1+u)*direction | u in [u_lo, u_hi] }; its anchor is the
/// midpoint and its size the half-length.
struct Coverand {
    CoverShape shape = CoverShape::LpBall;
    Point anchor;
    double size = 0.0;

    // RaySegment only.
    Point origin;
    Point direction;  // unit vector
    double u_lo = 0.0;
    double u_hi = 0.0;

    static Coverand ball(Point anchor, double size) {
        Coverand c;
        c.shape = CoverShape::LpBall;
        c.anchor = std::move(anchor);
        c.size = size;
        return c;
    }

    static Coverand ray_segment(Point origin, Point direction, double u_lo, double u_hi) {
        Coverand c;
        c.shape = CoverShape::RaySegment;
        c.origin = std::move(origin);
        c.direction = std::move(direction);
        c.u_lo = u_lo;
        c.u_hi = u_hi;
        const double mid = 0.5 * (u_lo + u_hi);
        c.anchor = axpy(c.origin, 1.0 + mid, c.direction);
        c.size = 0.5 * (u_hi - u_lo);
        return c;
    }
};

/// The surviving family at one refinement level; all members share size.
struct CoverFamily {
    int level = 0;
    double radius = 0.0;
    std::vector<Coverand> members;
};

namespace detail {

// Enumerates the points g*z of the origin-aligned lattice whose grid cell
// meets the ball. With project=true the out-of-ball ones are pulled onto the
// sphere along the ray from the center, keeping every anchor inside the ball;
// with project=false they are emitted as-is, so anchors of the same level are
// bit-identical across overlapping parents and family deduplication actually
// merges them. Either way every cell point is within one cell circumradius of
// its emitted anchor. Emission is in lexicographic z order.
inline void ball_grid_anchors(const LpSpace& space, const Point& center, double radius,
                              double step, bool project, std::vector<Point>& out) {
    const std::size_t m = space.dim();
    std::vector<long> zlo(m), zhi(m);
    for (std::size_t j = 0; j < m; ++j) {
        zlo[j] = static_cast<long>(std::ceil((center[j] - radius) / step - 0.5));
        zhi[j] = static_cast<long>(std::floor((center[j] + radius) / step + 0.5));
        if (zlo[j] > zhi[j]) return;
    }
    std::vector<long> z = zlo;
    Point q(m), nearest(m);
    while (true) {
        for (std::size_t j = 0; j < m; ++j) q[j] = step * static_cast<double>(z[j]);
        // the cell [q +- step/2]^m meets the ball iff its point closest to the
        // center (coordinate-wise clamp) is inside
        for (std::size_t j = 0; j < m; ++j)
            nearest[j] = std::clamp(center[j], q[j] - step / 2.0, q[j] + step / 2.0);
        if (space.distance(nearest, center) <= radius) {
            const double d = space.distance(q, center);
            if (d <= radius || !project) {
                out.push_back(q);
            } else {
                // Pull the anchor back onto the sphere; it moves by d - radius,
                // at most one cell circumradius, so its cell stays covered.
                Point proj(m);
                for (std::size_t j = 0; j < m; ++j)
                    proj[j] = center[j] + (q[j] - center[j]) * (radius / d);
                out.push_back(std::move(proj));
            }
        }
        // advance lexicographically
        std::size_t j = m;
        while (j > 0) {
            --j;
            if (z[j] < zhi[j]) {
                ++z[j];
                break;
            }
            z[j] = zlo[j];
            if (j == 0) return;
        }
    }
}

}  // namespace detail

/// Finite half-size cover of a coverand: children of size c.size/2 whose
/// anchors lie in c and whose union covers c.
///
/// LpBall uses a lattice of step (r/2)/m^(1/p): the lattice cell circumradius
/// is r/4 in l_p, so with radial projection of near-miss anchors every parent
/// point ends up within r/2 of some child anchor.
///
/// project=false skips the radial projection: boundary anchors may then stick
/// out of the parent by up to r/4, but every parent point is within r/4 of a
/// child anchor and anchors stay on the shared lattice (see ball_grid_anchors).
/// The solver uses this variant to keep overlapping parents from multiplying
/// near-duplicate boundary children.
inline std::vector<Coverand> subdivide(const LpSpace& space, const Coverand& c,
                                       bool project = true) {
    if (!(c.size > 0.0)) throw std::invalid_argument("subdivide: degenerate coverand");
    std::vector<Coverand> children;
    if (c.shape == CoverShape::RaySegment) {
        const double mid = 0.5 * (c.u_lo + c.u_hi);
        children.push_back(Coverand::ray_segment(c.origin, c.direction, c.u_lo, mid));
        children.push_back(Coverand::ray_segment(c.origin, c.direction, mid, c.u_hi));
        return children;
    }
    const double m_root = std::pow(static_cast<double>(space.dim()), 1.0 / space.p());
    const double step = (c.size / 2.0) / m_root;
    std::vector<Point> anchors;
    detail::ball_grid_anchors(space, c.anchor, c.size, step, project, anchors);
    std::sort(anchors.begin(), anchors.end());
    children.reserve(anchors.size());
    for (Point& a : anchors) children.push_back(Coverand::ball(std::move(a), c.size / 2.0));
    return children;
}

/// Membership in the realized set.
inline bool contains(const LpSpace& space, const Coverand& c, const Point& x,
                     double tol = 1e-9) {
    space.check_dim(x);
    if (c.shape == CoverShape::LpBall)
        return space.distance(x, c.anchor) <= c.size + tol;
    // Solve x = origin + (1+u)*direction for u along the strongest component,
    // then demand the transverse residual vanish.
    std::size_t jbest = 0;
    for (std::size_t j = 1; j < c.direction.size(); ++j)
        if (std::abs(c.direction[j]) > std::abs(c.direction[jbest])) jbest = j;
    if (c.direction[jbest] == 0.0) return false;
    const double u = (x[jbest] - c.origin[jbest]) / c.direction[jbest] - 1.0;
    if (u < c.u_lo - tol || u > c.u_hi + tol) return false;
    const Point on_ray = axpy(c.origin, 1.0 + u, c.direction);
    return space.distance(x, on_ray) <= tol;
}

/// d_k = r_k + max over member anchors of rho(pivot, anchor).
inline double family_spread(const LpSpace& space, const CoverFamily& fam, const Point& pivot) {
    if (fam.members.empty()) throw std::invalid_argument("family_spread: empty family");
    double worst = 0.0;
    for (const Coverand& c : fam.members)
        worst = std::max(worst, space.distance(pivot, c.anchor));
    return fam.radius + worst;
}

/// Upper bound on subdivide() output size for an l_p ball in R^m.
inline double lp_ball_child_bound(std::size_t dim, double p) {
    const double m_root = std::pow(static_cast<double>(dim), 1.0 / p);
    return std::pow(std::ceil(4.0 * m_root) + 1.0, static_cast<double>(dim));
}

}  // namespace srp

#endif  // SRP_COVER_HPP
