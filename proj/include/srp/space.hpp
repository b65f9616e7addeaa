// Lp spaces on R^m: points, metric, norm.
#ifndef SRP_SPACE_HPP
#define SRP_SPACE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace srp {

/// Coordinate vector in the ambient space. Lexicographic operator< of
/// std::vector is the tie-break order used everywhere a deterministic
/// pick is required.
using Point = std::vector<double>;

inline bool is_finite(const Point& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

/// R^m with the l_p norm, 1 <= p < infinity.
class LpSpace {
public:
    LpSpace(std::size_t dim, double p) : dim_(dim), p_(p) {
        if (dim < 1) throw std::invalid_argument("LpSpace: dim must be >= 1");
        if (!(p >= 1.0) || !std::isfinite(p))
            throw std::invalid_argument("LpSpace: p must be in [1, inf)");
    }

    std::size_t dim() const { return dim_; }
    double p() const { return p_; }

    /// Spheres of l_p contain no segments exactly when p > 1.
    bool strictly_convex() const { return p_ > 1.0; }

    Point origin() const { return Point(dim_, 0.0); }

    double distance(const Point& a, const Point& b) const {
        check_dim(a);
        check_dim(b);
        double acc = 0.0;
        if (p_ == 1.0) {
            for (std::size_t j = 0; j < dim_; ++j) acc += std::abs(a[j] - b[j]);
            return acc;
        }
        if (p_ == 2.0) {
            for (std::size_t j = 0; j < dim_; ++j) {
                const double d = a[j] - b[j];
                acc += d * d;
            }
            return std::sqrt(acc);
        }
        // Scale by the largest component so pow() stays well conditioned.
        double scale = 0.0;
        for (std::size_t j = 0; j < dim_; ++j)
            scale = std::max(scale, std::abs(a[j] - b[j]));
        if (scale == 0.0) return 0.0;
        for (std::size_t j = 0; j < dim_; ++j)
            acc += std::pow(std::abs(a[j] - b[j]) / scale, p_);
        return scale * std::pow(acc, 1.0 / p_);
    }

    double norm(const Point& a) const { return distance(a, origin()); }

    /// a / ||a||: the point of S[theta;1] positively proportional to a.
    Point scale_to_sphere(const Point& a) const {
        const double n = norm(a);
        if (n == 0.0)
            throw std::invalid_argument("scale_to_sphere: zero vector has no direction");
        Point out(a);
        for (double& v : out) v /= n;
        return out;
    }

    void check_dim(const Point& a) const {
        if (a.size() != dim_)
            throw std::invalid_argument("LpSpace: point dimension mismatch");
    }

private:
    std::size_t dim_;
    double p_;
};

// a + t*b
inline Point axpy(const Point& a, double t, const Point& b) {
    Point out(a);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += t * b[j];
    return out;
}

inline Point scaled(const Point& a, double t) {
    Point out(a);
    for (double& v : out) v *= t;
    return out;
}

}  // namespace srp

#endif  // SRP_SPACE_HPP
