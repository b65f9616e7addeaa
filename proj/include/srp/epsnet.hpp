// Refining eps-neighborhood-covers of compacts K_n = B[theta;M] ∩ L_n,
// with the mu_n / nu bookkeeping of the never-halting sequence algorithm.
#ifndef SRP_EPSNET_HPP
#define SRP_EPSNET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "srp/problem.hpp"
#include "srp/space.hpp"

namespace srp {

/// One compact K_n: the ball B[theta; M] intersected with the span of the
/// first active_dims coordinates of the ambient space.
struct CompactDescriptor {
    LpSpace ambient;
    std::size_t active_dims = 0;
    double radius = 0.0;  // M
};

/// The nested family {K_n} together with a bound r on the diameter of the admissible-source set.
struct CompactFamily {
    std::vector<CompactDescriptor> members;
    double diam_bound = 0.0;  // r, with diam A <= r
};

/// An eps-net of some K_n, serving as the cover { B[c; 2*eps] }.
struct NetCover {
    int level = 0;
    double radius = 0.0;  // ball radius 2*eps
    std::vector<Point> centers;
};

/// Finite eps-net of K: centers lie in K and every point of K is within eps
/// of a center, so the balls B[c; 2*eps] cover the eps-neighborhood of K.
/// Construction: axis-aligned grid of step eps / n^(1/p) over the active
/// coordinates, out-of-ball grid points projected radially onto the sphere.
inline NetCover build_net(const CompactDescriptor& K, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("build_net: eps must be positive");
    const std::size_t n = K.active_dims;
    const std::size_t m = K.ambient.dim();
    if (n < 1 || n > m) throw std::invalid_argument("build_net: bad active_dims");
    NetCover net;
    net.radius = 2.0 * eps;
    const double n_root = std::pow(static_cast<double>(n), 1.0 / K.ambient.p());
    if (eps >= K.radius * n_root) {
        // the whole compact fits within eps of the origin
        net.centers.push_back(Point(m, 0.0));
        return net;
    }
    const double step = eps / n_root;
    const double cell_circumradius = eps / 2.0;  // (step/2) * n^(1/p)
    const long zmax = static_cast<long>(std::ceil((K.radius + cell_circumradius) / step));

    std::vector<long> z(n, -zmax);
    while (true) {
        Point q(m, 0.0);
        for (std::size_t j = 0; j < n; ++j) q[j] = step * static_cast<double>(z[j]);
        const double d = K.ambient.norm(q);
        if (d <= K.radius) {
            net.centers.push_back(std::move(q));
        } else if (d <= K.radius + cell_circumradius) {
            for (std::size_t j = 0; j < n; ++j) q[j] *= K.radius / d;
            net.centers.push_back(std::move(q));
        }
        std::size_t j = n;
        bool done = false;
        while (j > 0) {
            --j;
            if (z[j] < zmax) {
                ++z[j];
                break;
            }
            z[j] = -zmax;
            if (j == 0) done = true;
        }
        if (done) break;
    }
    std::sort(net.centers.begin(), net.centers.end());
    net.centers.erase(std::unique(net.centers.begin(), net.centers.end()), net.centers.end());
    return net;
}

/// Keeps the centers passing the ball test at radius r_k = net.radius.
inline NetCover survivors(const SrpInstance& inst, const NetCover& net) {
    NetCover out;
    out.level = net.level;
    out.radius = net.radius;
    for (const Point& c : net.centers)
        if (inst.defect(c) <= 2.0 * net.radius + kBallTestSlack) out.centers.push_back(c);
    return out;
}

/// Per-(n,k) trace record, mirroring the harness sink contract.
struct EpsnetStep {
    std::size_t n = 0;
    int k = 0;
    double radius = 0.0;
    std::size_t survivor_count = 0;
    Point chosen;  // empty when the level came up empty
};

using EpsnetSink = std::function<void(const EpsnetStep&)>;

/// The emitted sequence and bookkeeping at budget exit. mu[n-1] is empty
/// while level n is still open (mu_n not yet finalized).
struct SequenceState {
    std::vector<std::optional<int>> mu;   // finalized mu_n per compact index
    std::optional<std::size_t> nu;        // never finalized by a finite run
    std::vector<Point> sequence;          // x_1 .. x_last, 0-based storage
    std::size_t terminal_n = 0;
    int terminal_k = 0;
    double terminal_radius = 0.0;
    std::size_t steps_used = 0;
    bool budget_exhausted = false;
};

/// The (n,k) loop: for each compact, refine eps-nets until the survivor set
/// empties (finalizing mu_n and applying the replace/discard rule) or the
/// step budget runs out, which is the normal exit.
inline SequenceState run_sequence(const SrpInstance& inst, const CompactFamily& fam,
                                  std::size_t budget, const EpsnetSink& sink = {}) {
    if (fam.members.empty()) throw std::invalid_argument("run_sequence: empty family");
    if (!(fam.diam_bound > 0.0))
        throw std::invalid_argument("run_sequence: diam_bound must be positive");
    SequenceState st;
    st.mu.assign(fam.members.size(), std::nullopt);
    std::size_t n = 1;
    while (n <= fam.members.size() && st.steps_used < budget) {
        const CompactDescriptor& K = fam.members[n - 1];
        bool finalized = false;
        for (int k = 1; st.steps_used < budget; ++k) {
            const double r_k = fam.diam_bound / std::pow(2.0, k - 1);
            NetCover net = build_net(K, r_k / 2.0);
            net.level = k;
            NetCover surv = survivors(inst, net);
            ++st.steps_used;
            st.terminal_n = n;
            st.terminal_k = k;
            st.terminal_radius = r_k;
            if (surv.centers.empty()) {
                // mu_n = k - 1; x_n takes the pick from the finest passing
                // cover and the span past n is discarded.
                st.mu[n - 1] = k - 1;
                if (sink) sink({n, k, r_k, 0, {}});
                if (k >= 2 && st.sequence.size() >= n - 1 + static_cast<std::size_t>(k - 1)) {
                    st.sequence[n - 1] = st.sequence[n - 2 + (k - 1)];
                    st.sequence.resize(n);
                }
                finalized = true;
                break;
            }
            const Point& pick = surv.centers.front();  // lexicographically smallest
            if (st.sequence.size() < n - 1 + static_cast<std::size_t>(k))
                st.sequence.resize(n - 1 + static_cast<std::size_t>(k));
            st.sequence[n - 2 + k] = pick;
            if (sink) sink({n, k, r_k, surv.centers.size(), pick});
        }
        if (finalized)
            ++n;
        else
            break;  // budget ran out mid-level
    }
    st.budget_exhausted = st.steps_used >= budget;
    return st;
}

}  // namespace srp

#endif  // SRP_EPSNET_HPP
