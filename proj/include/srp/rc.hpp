// The refining-cover algorithm: subdivide, prune by the ball test, halt
// when the surviving family's spread drops below delta.
#ifndef SRP_RC_HPP
#define SRP_RC_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "srp/cover.hpp"
#include "srp/problem.hpp"
#include "srp/space.hpp"

namespace srp {

enum class HaltReason { PrecisionReached, BudgetExhausted, FamilyOverflow };

struct RcConfig {
    double delta = 1e-3;       // target precision
    Coverand initial;          // must contain the source (caller's burden)
    DefectKind defect_kind = DefectKind::Sup;
    int max_level = 60;
    std::size_t max_family = 10'000'000;
    // Optional extra pruning pass via the witness-exclusion certificate.
    // Not part of the main loop; off by default.
    bool witness_pruning = false;
};

struct LevelRecord {
    int level = 0;
    double radius = 0.0;
    std::size_t survivors = 0;
    double spread = 0.0;
};

struct SolveReport {
    Point approx;
    std::vector<LevelRecord> levels;
    HaltReason halt = HaltReason::BudgetExhausted;
};

/// Thrown when every child fails the ball test; the initial coverand did
/// not contain the source.
struct NoSurvivorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using TraceSink = std::function<void(const LevelRecord&)>;

namespace detail {

inline void dedup_by_anchor(std::vector<Coverand>& members) {
    std::sort(members.begin(), members.end(),
              [](const Coverand& a, const Coverand& b) { return a.anchor < b.anchor; });
    members.erase(std::unique(members.begin(), members.end(),
                              [](const Coverand& a, const Coverand& b) {
                                  return a.anchor == b.anchor;
                              }),
                  members.end());
}

// One refinement level: subdivide every survivor, keep children passing the
// ball test at the halved radius, merge bitwise-equal anchors, sort.
inline CoverFamily refine_level(const SrpInstance& inst, const RcConfig& cfg,
                                const CoverFamily& parents) {
    CoverFamily next;
    next.level = parents.level + 1;
    next.radius = parents.radius / 2.0;
    for (const Coverand& parent : parents.members) {
        // Unprojected children: anchors stay on the level's shared lattice so
        // the dedup below collapses the overlap between neighboring parents.
        for (Coverand& child : subdivide(inst.space(), parent, /*project=*/false)) {
            // Optional Prop.-7 pass: the parent anchor, when it falls inside
            // the child ball, can certify exclusion before the ball test.
            if (cfg.witness_pruning &&
                inst.space().distance(parent.anchor, child.anchor) <= next.radius &&
                inst.exclusion_by_witness(parent.anchor, child.anchor, next.radius))
                continue;
            if (inst.ball_test(cfg.defect_kind, child.anchor, next.radius))
                next.members.push_back(std::move(child));
        }
        if (next.members.size() > cfg.max_family) return next;  // caller checks
    }
    dedup_by_anchor(next.members);
    return next;
}

}  // namespace detail

/// Steps 0-3: refine until d_k < delta, then report the pivot anchor.
inline SolveReport rc_solve(const SrpInstance& inst, const RcConfig& cfg,
                            const TraceSink& sink = {}) {
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("rc_solve: delta must be positive");
    if (!(cfg.initial.size > 0.0))
        throw std::invalid_argument("rc_solve: initial coverand is degenerate");

    SolveReport report;
    CoverFamily family;
    family.level = 0;
    family.radius = cfg.initial.size;
    family.members = {cfg.initial};
    report.approx = cfg.initial.anchor;

    for (int k = 1; k <= cfg.max_level; ++k) {
        CoverFamily next = detail::refine_level(inst, cfg, family);
        if (next.members.size() > cfg.max_family) {
            report.halt = HaltReason::FamilyOverflow;
            return report;
        }
        if (next.members.empty())
            throw NoSurvivorError("rc_solve: all coverands eliminated at level " +
                                  std::to_string(k));
        const Point& pivot = next.members.front().anchor;  // lexicographically smallest
        const double spread = family_spread(inst.space(), next, pivot);
        LevelRecord rec{k, next.radius, next.members.size(), spread};
        report.levels.push_back(rec);
        if (sink) sink(rec);
        report.approx = pivot;
        if (spread < cfg.delta) {
            report.halt = HaltReason::PrecisionReached;
            return report;
        }
        family = std::move(next);
    }
    report.halt = HaltReason::BudgetExhausted;
    return report;
}

struct SequenceReport {
    std::vector<Point> pivots;  // c_k per level
    std::vector<LevelRecord> levels;
    HaltReason halt = HaltReason::BudgetExhausted;
};

/// Non-halting variant: ignores the precision test, yields the pivot of every
/// level up to max_level.
inline SequenceReport rc_sequence(const SrpInstance& inst, const RcConfig& cfg,
                                  const TraceSink& sink = {}) {
    if (!(cfg.initial.size > 0.0))
        throw std::invalid_argument("rc_sequence: initial coverand is degenerate");
    SequenceReport report;
    CoverFamily family;
    family.level = 0;
    family.radius = cfg.initial.size;
    family.members = {cfg.initial};
    for (int k = 1; k <= cfg.max_level; ++k) {
        CoverFamily next = detail::refine_level(inst, cfg, family);
        if (next.members.size() > cfg.max_family) {
            report.halt = HaltReason::FamilyOverflow;
            return report;
        }
        if (next.members.empty())
            throw NoSurvivorError("rc_sequence: all coverands eliminated at level " +
                                  std::to_string(k));
        const Point& pivot = next.members.front().anchor;
        LevelRecord rec{k, next.radius, next.members.size(),
                        family_spread(inst.space(), next, pivot)};
        report.levels.push_back(rec);
        if (sink) sink(rec);
        report.pivots.push_back(pivot);
        family = std::move(next);
    }
    report.halt = HaltReason::BudgetExhausted;
    return report;
}

}  // namespace srp

#endif  // SRP_RC_HPP
