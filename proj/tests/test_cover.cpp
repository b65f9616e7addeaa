#include <doctest.h>

#include <cmath>

#include "srp/cover.hpp"
#include "srp/harness.hpp"
#include "test_util.hpp"

using srp::Coverand;
using srp::CoverFamily;
using srp::CoverShape;
using srp::LpSpace;
using srp::Point;

TEST_CASE("ray segment subdivision yields the two halves") {
    LpSpace space(2, 2.0);
    auto seg = Coverand::ray_segment(space.origin(), {1, 0}, 0.0, 4.0);
    auto kids = subdivide(space, seg);
    REQUIRE(kids.size() == 2);
    CHECK(kids[0].u_lo == 0.0);
    CHECK(kids[0].u_hi == 2.0);
    CHECK(kids[1].u_lo == 2.0);
    CHECK(kids[1].u_hi == 4.0);
    CHECK(kids[0].size == doctest::Approx(1.0));
    CHECK(kids[0].anchor[0] == doctest::Approx(2.0));  // (1 + 1) * b
}

TEST_CASE("interval subdivision covers the parent") {
    LpSpace space(1, 2.0);
    auto ball = Coverand::ball({0.5}, 1.5);
    auto kids = subdivide(space, ball);
    srp::SplitMix64 rng(5);
    for (int it = 0; it < 500; ++it) {
        Point x{rng.uniform(-1.0, 2.0)};
        bool covered = false;
        for (const auto& c : kids)
            covered |= space.distance(x, c.anchor) <= c.size + 1e-12;
        CHECK(covered);
    }
}

TEST_CASE("planar ball subdivision covers the parent disk") {
    LpSpace space(2, 2.0);
    auto ball = Coverand::ball(space.origin(), 1.0);
    auto kids = subdivide(space, ball);
    srp::SplitMix64 rng(77);
    for (int it = 0; it < 1000; ++it) {
        Point x = srp_test::random_ball_point(rng, space, 1.0);
        double best = 2.0;
        for (const auto& c : kids) best = std::min(best, space.distance(x, c.anchor));
        CHECK(best <= 0.5 + 1e-12);
    }
}

TEST_CASE("subdivision soundness across shapes and parameters") {
    srp::SplitMix64 rng(321);
    for (double p : {1.0, 2.0, 3.5}) {
        for (std::size_t m : {1u, 2u, 3u}) {
            LpSpace space(m, p);
            Point anchor = srp_test::random_point(rng, m, -2, 2);
            const double r = rng.uniform(0.1, 2.0);
            auto parent = Coverand::ball(anchor, r);
            auto kids = subdivide(space, parent);
            CHECK(static_cast<double>(kids.size()) <= srp::lp_ball_child_bound(m, p));
            for (const auto& c : kids) {
                CHECK(c.size == doctest::Approx(r / 2.0));
                CHECK(space.distance(c.anchor, anchor) <= r + 1e-12);  // anchors in parent
            }
            for (int it = 0; it < 300; ++it) {
                Point x = anchor;
                Point off = srp_test::random_ball_point(rng, space, r);
                for (std::size_t j = 0; j < m; ++j) x[j] += off[j];
                bool covered = false;
                for (const auto& c : kids)
                    covered |= space.distance(x, c.anchor) <= c.size + 1e-12;
                CHECK(covered);
            }
        }
    }
}

TEST_CASE("nested anchors stay within twice the initial radius") {
    // F_infty subset of B[c; 2r]: chase anchors down 10 levels.
    LpSpace space(2, 2.0);
    srp::SplitMix64 rng(88);
    const Point root{0.3, -0.4};
    const double r0 = 1.0;
    auto cur = Coverand::ball(root, r0);
    for (int level = 0; level < 10; ++level) {
        auto kids = subdivide(space, cur);
        REQUIRE(!kids.empty());
        const std::size_t pick =
            static_cast<std::size_t>(rng.next() % static_cast<std::uint64_t>(kids.size()));
        cur = kids[pick];
        CHECK(space.distance(cur.anchor, root) <= 2.0 * r0 + 1e-12);
    }
}

TEST_CASE("contains") {
    LpSpace space(2, 2.0);
    auto ball = Coverand::ball(space.origin(), 1.0);
    CHECK(contains(space, ball, {0, 0}));
    CHECK_FALSE(contains(space, ball, {1.01, 0}, 1e-6));

    auto seg = Coverand::ray_segment(space.origin(), {1, 0}, 0.0, 2.0);
    CHECK(contains(space, seg, {2.5, 0}));  // u = 1.5
    CHECK(contains(space, seg, {1.0, 0}));  // u = 0 endpoint
    CHECK_FALSE(contains(space, seg, {3.5, 0}));
    CHECK_FALSE(contains(space, seg, {2.5, 0.5}));  // off the ray
}

TEST_CASE("family_spread") {
    LpSpace space(1, 2.0);
    CoverFamily fam;
    fam.radius = 0.1;
    fam.members = {Coverand::ball({0.4}, 0.1), Coverand::ball({0.5}, 0.1),
                   Coverand::ball({0.6}, 0.1)};
    CHECK(family_spread(space, fam, {0.4}) == doctest::Approx(0.3));

    CoverFamily single;
    single.radius = 0.25;
    single.members = {Coverand::ball({0.0}, 0.25)};
    CHECK(family_spread(space, single, {0.0}) == doctest::Approx(0.25));

    LpSpace plane(2, 2.0);
    CoverFamily two;
    two.radius = 0.25;
    two.members = {Coverand::ball({0, 0}, 0.25), Coverand::ball({1, 0}, 0.25)};
    CHECK(family_spread(plane, two, {0, 0}) == doctest::Approx(1.25));

    CoverFamily empty;
    empty.radius = 0.1;
    CHECK_THROWS_AS(family_spread(space, empty, {0.0}), std::invalid_argument);
}

TEST_CASE("degenerate coverand is rejected") {
    LpSpace space(2, 2.0);
    auto bad = Coverand::ball(space.origin(), 0.0);
    CHECK_THROWS_AS(subdivide(space, bad), std::invalid_argument);
}
