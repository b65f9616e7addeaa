#include <doctest.h>

#include <cmath>
#include <vector>

#include "srp/harness.hpp"
#include "srp/problem.hpp"
#include "test_util.hpp"

using srp::DefectKind;
using srp::LpSpace;
using srp::Point;
using srp::SrpInstance;

TEST_CASE("backward moments on F1") {
    auto inst = srp_test::f1();
    CHECK(inst.backward_moment(0, {0.5}) == doctest::Approx(0.0));
    CHECK(inst.backward_moment(0, {0.0}) == doctest::Approx(0.5));
    CHECK(inst.backward_moment(1, {0.0}) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(inst.backward_moment(2, {0.0}), std::out_of_range);
    // tau_i(s) = t_0 for every sensor
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(inst.backward_moment(i, {0.5}) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("defect_sup") {
    auto inst = srp_test::f1();
    CHECK(inst.defect_sup({0.0}) == doctest::Approx(1.0));
    CHECK(inst.defect_sup({0.5}) == doctest::Approx(0.0));

    LpSpace space(2, 2.0);
    auto planar = SrpInstance::from_ground_truth(space, {{0, 0}, {1, 0}, {0, 1}},
                                                 {{0.0, 0.0}, 0.0});
    CHECK(planar.defect_sup({1, 1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("defect_sum") {
    auto inst = srp_test::f1(DefectKind::Sum);
    CHECK(inst.defect_sum({0.0}) == doctest::Approx(0.5));
    CHECK(inst.defect_sum({0.5}) == doctest::Approx(0.0));
    CHECK(inst.defect({0.0}) == doctest::Approx(0.5));  // dispatch on kind
    CHECK(srp_test::f1(DefectKind::Sup).defect({0.0}) == doctest::Approx(1.0));
}

TEST_CASE("ball_test") {
    auto inst = srp_test::f1();
    CHECK(inst.ball_test({0.0}, 0.6));
    CHECK_FALSE(inst.ball_test({0.0}, 0.4));
    CHECK(inst.ball_test({0.5}, 1e-6));  // c = s passes at any radius
    CHECK_THROWS_AS(inst.ball_test({0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("exclusion_by_witness") {
    auto inst = srp_test::f1();
    CHECK(inst.exclusion_by_witness({0.0}, {0.05}, 0.2));
    CHECK_FALSE(inst.exclusion_by_witness({0.0}, {0.1}, 0.3));
    CHECK_FALSE(inst.exclusion_by_witness({0.5}, {0.5}, 0.1));  // D(s) = 0
    CHECK_THROWS_AS(inst.exclusion_by_witness({0.0}, {1.0}, 0.2), std::invalid_argument);
}

TEST_CASE("is_solution") {
    auto inst = srp_test::f1();
    CHECK(inst.is_solution({0.5}, 1e-9));
    CHECK_FALSE(inst.is_solution({0.0}, 1e-9));
    CHECK(inst.is_solution({0.5 + 1e-12}, 1e-9));
}

TEST_CASE("weights are validated") {
    LpSpace space(1, 2.0);
    CHECK_THROWS_AS(SrpInstance(space, {{0.0}}, {0.0}, DefectKind::Sum, {0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SrpInstance(space, {{0.0}, {1.0}}, {0.5, 0.5}, DefectKind::Sum,
                                {1.5, -0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SrpInstance(space, {}, {}), std::invalid_argument);
}

TEST_CASE("defect Lipschitz bound and domination on random points") {
    srp::SplitMix64 rng(31);
    for (double p : {1.0, 2.0, 5.6789}) {
        LpSpace space(2, p);
        std::vector<Point> sensors;
        for (int i = 0; i < 6; ++i) sensors.push_back(srp_test::random_point(rng, 2, -3, 3));
        auto inst = SrpInstance::from_ground_truth(space, sensors, {{0.25, -0.75}, 1.0});
        for (int it = 0; it < 500; ++it) {
            Point x = srp_test::random_point(rng, 2, -5, 5);
            Point y = srp_test::random_point(rng, 2, -5, 5);
            const double rho = space.distance(x, y);
            CHECK(std::abs(inst.defect_sup(x) - inst.defect_sup(y)) <= 2 * rho + 1e-12);
            CHECK(std::abs(inst.defect_sum(x) - inst.defect_sum(y)) <= 2 * rho + 1e-12);
            CHECK(inst.defect_sum(x) <= inst.defect_sup(x) + 1e-12);
        }
        CHECK(inst.defect({0.25, -0.75}) <= 1e-12);
    }
}

TEST_CASE("inclusion soundness: balls containing the source always pass") {
    srp::SplitMix64 rng(404);
    LpSpace space(2, 3.5);
    std::vector<Point> sensors;
    for (int i = 0; i < 8; ++i) sensors.push_back(srp_test::random_point(rng, 2, -4, 4));
    const Point s{1.0, -2.0};
    auto inst = SrpInstance::from_ground_truth(space, sensors, {s, 0.0});
    for (int it = 0; it < 1000; ++it) {
        Point c = srp_test::random_point(rng, 2, -6, 6);
        const double r = space.distance(c, s) + rng.uniform(1e-9, 3.0);
        CHECK(inst.ball_test(c, r));
    }
}

// Axis-pair fixture with vanishing defect separation: sensors +-e_i in R^n_2,
// s = theta, x_n = (1/sqrt(n)) * sum e_i.
TEST_CASE("axis-pair defect decay matches the closed form") {
    for (std::size_t n : {1u, 4u, 25u, 100u}) {
        LpSpace space(n, 2.0);
        std::vector<Point> sensors;
        for (std::size_t i = 0; i < n; ++i) {
            Point plus(n, 0.0), minus(n, 0.0);
            plus[i] = 1.0;
            minus[i] = -1.0;
            sensors.push_back(plus);
            sensors.push_back(minus);
        }
        auto inst = SrpInstance::from_ground_truth(space, sensors, {Point(n, 0.0), 0.0});
        Point x(n, 1.0 / std::sqrt(static_cast<double>(n)));
        const double root = std::sqrt(static_cast<double>(n));
        const double expected = std::sqrt(2.0 + 2.0 / root) - std::sqrt(2.0 - 2.0 / root);
        CHECK(inst.defect_sup(x) == doctest::Approx(expected).epsilon(1e-9));
    }
    // frozen closed-form values
    CHECK(std::sqrt(2.0 + 2.0 / 2.0) - std::sqrt(2.0 - 2.0 / 2.0) ==
          doctest::Approx(0.7320508075688772).epsilon(1e-12));
    CHECK(std::sqrt(2.2) - std::sqrt(1.8) ==
          doctest::Approx(0.14159891091925884).epsilon(1e-12));
}

TEST_CASE("grid argmin of the defect sits at the source") {
    auto inst = srp_test::f1();
    const double x = srp_test::grid_argmin_1d(inst, -1.0, 2.0, 3000);
    CHECK(std::abs(x - 0.5) <= (3.0 / 3000) + 1e-12);

    LpSpace space(2, 2.0);
    auto planar = SrpInstance::from_ground_truth(space, {{0, 0}, {1, 0}, {0, 1}},
                                                 {{0.25, 0.25}, 0.0});
    const Point best = srp_test::grid_argmin_2d(planar, -1.0, 1.0, 400);
    CHECK(space.distance(best, {0.25, 0.25}) <= 2.0 / 400 * 2);
}
