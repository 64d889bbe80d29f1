#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "collwarn/predict.hpp"

using namespace collwarn;

TEST_CASE("predict_position basics") {
    CHECK(predict_position({0, 1.0, 2.0, 0.0, 0.0}, 7.0) == Vec2(1.0, 2.0));
    CHECK(predict_position({0, -3.5, 0.25, 1.0, -2.0}, 0.0) == Vec2(-3.5, 0.25));
    CHECK(predict_position({0, 1.0, 2.0, 0.5, -1.0}, 2.0) == Vec2(2.0, 0.0));
    CHECK_THROWS_AS(predict_position({0, 0, 0, 0, 0}, -0.1), std::invalid_argument);
}

TEST_CASE("predict_position is affine in the offset") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    std::uniform_real_distribution<double> off(0.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        ObjectState state{0, val(rng), val(rng), val(rng), val(rng)};
        const double a = off(rng);
        const double b = off(rng);
        const Vec2 direct = predict_position(state, a + b);
        ObjectState advanced = state;
        const Vec2 mid = predict_position(state, a);
        advanced.px = mid.x();
        advanced.py = mid.y();
        const Vec2 chained = predict_position(advanced, b);
        CHECK((direct - chained).norm() < 1e-12);
    }
}

TEST_CASE("predict_belief at s=0 has the initial isotropic covariance") {
    UncertaintyParams u;
    const auto belief = predict_belief({0, 2.0, -1.0, 1.0, 0.5}, 0.0, u);
    CHECK(belief.mean == Vec2(2.0, -1.0));
    CHECK((belief.cov - 0.01 * Mat2::Identity()).norm() < 1e-15);
}

TEST_CASE("predict_belief grows along and across the motion direction") {
    UncertaintyParams u{0.1, 0.2, 0.05};
    const auto belief = predict_belief({0, 0.0, 0.0, 1.0, 0.0}, 2.0, u);
    // hand-built rotation * diag(std^2) * rotation^T with the long axis on x
    Mat2 expected;
    expected << 0.5 * 0.5, 0.0, 0.0, 0.2 * 0.2;
    CHECK((belief.cov - expected).norm() < 1e-14);
}

TEST_CASE("degenerate velocity falls back to isotropic growth") {
    UncertaintyParams u{0.1, 0.2, 0.05};
    const auto belief = predict_belief({0, 1.0, 1.0, 0.0, 0.0}, 3.0, u);
    const double expected_std = 0.1 + 0.2 * 3.0;
    CHECK((belief.cov - expected_std * expected_std * Mat2::Identity()).norm() < 1e-14);
}

TEST_CASE("rotating the velocity rotates the covariance the same way") {
    UncertaintyParams u{0.15, 0.3, 0.1};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-3.1, 3.1);
    std::uniform_real_distribution<double> speed(0.1, 2.5);
    std::uniform_real_distribution<double> off(0.0, 6.0);
    for (int i = 0; i < 200; ++i) {
        const double theta = angle(rng);
        const double v = speed(rng);
        const double base_angle = angle(rng);
        const double s = off(rng);
        ObjectState state{0, 0, 0, v * std::cos(base_angle), v * std::sin(base_angle)};
        ObjectState rotated{0, 0, 0, v * std::cos(base_angle + theta),
                            v * std::sin(base_angle + theta)};
        Mat2 rot;
        rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        const Mat2 via_similarity = rot * predict_belief(state, s, u).cov * rot.transpose();
        const Mat2 direct = predict_belief(rotated, s, u).cov;
        CHECK((via_similarity - direct).norm() < 1e-12);
    }
}

TEST_CASE("covariance eigenvalues are nondecreasing in the offset") {
    UncertaintyParams u{0.1, 0.25, 0.08};
    ObjectState state{0, 1.0, 2.0, 0.7, -0.4};
    double prev_min = 0.0, prev_max = 0.0;
    for (int k = 0; k <= 20; ++k) {
        const double s = 0.3 * k;
        const auto belief = predict_belief(state, s, u);
        Eigen::SelfAdjointEigenSolver<Mat2> eig(belief.cov);
        const double lo = eig.eigenvalues()(0);
        const double hi = eig.eigenvalues()(1);
        if (k > 0) {
            CHECK(lo >= prev_min - 1e-12);
            CHECK(hi >= prev_max - 1e-12);
        }
        prev_min = lo;
        prev_max = hi;
    }
}

TEST_CASE("user belief is stationary at the origin with lateral growth") {
    UncertaintyParams u{0.1, 0.3, 0.1};
    const auto at0 = user_belief(0.0, u);
    CHECK(at0.mean == Vec2(0.0, 0.0));
    CHECK((at0.cov - 0.01 * Mat2::Identity()).norm() < 1e-15);

    double prev = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double std_now = std::sqrt(user_belief(0.5 * k, u).cov(0, 0));
        CHECK(std_now >= prev);
        prev = std_now;
    }

    UncertaintyParams frozen{0.1, 0.3, 0.0};
    CHECK(std::sqrt(user_belief(100.0, frozen).cov(1, 1)) == doctest::Approx(0.1).epsilon(1e-12));
}
