#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <levy3d/bounds.hpp>

using namespace levy3d;

TEST(Bounds, UniversalBoundArithmetic) {
    const double n = 512.0 * 512.0 * 512.0;
    const auto r = evaluate(Target::ball(4.0), 2.0, n);
    EXPECT_DOUBLE_EQ(*r.universal_lb.value, 2097152.0);
}

TEST(Bounds, CauchyRegimeGating) {
    const auto r = evaluate(Target::ball(4.0), 2.0, 262144.0);
    EXPECT_FALSE(r.ballistic_lb.present());
    EXPECT_FALSE(r.diffusive_lb.present());
    EXPECT_EQ(r.diffusive_lb.reason, "regime mu=2");
    EXPECT_EQ(r.ballistic_lb.reason, "regime mu=2");
    EXPECT_DOUBLE_EQ(r.regime_lb(), *r.universal_lb.value);
}

TEST(Bounds, BallisticRegime) {
    const double n = 262144.0;
    const Target t = Target::ball(3.0);
    const auto r = evaluate(t, 1.5, n);
    const double v = 4.0 / 3.0 * std::numbers::pi * 27.0;
    ASSERT_TRUE(r.ballistic_lb.present());
    EXPECT_NEAR(*r.ballistic_lb.value, std::pow(n, 1.0 + 0.5 / 3.0) / v, 1e-9 * *r.ballistic_lb.value);
    EXPECT_EQ(r.diffusive_lb.reason, "regime mu<2");
    EXPECT_DOUBLE_EQ(r.regime_lb(), *r.ballistic_lb.value);
}

TEST(Bounds, DiffusiveUsesElongation) {
    const double n = 262144.0;
    const Target line = Target::line(40.0);
    const auto g = descriptors(line);
    // Hand-evaluated: box 2 x 2 x 42, Delta_B = 84, delta = log 42 / log 84.
    const double db = 84.0;
    const double delta = std::log(42.0) / std::log(84.0);
    const auto r25 = evaluate(line, 2.5, n);
    EXPECT_NEAR(g.elongation, delta, 1e-12);
    EXPECT_NEAR(*r25.diffusive_lb.value, n * std::pow(db, 0.5 * (1.0 - delta) - 1.0), 1e-9 * n);
    const auto r3 = evaluate(line, 3.0, n);
    EXPECT_NEAR(*r3.diffusive_lb.value, n / (std::pow(db, delta) * std::log(db)), 1e-9 * n);
    EXPECT_FALSE(r3.ball_disc_lb.present());
    EXPECT_EQ(r3.ball_disc_lb.reason, "target is not a ball or disc");
    EXPECT_EQ(r3.ballistic_lb.reason, "regime mu>2");
}

TEST(Bounds, BallDiscBoundUsesSurfaceArea) {
    const double n = 262144.0;
    const Target ball = Target::ball(4.0);
    const double area = 4.0 * std::numbers::pi * 16.0;
    const auto r = evaluate(ball, 2.5, n);
    EXPECT_NEAR(*r.ball_disc_lb.value, n * std::pow(area, 0.25 - 1.0), 1e-9 * n);
    const auto r3 = evaluate(ball, 3.0, n);
    EXPECT_NEAR(*r3.ball_disc_lb.value, n / (std::sqrt(area) * std::log(area)), 1e-9 * n);
}

TEST(Bounds, TravelTime) {
    const Target rect = Target::rect(std::pow(64.0, 0.7), std::pow(64.0, 0.3));
    const double x = std::pow(64.0, 0.3);
    EXPECT_NEAR(*evaluate(rect, 2.5, 262144.0).travel_time.value, std::pow(x, 1.5), 1e-9);
    EXPECT_NEAR(*evaluate(rect, 3.0, 262144.0).travel_time.value, x * x / std::log(x), 1e-9);
    EXPECT_FALSE(evaluate(rect, 1.5, 262144.0).travel_time.present());
}

TEST(Bounds, CauchyUpperBound) {
    const double n = 262144.0;
    const Target t = Target::disc(5.0);
    const double logn = std::log(n);
    EXPECT_NEAR(*evaluate(t, 2.0, n).cauchy_ub.value, n * logn * logn * logn / (25.0 * std::numbers::pi), 1e-6);
}

TEST(Bounds, InputValidation) {
    EXPECT_THROW(evaluate(Target::ball(2.0), 3.2, 262144.0), InvalidInput);
    EXPECT_THROW(evaluate(Target::ball(2.0), 2.0, 1.0), InvalidInput);
}

TEST(Overhead, RatioToUniformBound) {
    const Target t = Target::ball(4.0);
    EXPECT_DOUBLE_EQ(overhead(8192.0, t, 262144.0), 2.0);
    EXPECT_THROW(overhead(0.0, t, 262144.0), InvalidInput);
    EXPECT_NEAR(steps_lower_bound(t, 262144.0), 262144.0 / (256.0 / 3.0 * std::numbers::pi), 1e-9);
}
