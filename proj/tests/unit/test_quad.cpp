#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wtrace/quad.hpp"

using namespace wtrace;

// Reference values from tests/oracles/oracles.py.
constexpr double kGammaWeighted = 0.2349964007466563;  // int x^2 e^{-2x} x^{-1/2}
constexpr double kInvSqrt = 1.998;                     // int_{1e-6}^1 t^{-1/2}
constexpr double kLog10 = 2.3025850929940456;

TEST(IntegrateWeighted, InverseSquareRootOnUnitInterval) {
    const auto g = GradedGrid::half_line(1.0, 16, 3.0);
    const auto r = integrate_weighted([](double) { return 1.0; }, g, -0.5);
    EXPECT_NEAR(r.value, 2.0, 1e-12);
}

TEST(IntegrateWeighted, GammaIntegral) {
    const auto g = GradedGrid::half_line(40.0, 400, 3.0);
    const auto r = integrate_weighted([](double x) { return x * x * std::exp(-2 * x); }, g, -0.5);
    EXPECT_NEAR(r.value, kGammaWeighted, 1e-5 * kGammaWeighted);
}

TEST(IntegrateWeighted, NonIntegrableWeight) {
    const auto g = GradedGrid::half_line(1.0, 8, 3.0);
    EXPECT_THROW(integrate_weighted([](double) { return 1.0; }, g, -1.0), NonIntegrableWeight);
}

TEST(IntegrateWeighted, ErrorShrinksUnderRefinement) {
    auto f = [](double x) { return x * x * std::exp(-2 * x); };
    double prev = 1.0;
    for (int cells : {50, 100, 200, 400}) {
        const double err =
            std::abs(integrate_weighted(f, GradedGrid::half_line(40.0, cells, 3.0), -0.5).value - kGammaWeighted);
        EXPECT_LE(err, 0.5 * prev + 1e-15);
        prev = err;
    }
}

TEST(IntegrateLoggraded, Examples) {
    EXPECT_NEAR(integrate_loggraded([](double t) { return t; }, 1.0, 2.0).value, 1.5, 1e-13);
    EXPECT_NEAR(integrate_loggraded([](double t) { return 1 / std::sqrt(t); }, 1e-6, 1.0).value, kInvSqrt, 1e-10);
    EXPECT_NEAR(integrate_loggraded([](double t) { return 1 / t; }, 0.1, 1.0).value, kLog10, 1e-10);
}

TEST(IntegrateLoggraded, BadInterval) {
    EXPECT_THROW(integrate_loggraded([](double t) { return t; }, 2.0, 1.0), BadInterval);
    EXPECT_THROW(integrate_loggraded([](double t) { return t; }, 0.0, 1.0), BadInterval);
}

TEST(QuadSpec, Validation) {
    QuadSpec q;
    q.log_factor = 2.5;
    EXPECT_THROW(q.validate(), ValidationError);
    q.log_factor = 1.5;
    q.tau_min = 0.0;
    EXPECT_THROW(q.validate(), ValidationError);
}

TEST(QuadProperties, LinearityAndPositivity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto grid = GradedGrid::half_line(6.0, 40, 3.0);
    auto f = [](double x) { return std::exp(-x) * std::cos(3 * x); };
    auto g = [](double x) { return x / (1 + x * x); };
    for (int trial = 0; trial < 20; ++trial) {
        const double a = u(rng), b = u(rng), power = 0.9 * u(rng) / 2.0;
        for (auto rule : {CellRule::Midpoint, CellRule::Gauss2}) {
            QuadSpec spec;
            spec.rule = rule;
            const double lhs = integrate_weighted([&](double x) { return a * f(x) + b * g(x); }, grid, power, spec).value;
            const double rhs = a * integrate_weighted(f, grid, power, spec).value + b * integrate_weighted(g, grid, power, spec).value;
            EXPECT_NEAR(lhs, rhs, 1e-12 * (1 + std::abs(lhs)));
            EXPECT_GE(integrate_weighted([&](double x) { return std::abs(f(x)); }, grid, power, spec).value, 0.0);
        }
        const double lo = 1e-4, hi = 3.0;
        const double lhs = integrate_loggraded([&](double x) { return a * f(x) + b * g(x); }, lo, hi).value;
        const double rhs = a * integrate_loggraded(f, lo, hi).value + b * integrate_loggraded(g, lo, hi).value;
        EXPECT_NEAR(lhs, rhs, 1e-12 * (1 + std::abs(lhs)));
    }
}

TEST(QuadProperties, ErrorEstimateBoundsRefinementChange) {
    auto f = [](double x) { return std::exp(-x) * (1 + x); };
    const auto coarse = integrate_weighted(f, GradedGrid::half_line(30.0, 100, 3.0), 0.5);
    const auto fine = integrate_weighted(f, GradedGrid::half_line(30.0, 200, 3.0), 0.5);
    EXPECT_LE(std::abs(fine.value - coarse.value), coarse.error_estimate + 1e-14);
}

TEST(GaussRules, IntegratePolynomialsExactly) {
    const auto& r = gauss_legendre(5);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 8);
    EXPECT_NEAR(s, 2.0 / 9.0, 1e-14);
    const auto& h = gauss_hermite(20);
    double m = 0.0;
    for (std::size_t i = 0; i < h.nodes.size(); ++i) m += h.weights[i] * h.nodes[i] * h.nodes[i];
    EXPECT_NEAR(m, std::sqrt(M_PI) / 2.0, 1e-12);
}
