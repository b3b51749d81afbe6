#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "wtrace/boundary_norms.hpp"

using namespace wtrace;

namespace {

// Reference values from tests/oracles/oracles.py: g(t) = exp(-((t - 1)/0.5)^2),
// p = 2, s = 0.75; plane data g(t) exp(-(x'/0.8)^2).
constexpr double kGaussTimeSeminorm = 2.4935069841128935;
constexpr double kGaussLp = 0.79161674354307977;
constexpr double kGaussSlobodeckij = 3.2851237276559733;
constexpr double kPlaneSpaceSeminorm = 2.2467828449897648;

const WeightParams kLine = WeightParams::make(2.0, 0.5, 1);
const WeightParams kPlane = WeightParams::make(2.0, 1.5, 2);

BoundaryData line_terms(std::vector<BoundaryTerm> terms, int cells = 80) {
    return BoundaryData::from_terms(BoundaryKind::Line, UniformAxis(-1.0, 3.0, cells), std::nullopt, std::move(terms));
}

BoundaryData plane_terms(std::vector<BoundaryTerm> terms, double xp_max = 4.0) {
    return BoundaryData::from_terms(BoundaryKind::Plane, UniformAxis(-1.0, 3.0, 80), UniformAxis(-xp_max, xp_max, 80),
                                    std::move(terms));
}

BoundaryData gaussian_line() { return line_terms({{1.0, Profile1D::gaussian(1.0, 0.5), Profile1D::constant(1.0)}}); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(BoundaryNorms, ZeroData) {
    const auto z = BoundaryData::line(UniformAxis(0.0, 1.0, 10), std::vector<double>(11, 0.0));
    EXPECT_EQ(time_seminorm(z, kLine).value, 0.0);
    EXPECT_EQ(slobodeckij_norm(z, kLine).total, 0.0);
    const auto zp = BoundaryData::plane(UniformAxis(0.0, 1.0, 4), UniformAxis(-1.0, 1.0, 4), std::vector<double>(25, 0.0));
    EXPECT_EQ(space_seminorm(zp, kPlane).value, 0.0);
    EXPECT_EQ(slobodeckij_norm(zp, kPlane).total, 0.0);
}

TEST(BoundaryNorms, GaussianLineReference) {
    const auto g = gaussian_line();
    const auto r = slobodeckij_norm(g, kLine);
    EXPECT_LT(rel(r.get("lp"), kGaussLp), 1e-6);
    EXPECT_LT(rel(r.get("time_seminorm"), kGaussTimeSeminorm), 1e-3);
    EXPECT_LT(rel(r.total, kGaussSlobodeckij), 1e-3);
}

TEST(BoundaryNorms, SampledDataAgreeWithTerms) {
    const auto g = gaussian_line();
    const double a = time_seminorm(g, kLine).value;
    const double b = time_seminorm(g.sampled_only(), kLine).value;
    EXPECT_LT(rel(b, a), 1e-2);
}

TEST(BoundaryNorms, PlaneSpaceSeminormReference) {
    const auto g = plane_terms({{1.0, Profile1D::gaussian(1.0, 0.5), Profile1D::gaussian(0.0, 0.8)}});
    EXPECT_LT(rel(space_seminorm(g, kPlane).value, kPlaneSpaceSeminorm), 1e-3);
}

TEST(BoundaryNorms, SpaceSeminormNeedsPlane) {
    EXPECT_THROW(space_seminorm(gaussian_line(), kLine), DimensionMismatch);
}

TEST(BoundaryNorms, ConstantInTangentialVariableHasZeroSpaceSeminorm) {
    const auto g = plane_terms({{1.0, Profile1D::bump(1.0, 0.8), Profile1D::constant(1.0)}});
    EXPECT_EQ(space_seminorm(g, kPlane).value, 0.0);
    EXPECT_GT(time_seminorm(g, kPlane).value, 0.0);
}

TEST(BoundaryNorms, ConstantOnWindowHasZeroTimeSeminorm) {
    const UniformAxis t(0.0, 1.0, 20);
    const auto g = BoundaryData::pair(t, std::vector<double>(21, 0.7), std::vector<double>(21, -1.3));
    SeminormOptions opt;
    opt.time_mode = TimeMode::Window;
    EXPECT_NEAR(time_seminorm(g, kLine, opt).value, 0.0, 1e-10);
}

TEST(BoundaryNorms, TimeScalingLaw) {
    // [g(./lambda)]^p = lambda^{1 - sp/2} [g]^p.
    const double base = std::pow(time_seminorm(line_terms({{1.0, Profile1D::bump(1.0, 0.8), Profile1D::constant(1.0)}}),
                                               kLine).value, 2.0);
    const double lambda = 2.0;
    const auto g2 = BoundaryData::from_terms(BoundaryKind::Line, UniformAxis(-2.0, 6.0, 160), std::nullopt,
                                             {{1.0, Profile1D::bump(2.0, 1.6), Profile1D::constant(1.0)}});
    const double scaled = std::pow(time_seminorm(g2, kLine).value, 2.0);
    EXPECT_LT(rel(scaled, std::pow(lambda, 1.0 - kLine.sp() / 2.0) * base), 1e-3);
}

TEST(BoundaryNorms, PairWithZeroLeftComponent) {
    const UniformAxis t(0.0, 1.0, 64);
    auto phi = [](double s, double, int dt, int) { return Profile1D::bump(0.5, 0.3).eval(s, dt); };
    const auto pair = BoundaryData::from_functions(BoundaryKind::IntervalPair, t, std::nullopt,
                                                   {[](double, double, int, int) { return 0.0; }, phi});
    const auto right = BoundaryData::from_functions(BoundaryKind::IntervalPair, t, std::nullopt, {phi, phi});
    const auto r = slobodeckij_norm(pair, kLine);
    const auto both = slobodeckij_norm(right, kLine);
    EXPECT_NEAR(r.total, 0.5 * both.total, 1e-12 * both.total);
    EXPECT_NEAR(r.get("lp"), 0.5 * both.get("lp"), 1e-12);
}

TEST(BoundaryNorms, TriangleInequality) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const auto f = line_terms({{2 * u(rng) - 1, Profile1D::bump(0.5 + u(rng), 0.5 + 0.5 * u(rng)), Profile1D::constant(1.0)}});
        const auto g = line_terms({{2 * u(rng) - 1, Profile1D::gaussian(0.5 + u(rng), 0.3 + 0.3 * u(rng)), Profile1D::constant(1.0)}});
        const auto sum = f.combine(1.0, g, 1.0);
        const double a = time_seminorm(f.sampled_only(), kLine).value;
        const double b = time_seminorm(g.sampled_only(), kLine).value;
        EXPECT_LE(time_seminorm(sum, kLine).value, a + b + 1e-10);
        EXPECT_LE(slobodeckij_norm(sum, kLine).total,
                  slobodeckij_norm(f.sampled_only(), kLine).total + slobodeckij_norm(g.sampled_only(), kLine).total + 1e-10);
    }
}

TEST(BoundaryNorms, HalvingCutoffStaysWithinTruncationBound) {
    const auto g = gaussian_line();
    SeminormOptions a, b;
    a.quad.tau_min = 1e-6;
    b.quad.tau_min = 5e-7;
    const auto va = time_seminorm(g, kLine, a);
    const auto vb = time_seminorm(g, kLine, b);
    EXPECT_LE(std::abs(va.value - vb.value), va.truncation_bound + va.error_estimate + 1e-14);
}

TEST(BoundaryNorms, ZeroCompatibility) {
    EXPECT_TRUE(zero_compatible(line_terms({{1.0, Profile1D::bump(1.0, 0.8), Profile1D::constant(1.0)}}), TimeMode::WholeLine));
    const UniformAxis t(0.0, 1.0, 10);
    std::vector<double> v(11, 1.0);
    EXPECT_FALSE(zero_compatible(BoundaryData::line(t, v), TimeMode::Window));
    v[0] = 0.0;
    EXPECT_TRUE(zero_compatible(BoundaryData::line(t, v), TimeMode::Window));
    EXPECT_FALSE(zero_compatible(BoundaryData::line(t, v), TimeMode::WholeLine));
}

TEST(BoundaryNorms, CsvRoundTrip) {
    const auto g = plane_terms({{1.0, Profile1D::bump(1.0, 0.8), Profile1D::gaussian(0.0, 0.8)}});
    const auto path = (std::filesystem::temp_directory_path() / "wtrace_boundary_roundtrip.csv").string();
    write_boundary_csv(path, g);
    const auto back = read_boundary_csv(path);
    ASSERT_EQ(back.kind(), BoundaryKind::Plane);
    ASSERT_EQ(back.values().size(), g.values().size());
    for (std::size_t i = 0; i < g.values().size(); ++i) EXPECT_DOUBLE_EQ(back.values()[i], g.values()[i]);
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".meta.json");
}
