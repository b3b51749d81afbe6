#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "wtrace/heat_ext.hpp"

using namespace wtrace;

namespace {

// Reference values from tests/oracles/oracles.py.
constexpr double kKernelN1 = 0.2196956447338612;
constexpr double kKernelN2 = 0.061974997154826483;

const WeightParams kW = WeightParams::make(2.0, 0.5, 1);

BoundaryData bump_line(double center = 1.0, double width = 0.7, double amplitude = 1.0, int cells = 40) {
    return BoundaryData::from_terms(BoundaryKind::Line, UniformAxis(-1.0, 3.0, cells), std::nullopt,
                                    {{amplitude, Profile1D::bump(center, width), Profile1D::constant(1.0)}});
}

std::shared_ptr<const SpaceTimeGrid> line_grid(int level = 0, bool boundary_node = false) {
    return std::make_shared<SpaceTimeGrid>(UniformAxis(-1.0, 3.0, 40 << level),
                                           GradedGrid::half_line(6.0, 32 << level, 3.0, boundary_node), std::nullopt, 1);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Kernel, Values) {
    EXPECT_NEAR(kernel_value(1.0, 1.0, 0.0, 1), kKernelN1, 1e-15);
    EXPECT_NEAR(kernel_value(1.0, 1.0, 0.0, 2), kKernelN2, 1e-15);
    EXPECT_EQ(kernel_value(-0.5, 1.0, 0.3, 1), 0.0);
    EXPECT_EQ(kernel_value(-0.5, 1.0, 0.3, 2), 0.0);
    EXPECT_EQ(kernel_value(0.0, 1.0, 0.0, 1), 0.0);
    EXPECT_GT(kernel_value(0.3, 0.2, 0.1, 2), 0.0);
}

TEST(Kernel, DerivativesMatchFiniteDifferences) {
    const double h = 1e-4;
    for (int n : {1, 2}) {
        const double t = 0.7, x1 = 0.6, xp = n == 2 ? 0.3 : 0.0;
        const double d1 = (kernel_value(t, x1 + h, xp, n) - kernel_value(t, x1 - h, xp, n)) / (2 * h);
        EXPECT_NEAR(kernel_derivative(t, x1, xp, n, 1, 0), d1, 1e-7);
        const double d11 = (kernel_value(t, x1 + h, xp, n) - 2 * kernel_value(t, x1, xp, n) + kernel_value(t, x1 - h, xp, n)) / (h * h);
        EXPECT_NEAR(kernel_derivative(t, x1, xp, n, 2, 0), d11, 1e-5);
        if (n == 2) {
            const double d2 = (kernel_value(t, x1, xp + h, n) - kernel_value(t, x1, xp - h, n)) / (2 * h);
            EXPECT_NEAR(kernel_derivative(t, x1, xp, n, 0, 1), d2, 1e-7);
        }
    }
    EXPECT_THROW(kernel_derivative(1.0, 1.0, 0.0, 2, 2, 2), UnsupportedOrder);
}

TEST(Kernel, MassIsOne) {
    EXPECT_NEAR(kernel_mass(0.5, 1), 1.0, 1e-6);
    EXPECT_NEAR(kernel_mass(2.0, 2), 1.0, 1e-6);
    EXPECT_NEAR(kernel_mass(0.5, kW), 1.0, 1e-6);
    EXPECT_NEAR(kernel_mass(0.01, 1, QuadSpec{}.refined(1)), 1.0, 1e-4);
    for (double x1 : {0.1, 0.5, 1.0, 2.0}) {
        for (int n : {1, 2}) EXPECT_NEAR(kernel_mass(x1, n), 1.0, 1e-6) << "x1 " << x1 << " n " << n;
    }
}

TEST(Kernel, DerivativeMomentsVanish) {
    EXPECT_NEAR(kernel_derivative_moment(1, 0, 1.0, 1), 0.0, 1e-6);
    EXPECT_NEAR(kernel_derivative_moment(0, 1, 1.0, 2), 0.0, 1e-6);
    EXPECT_NEAR(kernel_derivative_moment(2, 0, 0.5, 1), 0.0, 1e-5);
    for (int order = 1; order <= 3; ++order) {
        for (int a2 = 0; a2 <= order; ++a2) EXPECT_NEAR(kernel_derivative_moment(order - a2, a2, 1.0, 2), 0.0, 1e-6);
    }
    EXPECT_THROW(kernel_derivative_moment(4, 0, 1.0, 1), UnsupportedOrder);
}

TEST(Extend, ZeroDataGivesZero) {
    const auto g = BoundaryData::line(UniformAxis(-1.0, 3.0, 40), std::vector<double>(41, 0.0));
    const auto u = extend(g, line_grid());
    for (double v : u.values()) EXPECT_EQ(v, 0.0);
}

TEST(Extend, BoundaryRecoveryImprovesTowardBoundary) {
    const ExtensionField field(bump_line(), ExtendOptions{});
    double prev = 1e300;
    for (int k = 1; k <= 7; ++k) {
        const double x1 = std::ldexp(1.0, -k);
        double err = 0.0;
        for (int i = 0; i <= 80; ++i) {
            const double t = -1.0 + 4.0 * i / 80.0;
            err = std::max(err, std::abs(field.eval(Point{t, x1, 0.0}, Deriv{}) - Profile1D::bump(1.0, 0.7).eval(t)));
        }
        EXPECT_LT(err, prev) << "k " << k;
        prev = err;
    }
    EXPECT_LT(prev, 0.05);
}

TEST(Extend, Causality) {
    const ExtensionField field(bump_line(1.5, 0.5), ExtendOptions{});
    for (double t : {-0.5, 0.0, 0.5, 0.9, 1.0}) {
        for (double x1 : {0.01, 0.3, 1.0, 3.0}) EXPECT_EQ(field.eval(Point{t, x1, 0.0}, Deriv{}), 0.0);
    }
    EXPECT_GT(field.eval(Point{1.6, 0.3, 0.0}, Deriv{}), 0.0);
}

TEST(Extend, Linearity) {
    const auto grid = line_grid();
    const auto a = bump_line(0.8, 0.5, 1.0);
    const auto b = bump_line(1.4, 0.6, 1.0);
    const auto combo = a.combine(2.0, b, -0.5).sampled_only();
    const auto lhs = extend(combo, grid);
    const auto rhs = extend(a.sampled_only(), grid).scaled(2.0).plus(extend(b.sampled_only(), grid).scaled(-0.5));
    // Quadrature nodes follow each datum's support, so agreement is to quadrature accuracy.
    EXPECT_LT(max_abs_diff(lhs.values(), rhs.values()), 1e-5);
}

TEST(Extend, TranslationEquivariance) {
    const ExtensionField a(bump_line(1.0, 0.6), ExtendOptions{});
    const ExtensionField b(bump_line(1.25, 0.6), ExtendOptions{});
    for (double t : {0.7, 1.0, 1.4}) {
        for (double x1 : {0.05, 0.4, 1.2}) {
            EXPECT_NEAR(b.eval(Point{t + 0.25, x1, 0.0}, Deriv{}), a.eval(Point{t, x1, 0.0}, Deriv{}), 1e-8);
        }
    }
    const auto plane = [](double c) {
        return BoundaryData::from_terms(BoundaryKind::Plane, UniformAxis(-1.0, 3.0, 40), UniformAxis(-3.0, 3.0, 30),
                                        {{1.0, Profile1D::bump(1.0, 0.6), Profile1D::gaussian(c, 0.7)}});
    };
    const ExtensionField pa(plane(0.0), ExtendOptions{});
    const ExtensionField pb(plane(0.4), ExtendOptions{});
    EXPECT_NEAR(pb.eval(Point{1.1, 0.3, 0.5}, Deriv{}), pa.eval(Point{1.1, 0.3, 0.1}, Deriv{}), 1e-8);
}

TEST(HeatResidual, LinearStaticFieldIsExact) {
    const auto grid = line_grid();
    const auto u = GridFunction::sample(grid, std::make_shared<LambdaField>(
                                                  1, [](const Point& x, const Deriv& d) {
                                                      if (d == Deriv{}) return x.x1;
                                                      return d == Deriv{0, 1, 0} ? 1.0 : 0.0;
                                                  },
                                                  3, 1));
    EXPECT_LT(heat_residual(u), 1e-10);
}

TEST(HeatResidual, CutoffDoesNotChangeResidualBelowOne) {
    const auto grid = line_grid();
    const auto g = bump_line();
    ExtendOptions with;
    with.with_cutoff = true;
    ResidualOptions r;
    r.x1_max = 0.9;
    const double a = heat_residual(extend(g, grid), r);
    const double b = heat_residual(extend(g, grid, with), r);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
}

TEST(HeatResidual, DecreasesUnderRefinement) {
    const auto g = BoundaryData::from_terms(BoundaryKind::Line, UniformAxis(-1.0, 3.0, 40), std::nullopt,
                                            {{1.0, Profile1D::gaussian(1.0, 0.4), Profile1D::constant(1.0)}});
    ResidualOptions r;
    r.x1_max = 1.0;
    const double coarse = heat_residual(extend(g, line_grid(0)), r);
    const double fine = heat_residual(extend(g, line_grid(1)), r);
    EXPECT_LT(fine, 0.3 * coarse);
}

TEST(TraceRestrict, SeparableExamples) {
    const auto grid = line_grid();
    const auto phi = Profile1D::bump(1.0, 0.8);
    const auto one_plus_x = std::make_shared<SeparableField>(
        1, std::vector<SeparableTerm>{{1.0, phi, Profile1D::affine(0.0, 1.0), Profile1D::constant(1.0)}});
    const auto x_phi = std::make_shared<SeparableField>(
        1, std::vector<SeparableTerm>{{1.0, phi, Profile1D::affine(1.0, 1.0), Profile1D::constant(1.0)}});
    const auto& t = *grid->time();
    for (bool use_model : {true, false}) {
        TraceOptions opt;
        opt.use_model = use_model;
        const auto a = trace_restrict(GridFunction::sample(grid, one_plus_x), opt);
        const auto b = trace_restrict(GridFunction::sample(grid, x_phi), opt);
        for (std::size_t i = 0; i < t.size(); ++i) {
            EXPECT_NEAR(a.values()[i], phi.eval(t.node(i)), 1e-12);
            EXPECT_NEAR(b.values()[i], 0.0, 1e-12);
        }
    }
}

TEST(TraceRestrict, NoBoundaryAccess) {
    const auto grid = line_grid();
    TraceOptions opt;
    opt.use_model = false;
    opt.extrapolate = false;
    EXPECT_THROW(trace_restrict(GridFunction::zeros(grid), opt), NoBoundaryAccess);
    const auto with_node = line_grid(0, true);
    EXPECT_NO_THROW(trace_restrict(GridFunction::zeros(with_node), opt));
}

TEST(TraceRestrict, RightInverseOfExtension) {
    const auto grid = line_grid();
    const auto g = bump_line();
    const auto tr = trace_restrict(extend(g, grid).sampled_only());
    const auto diff = tr.combine(1.0, g, -1.0);
    double err = 0.0;
    for (double v : diff.values()) err = std::max(err, std::abs(v));
    EXPECT_LT(err, 1e-3);
}

TEST(ExtensionRatio, ZeroDataIsDegenerate) {
    const auto g = BoundaryData::line(UniformAxis(-1.0, 3.0, 40), std::vector<double>(41, 0.0));
    const auto r = extension_norm_ratio(g, line_grid(), kW, 1);
    ASSERT_EQ(r.entries.size(), 1u);
    EXPECT_TRUE(r.entries[0].degenerate);
    EXPECT_EQ(r.degenerate_count, 1u);
}

TEST(ExtensionRatio, SecondOrderDominatesFirstOrder) {
    const auto grid = line_grid();
    ExtendOptions opt;
    opt.with_cutoff = true;
    for (double c : {0.8, 1.0, 1.3}) {
        const auto g = bump_line(c, 0.6);
        const auto ext = extend_with_representation(g, grid, opt);
        const auto r1 = extension_norm_ratio(ext, g, kW, 1);
        const auto r2 = extension_norm_ratio(ext, g, kW, 2);
        EXPECT_FALSE(r1.degenerate);
        EXPECT_GE(r2.ratio, r1.ratio);
        EXPECT_TRUE(std::isfinite(r2.ratio));
    }
}
