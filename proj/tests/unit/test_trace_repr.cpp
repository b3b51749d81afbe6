#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "wtrace/batteries.hpp"
#include "wtrace/trace_repr.hpp"

using namespace wtrace;

namespace {

// Reference value from tests/oracles/oracles.py.
constexpr double kNormalMoment = 0.75;

const WeightParams kW = WeightParams::make(2.0, 0.5, 1);

std::shared_ptr<const SpaceTimeGrid> line_grid(int level = 0) {
    return std::make_shared<SpaceTimeGrid>(UniformAxis(-1.0, 3.0, 40 << level),
                                           GradedGrid::half_line(6.0, 32 << level, 3.0), std::nullopt, 1);
}

std::shared_ptr<const SpaceTimeGrid> plane_grid() {
    return std::make_shared<SpaceTimeGrid>(UniformAxis(-1.0, 3.0, 20), GradedGrid::half_line(6.0, 16, 3.0),
                                           UniformAxis(-3.0, 3.0, 12), 2);
}

std::shared_ptr<const SeparableField> affine_x1(int n) {
    // 1 + 1 (y - 1) = y, so the field is x1.
    return std::make_shared<SeparableField>(
        n, std::vector<SeparableTerm>{{1.0, Profile1D::constant(1.0), Profile1D::affine(1.0, 1.0), Profile1D::constant(1.0)}});
}

std::shared_ptr<const SeparableField> constant_field(int n, double c) {
    return std::make_shared<SeparableField>(n, std::vector<SeparableTerm>{{c, Profile1D::constant(1.0),
                                                                          Profile1D::constant(1.0),
                                                                          Profile1D::constant(1.0)}});
}

std::shared_ptr<const SeparableField> bump_field(int n) {
    return std::make_shared<SeparableField>(
        n, std::vector<SeparableTerm>{{1.0, Profile1D::bump(1.0, 0.8), Profile1D::gaussian(0.0, 0.6),
                                       n == 2 ? Profile1D::gaussian(0.0, 0.9) : Profile1D::constant(1.0)}});
}

TimeDerivativeRep zero_rep(const std::shared_ptr<const SpaceTimeGrid>& grid) {
    TimeDerivativeRep rep;
    const auto z = GridFunction::zeros(grid);
    rep.g.assign(grid->n(), z);
    rep.ut = z;
    return rep;
}

TimeDerivativeRep model_rep(const std::shared_ptr<const SpaceTimeGrid>& grid, const SeparableField& f) {
    return TimeDerivativeRep::from_models(grid, {f.flux_representation()}, f.time_derivative());
}

}  // namespace

TEST(Mollifier, UnitMassInEveryMode) {
    for (auto mode : {MollifierMode::Density, MollifierMode::Representation}) {
        for (int n : {1, 2}) EXPECT_NEAR(Mollifier::make(mode, n).mass(), 1.0, 1e-10);
    }
}

TEST(Mollifier, NormalMoment) {
    const auto m = Mollifier::make(MollifierMode::Representation, 1);
    EXPECT_NEAR(m.normal_moment(), kNormalMoment, 1e-10);
    EXPECT_GT(m.normal_moment(), 0.5);
    EXPECT_LT(m.normal_moment(), 1.0);
}

TEST(Mollifier, SupportIsOneSided) {
    const auto m = Mollifier::make(MollifierMode::Representation, 2);
    EXPECT_EQ(m.phi(0.5, 0.1, 0.0), 0.0);
    EXPECT_EQ(m.phi(0.5, -0.3, 0.0), 0.0);
    EXPECT_EQ(m.phi(-0.1, -0.75, 0.0), 0.0);
    EXPECT_EQ(m.phi(0.5, -0.75, 1.2), 0.0);
    EXPECT_GT(m.phi(0.5, -0.75, 0.0), 0.0);
    const auto d = Mollifier::make(MollifierMode::Density, 1);
    EXPECT_EQ(d.phi(0.0, 0.05), 0.0);
    EXPECT_GT(d.phi(0.0, -0.4), 0.0);
}

TEST(Mollify, ConstantsAreReproduced) {
    const auto grid = line_grid();
    const auto u = GridFunction::sample(grid, constant_field(1, 2.5));
    const auto m = Mollifier::make(MollifierMode::Representation, 1);
    for (double t : {0.0, 1.0, 2.0}) {
        for (double x1 : {0.0, 0.5, 2.0}) EXPECT_NEAR(mollify_value(u, Point{t, x1, 0.0}, 0.5, m), 2.5, 1e-12);
    }
}

TEST(Mollify, LinearNormalFieldAtBoundary) {
    const auto grid = line_grid();
    const auto u = GridFunction::sample(grid, affine_x1(1));
    const auto m = Mollifier::make(MollifierMode::Representation, 1);
    for (double eps : {0.25, 0.5}) {
        const double v = mollify_value(u, Point{1.0, 0.0, 0.0}, eps, m);
        EXPECT_NEAR(v, eps * kNormalMoment, 1e-12);
        EXPECT_GT(v, eps / 2);
        EXPECT_LT(v, eps);
    }
}

TEST(Mollify, NeverReadsBelowBoundary) {
    for (auto mode : {MollifierMode::Density, MollifierMode::Representation}) {
        const auto grid = line_grid();
        auto counter = std::make_shared<EvalCounter>();
        mollify(GridFunction::sample(grid, bump_field(1)), 0.5, Mollifier::make(mode, 1), counter);
        EXPECT_GT(counter->evaluations.load(), 0u);
        EXPECT_EQ(counter->below_boundary.load(), 0u);
    }
}

TEST(Mollify, CommutesWithNormalDerivative) {
    const auto grid = line_grid();
    const auto u = GridFunction::sample(grid, bump_field(1));
    const auto m = Mollifier::make(MollifierMode::Representation, 1);
    const double h = 1e-4;
    for (double x1 : {0.2, 0.7, 1.5}) {
        const Point x{1.0, x1, 0.0};
        const double direct = mollify_value(u, x, 0.5, m, Deriv{0, 1, 0});
        const double fd = (mollify_value(u, Point{1.0, x1 + h, 0.0}, 0.5, m) -
                           mollify_value(u, Point{1.0, x1 - h, 0.0}, 0.5, m)) / (2 * h);
        EXPECT_NEAR(direct, fd, 1e-7);
    }
}

TEST(Mollify, ErrorShrinksWithScale) {
    const auto grid = line_grid();
    const auto u = GridFunction::sample(grid, bump_field(1));
    const auto m = Mollifier::make(MollifierMode::Density, 1);
    double prev = 1e300;
    for (int k = 1; k <= 4; ++k) {
        const double err = lp_theta_norm(u.plus(mollify(u, std::ldexp(1.0, -k), m).scaled(-1.0)), kW);
        EXPECT_LT(err, prev) << "k " << k;
        prev = err;
    }
}

TEST(VTerms, ConstantFieldGivesZero) {
    const auto grid = line_grid();
    const auto u = GridFunction::sample(grid, constant_field(1, 3.0));
    const auto v = vj_terms(u, zero_rep(grid), 1.0, 0.0, 0.1, Mollifier::make(MollifierMode::Representation, 1));
    EXPECT_EQ(v.v1, 0.0);
    EXPECT_EQ(v.v2, 0.0);
    EXPECT_EQ(v.v3, 0.0);
}

TEST(VTerms, LinearNormalField) {
    for (int n : {1, 2}) {
        const auto grid = n == 1 ? line_grid() : plane_grid();
        const auto u = GridFunction::sample(grid, affine_x1(n));
        const auto m = Mollifier::make(MollifierMode::Representation, n);
        for (double lambda : {0.01, 0.1, 0.25}) {
            const auto v = vj_terms(u, zero_rep(grid), 1.0, 0.0, lambda, m);
            EXPECT_NEAR(v.v1, 0.5 / std::sqrt(lambda) * kNormalMoment, 1e-10);
            EXPECT_EQ(v.v2, 0.0);
            EXPECT_EQ(v.v3, 0.0);
        }
    }
}

TEST(VTerms, NoTangentialTermInOneDimension) {
    const auto grid = line_grid();
    const auto f = bump_field(1);
    const auto v = vj_terms(GridFunction::sample(grid, f), model_rep(grid, *f), 1.0, 0.0, 0.05,
                            Mollifier::make(MollifierMode::Representation, 1));
    EXPECT_EQ(v.v2, 0.0);
    EXPECT_NE(v.v1, 0.0);
}

TEST(RepresentationResidual, ZeroAndLinearFields) {
    const auto grid = line_grid();
    const auto m = Mollifier::make(MollifierMode::Representation, 1);
    const std::vector<std::pair<double, double>> samples = {{0.8, 0.0}, {1.2, 0.0}};
    EXPECT_EQ(representation_residual(GridFunction::zeros(grid), zero_rep(grid), 0.5, samples, m).max_residual, 0.0);
    const auto r = representation_residual(GridFunction::sample(grid, affine_x1(1)), zero_rep(grid), 0.5, samples, m);
    EXPECT_LT(r.max_residual, 1e-4);
}

TEST(RepresentationResidual, BumpDecreasesUnderRefinement) {
    const auto grid = line_grid();
    const auto f = bump_field(1);
    const auto u = GridFunction::sample(grid, f);
    const auto rep = model_rep(grid, *f);
    const std::vector<std::pair<double, double>> samples = {{1.0, 0.0}};
    const auto m = Mollifier::make(MollifierMode::Representation, 1, 4);
    const double a = representation_residual(u, rep, 0.5, samples, m).max_residual;
    const double b =
        representation_residual(u, rep, 0.5, samples, m.refined(), RepresentationOptions{}.refined()).max_residual;
    EXPECT_LT(a, 1e-3);
    EXPECT_LT(b, a);
}

TEST(TraceInequality, ZeroIsDegenerate) {
    const auto grid = line_grid();
    TraceCase c{"zero", GridFunction::zeros(grid), zero_rep(grid)};
    const auto r = trace_inequality_ratio({c}, kW);
    EXPECT_TRUE(r.entries.front().degenerate);
    EXPECT_EQ(r.degenerate_count, 1u);
}

TEST(TraceInequality, HomogeneousPartsInvariantUnderParabolicRescaling) {
    // Under u -> u(lambda^2 t, lambda x) the time seminorm of the trace and the
    // Du and u_t parts of the norm all scale like lambda^{(p - 2 - theta)/p};
    // the L_p parts scale differently, so only this quotient is invariant.
    const auto f = std::make_shared<SeparableField>(
        1, std::vector<SeparableTerm>{{1.0, Profile1D::bump(1.0, 0.8), Profile1D::gaussian(0.0, 0.5), Profile1D::constant(1.0)}});
    const auto grid = line_grid(1);
    const auto scaled = f->rescaled(2.0);
    const auto fine = std::make_shared<SpaceTimeGrid>(UniformAxis(-0.25, 0.75, 160), GradedGrid::half_line(3.0, 64, 3.0),
                                                      std::nullopt, 1);
    auto quotient = [](const RatioReport& r) {
        double num = 0.0, du = 0.0, h = 0.0;
        for (const auto& [k, v] : r.entries.front().extras) {
            if (k == "num_time_seminorm") num = v;
            if (k == "den_Du") du = v;
            if (k == "den_ut_hminus1") h = v;
        }
        return num / (du + h);
    };
    const double qa = quotient(trace_inequality_ratio({{"u", GridFunction::sample(grid, f), model_rep(grid, *f)}}, kW));
    const double qb =
        quotient(trace_inequality_ratio({{"u2", GridFunction::sample(fine, scaled), model_rep(fine, *scaled)}}, kW));
    EXPECT_GT(qa, 0.0);
    EXPECT_LT(std::abs(qa - qb) / qa, 0.01);
}

TEST(TraceInequality, BatteryIsBoundedAndStable) {
    Rng rng(9);
    const auto members = trace_members(rng, 6, 1, 0.05, 1.0);
    const auto coarse = trace_inequality_ratio(sample_members(members, line_grid(0)), kW);
    const auto fine = trace_inequality_ratio(sample_members(members, line_grid(1)), kW);
    EXPECT_EQ(fine.degenerate_count, 0u);
    EXPECT_TRUE(std::isfinite(fine.max));
    EXPECT_LT(std::abs(fine.max - coarse.max) / coarse.max, 0.1);
}
