#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "wtrace/core.hpp"

using namespace wtrace;

TEST(WeightParams, SmoothnessFromPThetaN) {
    EXPECT_DOUBLE_EQ(WeightParams::make(2.0, 0.5, 1).s(), 0.75);
    EXPECT_NEAR(WeightParams::make(3.0, 2.0, 2).s(), 2.0 / 3.0, 1e-15);
}

TEST(WeightParams, RejectsThetaOutsideWindow) {
    EXPECT_THROW(WeightParams::make(2.0, 2.1, 1), OutOfRangeTheta);
    EXPECT_THROW(WeightParams::make(2.0, 0.0, 1), OutOfRangeTheta);
    EXPECT_THROW(WeightParams::make(2.0, 1.0, 2), OutOfRangeTheta);
    EXPECT_THROW(WeightParams::make(2.0, 3.0, 2), OutOfRangeTheta);
    EXPECT_THROW(WeightParams::make(1.0, 0.5, 1), ValidationError);
    EXPECT_THROW(WeightParams::make(2.0, 0.5, 3), ValidationError);
}

TEST(WeightParams, SmoothnessInUnitIntervalAndDecreasingInTheta) {
    for (int n : {1, 2}) {
        for (double p : {1.2, 2.0, 3.0, 5.0}) {
            double prev = 1.0;
            for (int k = 1; k < 50; ++k) {
                const double theta = n - 1 + p * k / 50.0;
                const double s = WeightParams::make(p, theta, n).s();
                EXPECT_GT(s, 0.0);
                EXPECT_LT(s, 1.0);
                EXPECT_LT(s, prev);
                prev = s;
            }
        }
    }
}

TEST(Domain, RhoExamples) {
    const auto half = Domain::half_space(2);
    const std::array<double, 2> x{0.3, 1.7};
    EXPECT_DOUBLE_EQ(half.rho(x), 0.3);
    const auto unit = Domain::unit_interval();
    EXPECT_NEAR(unit.rho(std::array<double, 1>{0.9}), 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(unit.rho(std::array<double, 1>{0.5}), 0.5);
    EXPECT_DOUBLE_EQ(unit.rho(std::array<double, 1>{0.0}), 0.0);
}

TEST(Domain, RhoIsOneLipschitz) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto half = Domain::half_space(2);
    const auto unit = Domain::unit_interval();
    for (int i = 0; i < 1000; ++i) {
        const std::array<double, 2> a{4 * u01(rng), 8 * u01(rng) - 4};
        const std::array<double, 2> b{4 * u01(rng), 8 * u01(rng) - 4};
        EXPECT_LE(std::abs(half.rho(a) - half.rho(b)), std::hypot(a[0] - b[0], a[1] - b[1]) + 1e-15);
        const std::array<double, 1> c{u01(rng)};
        const std::array<double, 1> d{u01(rng)};
        EXPECT_LE(std::abs(unit.rho(c) - unit.rho(d)), std::abs(c[0] - d[0]) + 1e-15);
    }
}

TEST(GradedGrid, WeightsSumToAxisLength) {
    const auto g = GradedGrid::half_line(4.0, 32, 3.0);
    double sum = 0.0;
    for (double v : g.weights()) sum += v;
    EXPECT_NEAR(sum, 4.0, 1e-12);
    const auto iv = GradedGrid::interval(8, 2.0, true);
    sum = 0.0;
    for (double v : iv.weights()) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_TRUE(iv.is_boundary_node(0));
    EXPECT_TRUE(iv.is_boundary_node(iv.size() - 1));
    EXPECT_DOUBLE_EQ(iv.rho(0.75), 0.25);
}

TEST(GradedGrid, CoarseningKeepsEveryOtherEdge) {
    const auto g = GradedGrid::half_line(4.0, 32, 3.0);
    ASSERT_TRUE(g.can_coarsen());
    const auto [coarse, index] = g.coarsened();
    ASSERT_EQ(coarse.size(), index.size());
    for (std::size_t i = 0; i < index.size(); ++i) EXPECT_DOUBLE_EQ(coarse.node(i), g.node(index[i]));
}

TEST(SpaceTimeGrid, IndexingAndWeights) {
    const SpaceTimeGrid grid(UniformAxis(0.0, 1.0, 4), GradedGrid::half_line(2.0, 8, 2.0), UniformAxis(-1.0, 1.0, 2), 2);
    EXPECT_EQ(grid.size(), 5u * 8u * 3u);
    const auto p = grid.point(2, 3, 1);
    EXPECT_DOUBLE_EQ(p.t, 0.5);
    EXPECT_DOUBLE_EQ(p.x1, grid.normal().node(3));
    EXPECT_DOUBLE_EQ(p.xp, 0.0);
    double sum = 0.0;
    for (double v : grid.weights(0.0)) sum += v;
    EXPECT_NEAR(sum, 1.0 * 2.0 * 2.0, 1e-12);
}

TEST(Hash, StableAndSensitive) {
    EXPECT_EQ(descriptor_hash("abc"), descriptor_hash("abc"));
    EXPECT_NE(descriptor_hash("abc"), descriptor_hash("abd"));
}
