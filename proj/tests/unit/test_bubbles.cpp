#include <gtest/gtest.h>

#include <cmath>

#include "sqg/bubbles.hpp"

using namespace sqg;

TEST(Bubbles, BumpProfile) {
    EXPECT_EQ(bump(0.0), 1.0);
    EXPECT_EQ(bump(BumpProfile::plateau_radius), 1.0);
    EXPECT_EQ(bump(BumpProfile::support_radius), 0.0);
    EXPECT_GT(bump(0.07), 0.0);
    EXPECT_LT(bump(0.07), 1.0);
    // derivative against a central difference
    for (double r : {0.04, 0.06, 0.1}) {
        const double h = 1e-6;
        EXPECT_NEAR(bump_derivative(r), (bump(r + h) - bump(r - h)) / (2 * h), 1e-5);
    }
}

TEST(Bubbles, Geometry) {
    const auto b = make_bubbles(DataSpec{3, 5, 0.55, 3});
    ASSERT_EQ(b.size(), 3u);
    for (const auto& x : b) {
        const double q = std::pow(4.0, -(x.n - 3) - 1);
        EXPECT_DOUBLE_EQ(x.center.x1, q);
        EXPECT_DOUBLE_EQ(x.center.x2, q / 2);
        EXPECT_DOUBLE_EQ(x.support_radius, q / 2);
        EXPECT_DOUBLE_EQ(x.core_radius, q / 8);
        EXPECT_DOUBLE_EQ(x.amplitude, std::pow(x.n, -0.55) * std::pow(4.0, -(x.n - 3)));
        EXPECT_DOUBLE_EQ(x.value(x.center), x.amplitude);
    }
}

TEST(Bubbles, SupportsAreDisjoint) {
    const auto b = make_bubbles(DataSpec{3, 6, 0.55, 3});
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        EXPECT_GE((b[i].center - b[i + 1].center).norm(), b[i].support_radius + b[i + 1].support_radius);
}

TEST(Bubbles, ResolutionGuard) {
    const DataSpec d{3, 5, 0.55, 3};
    EXPECT_DOUBLE_EQ(points_across_smallest(d, Grid(1024)), 8.0);
    EXPECT_NO_THROW(require_resolved(d, Grid(1024)));
    EXPECT_THROW(require_resolved(d, Grid(512)), ValidationError);
    EXPECT_THROW(assemble_data(d, Grid(256)), ValidationError);
}

TEST(Bubbles, AssembledMatchesAnalytic) {
    const DataSpec d{3, 4, 0.55, 3};
    const Grid g(512);
    const ScalarField f = assemble_data(d, g);
    const auto b = make_bubbles(d);
    for (int j1 = 0; j1 < g.nodes(); j1 += 7)
        for (int j2 = 0; j2 < g.nodes(); j2 += 7)
            EXPECT_DOUBLE_EQ(f(j1, j2), data_value(b, {g.node(j1), g.node(j2)}));
}

TEST(Bubbles, Hdot2IsAdditiveOverDisjointBubbles) {
    // the Laplacian is local, so disjoint supports add in Hdot2 squared
    const DataSpec d{3, 5, 0.55, 3};
    const Grid g(1024);
    const auto inc = bubble_h2_increments(d, g);
    double sum = 0.0;
    for (double v : inc) sum += v;
    const double tot = sobolev_norm(forward_transform(assemble_data(d, g)), 2.0);
    EXPECT_NEAR(sum, tot * tot, 1e-6 * tot * tot);
}

TEST(Bubbles, HomogeneousHdot2Scaling) {
    // bubble n carries n^-2alpha times a level-independent constant
    const DataSpec d{3, 4, 0.55, 3};
    const auto inc = bubble_h2_increments(d, Grid(1024));
    EXPECT_NEAR(inc[0] * std::pow(3.0, 1.1), inc[1] * std::pow(4.0, 1.1), 2e-3 * inc[0] * std::pow(3.0, 1.1));
}

TEST(Bubbles, OrderingOnCore) {
    const OrderingReport r = verify_initial_ordering(DataSpec{3, 6, 0.55, 3});
    EXPECT_TRUE(r.core_ok);
    EXPECT_FALSE(r.nominal_ok);
    for (const auto& e : r.entries) {
        EXPECT_NEAR(e.core_ratio, 9.0 / 7.0, 1e-12);
        if (e.n < 6) EXPECT_NEAR(e.core_gap, 28.0 / 9.0, 1e-12);
    }
}

TEST(Bubbles, InvalidSpec) {
    EXPECT_THROW((DataSpec{3, 2, 0.55, 3}.validate()), ValidationError);
    EXPECT_THROW((DataSpec{3, 5, 0.55, 4}.validate()), ValidationError);
}
