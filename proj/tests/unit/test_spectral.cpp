#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sqg/spectral.hpp"

using namespace sqg;

namespace {

ScalarField mode(const Grid& g, int m1, int m2, double amp = 1.0) {
    return sample_odd_odd(g, [&](double x1, double x2) {
        return amp * std::sin(M_PI * m1 * x1) * std::sin(M_PI * m2 * x2);
    });
}

}  // namespace

TEST(Spectral, SingleModeHasOneCoefficient) {
    const Grid g(64);
    const Spectrum s = forward_transform(mode(g, 3, 5, 0.7));
    for (int m1 = 1; m1 <= g.interior(); ++m1)
        for (int m2 = 1; m2 <= g.interior(); ++m2)
            EXPECT_NEAR(s(m1, m2), (m1 == 3 && m2 == 5) ? 0.7 : 0.0, 1e-13);
}

TEST(Spectral, RoundTrip) {
    const Grid g(128);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N(0.0, 1.0);
    ScalarField f(g);
    for (int j1 = 1; j1 <= g.interior(); ++j1)
        for (int j2 = 1; j2 <= g.interior(); ++j2) f(j1, j2) = N(rng);
    const ScalarField back = inverse_transform(forward_transform(f));
    for (std::size_t i = 0; i < f.values.size(); ++i) EXPECT_NEAR(back.values[i], f.values[i], 1e-12);
}

TEST(Spectral, NormsOfSineProduct) {
    // integral over [-1,1)^2 of sin^2 sin^2 is 1
    const Grid g(64);
    const Spectrum s = forward_transform(mode(g, 2, 3, 2.0));
    const double k2 = M_PI * M_PI * 13.0;
    EXPECT_NEAR(sobolev_norm(s, 0.0), 2.0, 1e-12);
    EXPECT_NEAR(sobolev_norm(s, 1.0), 2.0 * std::sqrt(k2), 1e-10);
    EXPECT_NEAR(sobolev_norm(s, 2.0), 2.0 * k2, 1e-9);
}

TEST(Spectral, L2MatchesQuadrature) {
    const Grid g(64);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0.0, 1.0);
    ScalarField f(g);
    for (int j1 = 1; j1 <= g.interior(); ++j1)
        for (int j2 = 1; j2 <= g.interior(); ++j2) f(j1, j2) = N(rng);
    // the trapezoid rule over the full torus is exact for the discrete series
    double acc = 0.0;
    const int R = g.resolution();
    for (int i1 = -R / 2; i1 < R / 2; ++i1)
        for (int i2 = -R / 2; i2 < R / 2; ++i2) acc += f.torus(i1, i2) * f.torus(i1, i2);
    const double h = g.spacing();
    EXPECT_NEAR(sobolev_norm(forward_transform(f), 0.0), std::sqrt(acc * h * h), 1e-10);
}

TEST(Spectral, VelocityOfSingleMode) {
    const Grid g(64);
    MultiplierSpec mult;
    mult.alpha = 1.0;
    const int m1 = 2, m2 = 3;
    const double k1 = M_PI * m1, k2 = M_PI * m2, k = std::hypot(k1, k2);
    const auto [u1, u2] = velocity_from_scalar(forward_transform(mode(g, m1, m2)), mult);
    const ScalarField f1 = inverse_transform(u1), f2 = inverse_transform(u2);
    const double P = 2.0 * M_PI / k;
    for (int j1 = 0; j1 < g.nodes(); j1 += 5)
        for (int j2 = 0; j2 < g.nodes(); j2 += 3) {
            const double x1 = g.node(j1), x2 = g.node(j2);
            EXPECT_NEAR(f1(j1, j2), P * k2 * std::sin(k1 * x1) * std::cos(k2 * x2), 1e-12);
            EXPECT_NEAR(f2(j1, j2), -P * k1 * std::cos(k1 * x1) * std::sin(k2 * x2), 1e-12);
        }
    EXPECT_LE(divergence_residual(u1, u2), 4 * 2.3e-16);
}

TEST(Spectral, MultiplierSymbol) {
    MultiplierSpec m{1.0, 2.0, 3.0};
    EXPECT_NEAR(m.symbol(5.0), 3.0 / 5.0 / std::pow(std::log(15.0), 2.0), 1e-15);
    EXPECT_EQ(m.symbol(0.0), 0.0);
    MultiplierSpec bad{2.5, 0.0, 1.0};
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Spectral, DerivativeOfMode) {
    const Grid g(64);
    const Spectrum s = forward_transform(mode(g, 4, 1));
    const ScalarField d = inverse_transform(derivative(s, 1, 1));
    for (int j1 = 0; j1 < g.nodes(); j1 += 4)
        for (int j2 = 0; j2 < g.nodes(); j2 += 4) {
            const double x1 = g.node(j1), x2 = g.node(j2);
            EXPECT_NEAR(d(j1, j2), 4 * M_PI * M_PI * std::cos(4 * M_PI * x1) * std::cos(M_PI * x2), 1e-11);
        }
}

TEST(Spectral, DealiasKeepsTwoThirds) {
    const Grid g(64);
    Spectrum s(g);
    for (auto& c : s.coeff) c = 1.0;
    const Spectrum d = dealias(s);
    const int K = g.max_retained();
    for (int m1 = 1; m1 <= g.interior(); ++m1)
        for (int m2 = 1; m2 <= g.interior(); ++m2) EXPECT_EQ(d(m1, m2) != 0.0, m1 <= K && m2 <= K);
}

TEST(Spectral, FourierCoefficientOfSineSine) {
    // sin a sin b = -(1/4)(e^{i(a+b)} - e^{i(a-b)} - e^{i(-a+b)} + e^{-i(a+b)})
    const Grid g(32);
    const Spectrum s = forward_transform(mode(g, 2, 3, 1.0));
    EXPECT_NEAR(fourier_coefficient(s, 2, 3).real(), -0.25, 1e-14);
    EXPECT_NEAR(fourier_coefficient(s, 2, -3).real(), 0.25, 1e-14);
    EXPECT_NEAR(std::abs(fourier_coefficient(s, 1, 3)), 0.0, 1e-14);
}

TEST(Spectral, PointEvaluatorIsExactOffGrid) {
    const Grid g(64);
    ScalarField f = mode(g, 3, 2, 1.5);
    const ScalarField f2 = mode(g, 7, 9, -0.3);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += f2.values[i];
    const Spectrum s = forward_transform(f);
    const PointEvaluator ev(s, g.interior());
    for (Vec2 x : {Vec2{0.123, 0.456}, Vec2{-0.7, 0.31}, Vec2{0.99, -0.05}}) {
        const double ref = 1.5 * std::sin(3 * M_PI * x.x1) * std::sin(2 * M_PI * x.x2) -
                           0.3 * std::sin(7 * M_PI * x.x1) * std::sin(9 * M_PI * x.x2);
        EXPECT_NEAR(ev(x), ref, 1e-12);
    }
}

TEST(Spectral, LagrangeInterpolationOrder) {
    // error drops by about 2^8 per halving of h for the 8-point stencil
    auto err = [](int R) {
        const Grid g(R);
        const ScalarField f = mode(g, 1, 2);
        double e = 0.0;
        for (Vec2 x : {Vec2{0.3137, 0.2711}, Vec2{0.0071, 0.6123}, Vec2{0.98, 0.013}})
            e = std::max(e, std::abs(lagrange_interpolate(f, x) - std::sin(M_PI * x.x1) * std::sin(2 * M_PI * x.x2)));
        return e;
    };
    const double e1 = err(32), e2 = err(64);
    EXPECT_LT(e2, 1e-7);
    EXPECT_GT(e1 / e2, 100.0);
    EXPECT_THROW(lagrange_interpolate(mode(Grid(32), 1, 1), {0.1, 0.1}, 9), ValidationError);
}

TEST(Spectral, GradientSupNorm) {
    const Grid g(128);
    const auto [fi, gi] = winfty_norm(forward_transform(mode(g, 1, 1)));
    EXPECT_NEAR(fi, 1.0, 1e-3);
    EXPECT_NEAR(gi, M_PI, 1e-3);
}
