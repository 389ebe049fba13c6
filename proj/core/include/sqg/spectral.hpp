#pragma once

#include <array>
#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "sqg/types.hpp"

namespace sqg {

// Period-2 square [-1,1)^2 sampled at x_j = -1 + j*h, h = 2/R. Only the
// quarter [0,1]^2 is stored: nodes j = 0..K+1 with K = R/2 - 1.
class Grid {
public:
    explicit Grid(int resolution);

    int resolution() const { return resolution_; }
    int interior() const { return resolution_ / 2 - 1; }
    int nodes() const { return resolution_ / 2 + 1; }
    double spacing() const { return 2.0 / resolution_; }
    double node(int j) const { return j * spacing(); }
    // Largest mode index kept by the 2/3 rule.
    int max_retained() const { return resolution_ / 3; }

    bool operator==(const Grid& o) const { return resolution_ == o.resolution_; }

private:
    int resolution_;
};

// Per-axis symmetry. Odd axes carry sine series, even axes cosine series.
enum class Parity { Odd, Even };

using Parities = std::array<Parity, 2>;
inline constexpr Parities kOddOdd{Parity::Odd, Parity::Odd};

// Samples on the quarter-domain nodes, row-major in (j1, j2). Odd axes keep
// their boundary nodes at exactly zero.
struct ScalarField {
    Grid grid;
    Parities parity = kOddOdd;
    std::vector<double> values;
    // Declared distance from either axis within which the field is zero.
    double axis_margin = 0.0;

    explicit ScalarField(Grid g, Parities p = kOddOdd);

    double& operator()(int j1, int j2) { return values[static_cast<std::size_t>(j1) * grid.nodes() + j2]; }
    double operator()(int j1, int j2) const { return values[static_cast<std::size_t>(j1) * grid.nodes() + j2]; }

    bool odd_odd() const { return parity == kOddOdd; }
    // Value at full-torus node (i1, i2), i in [-R/2, R/2), via the parities.
    double torus(int i1, int i2) const;
};

// Real sine/cosine coefficients, index (m1, m2) with wavenumber k = pi*m.
// Odd axes use m = 1..K, even axes m = 0..K+1.
struct Spectrum {
    Grid grid;
    Parities parity = kOddOdd;
    std::vector<double> coeff;

    explicit Spectrum(Grid g, Parities p = kOddOdd);

    double& operator()(int m1, int m2) { return coeff[static_cast<std::size_t>(m1) * grid.nodes() + m2]; }
    double operator()(int m1, int m2) const { return coeff[static_cast<std::size_t>(m1) * grid.nodes() + m2]; }
};

// P(L) = L^-alpha log^-gamma(10 + L), scaled by `normalization`.
struct MultiplierSpec {
    double alpha = 1.0;
    double gamma = 0.0;
    double normalization = 2.0 * M_PI;

    void validate() const;
    double symbol(double k) const;
};

// FFTW plans for one grid. Not thread-safe; each thread keeps its own.
class Transformer {
public:
    explicit Transformer(const Grid& g);
    ~Transformer();
    Transformer(const Transformer&) = delete;
    Transformer& operator=(const Transformer&) = delete;

    void forward(const ScalarField& f, Spectrum& out);
    void inverse(const Spectrum& s, ScalarField& out);
    Spectrum forward(const ScalarField& f);
    ScalarField inverse(const Spectrum& s);

    const Grid& grid() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Thread-local plan cache.
Transformer& transformer_for(const Grid& g);

Spectrum forward_transform(const ScalarField& f);
ScalarField inverse_transform(const Spectrum& s);

// (u1, u2) spectra with parities (odd, even) and (even, odd).
std::pair<Spectrum, Spectrum> velocity_from_scalar(const Spectrum& theta, const MultiplierSpec& mult);

// Largest per-mode |k1 u1 + k2 u2| relative to max(|k1 u1|, |k2 u2|).
double divergence_residual(const Spectrum& u1, const Spectrum& u2);

// (sum |k|^2s c^2 ||basis||^2)^(1/2); s = 0 is the torus L2 norm.
double sobolev_norm(const Spectrum& s, double sexp);

// (max |f|, max |grad f|) over grid nodes.
std::pair<double, double> winfty_norm(const ScalarField& f);
std::pair<double, double> winfty_norm(const Spectrum& s);

Spectrum dealias(const Spectrum& s);
bool retained(const Grid& g, int m1, int m2);

// d1 derivatives in x1 and d2 in x2; flips parity per odd order.
Spectrum derivative(const Spectrum& s, int d1, int d2);

// Complex Fourier coefficient of exp(i pi (m1 x1 + m2 x2)), any sign of m.
std::complex<double> fourier_coefficient(const Spectrum& s, int m1, int m2);

// Exact evaluation of the trigonometric series at off-grid points.
class PointEvaluator {
public:
    PointEvaluator(const Spectrum& s, int max_mode);
    double operator()(Vec2 x) const;

private:
    const Spectrum* s_;
    int mmax_;
    mutable std::vector<double> b1_, b2_;
};

// Series values on a tensor patch x = origin + (p*step1, q*step2), p < n1,
// q < n2. Row-major in (p, q).
std::vector<double> synthesize_patch(const Spectrum& s, Vec2 origin, double step, int n1, int n2,
                                     int max_mode);

// Tensor Lagrange interpolation through n (2..8) nodes per axis around x,
// reading across the parity reflections.
double lagrange_interpolate(const ScalarField& f, Vec2 x, int n = 8);

// Sine-sine field from an analytic function of (x1, x2) sampled on nodes.
template <class F>
ScalarField sample_odd_odd(const Grid& g, F&& f) {
    ScalarField out(g);
    const int K = g.interior();
    for (int j1 = 1; j1 <= K; ++j1)
        for (int j2 = 1; j2 <= K; ++j2) out(j1, j2) = f(g.node(j1), g.node(j2));
    return out;
}

}  // namespace sqg
