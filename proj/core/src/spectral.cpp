#include "sqg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace sqg {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int axis_len(Parity p, int K) { return p == Parity::Odd ? K : K + 2; }
int axis_off(Parity p) { return p == Parity::Odd ? 1 : 0; }
fftw_r2r_kind axis_kind(Parity p) { return p == Parity::Odd ? FFTW_RODFT00 : FFTW_REDFT00; }
int parity_index(Parities p) { return (p[0] == Parity::Odd ? 0 : 2) + (p[1] == Parity::Odd ? 0 : 1); }

// Fill b[0..mmax] with sin or cos(pi m x) by the angle-addition recurrence.
void basis_row(Parity p, double x, int mmax, double* b) {
    const double c = std::cos(M_PI * x), s = std::sin(M_PI * x);
    double cr = 1.0, sr = 0.0;
    for (int m = 0; m <= mmax; ++m) {
        b[m] = p == Parity::Odd ? sr : cr;
        const double cn = cr * c - sr * s;
        sr = sr * c + cr * s;
        cr = cn;
        // resync every 64 steps to keep the recurrence drift at ~1e-15
        if ((m & 63) == 63) {
            cr = std::cos(M_PI * (m + 1) * x);
            sr = std::sin(M_PI * (m + 1) * x);
        }
    }
}

// Torus L2 weight of one axis basis function.
double axis_weight(Parity p, int m) { return (p == Parity::Even && m == 0) ? 2.0 : 1.0; }

}  // namespace

Grid::Grid(int resolution) : resolution_(resolution) {
    if (resolution < 32 || (resolution & (resolution - 1)) != 0)
        throw ValidationError("grid resolution must be a power of two >= 32, got " + std::to_string(resolution));
}

ScalarField::ScalarField(Grid g, Parities p)
    : grid(g), parity(p), values(static_cast<std::size_t>(g.nodes()) * g.nodes(), 0.0) {}

double ScalarField::torus(int i1, int i2) const {
    const int H = grid.resolution() / 2;
    double sign = 1.0;
    auto fold = [&](int i, Parity p) {
        i = ((i % (2 * H)) + 2 * H) % (2 * H);
        if (i > H) {
            i = 2 * H - i;
            if (p == Parity::Odd) sign = -sign;
        }
        return i;
    };
    const int a = fold(i1, parity[0]);
    const int b = fold(i2, parity[1]);
    return sign * (*this)(a, b);
}

Spectrum::Spectrum(Grid g, Parities p)
    : grid(g), parity(p), coeff(static_cast<std::size_t>(g.nodes()) * g.nodes(), 0.0) {}

void MultiplierSpec::validate() const {
    if (!(alpha >= 1.0 && alpha <= 2.0)) throw ValidationError("multiplier.alpha must lie in [1,2]");
    if (!(gamma >= 0.0)) throw ValidationError("multiplier.gamma must be >= 0");
    if (!(normalization > 0.0)) throw ValidationError("multiplier.normalization must be positive");
}

double MultiplierSpec::symbol(double k) const {
    if (k <= 0.0) return 0.0;
    double v = std::pow(k, -alpha);
    if (gamma != 0.0) v *= std::pow(std::log(10.0 + k), -gamma);
    return normalization * v;
}

struct Transformer::Impl {
    Grid grid;
    double* scratch = nullptr;
    std::array<fftw_plan, 4> plans{};

    explicit Impl(const Grid& g) : grid(g) {
        const int K = g.interior();
        scratch = fftw_alloc_real(static_cast<std::size_t>(K + 2) * (K + 2));
        std::lock_guard<std::mutex> lk(planner_mutex());
        for (int i = 0; i < 4; ++i) {
            const Parity p1 = (i & 2) ? Parity::Even : Parity::Odd;
            const Parity p2 = (i & 1) ? Parity::Even : Parity::Odd;
            plans[i] = fftw_plan_r2r_2d(axis_len(p1, K), axis_len(p2, K), scratch, scratch, axis_kind(p1),
                                        axis_kind(p2), FFTW_ESTIMATE);
        }
    }
    ~Impl() {
        std::lock_guard<std::mutex> lk(planner_mutex());
        for (auto p : plans) fftw_destroy_plan(p);
        fftw_free(scratch);
    }

    // Copies the active block of `in` into scratch, applies per-axis scales,
    // runs the r2r transform, and writes the block of `out` with post-scales.
    void run(const std::vector<double>& in, std::vector<double>& out, Parities par, bool fwd) {
        const int K = grid.interior();
        const int N = K + 2;
        const int n1 = axis_len(par[0], K), n2 = axis_len(par[1], K);
        const int o1 = axis_off(par[0]), o2 = axis_off(par[1]);
        std::vector<double> s1(n1), s2(n2);
        auto scales = [&](Parity p, int n, std::vector<double>& s) {
            for (int i = 0; i < n; ++i) {
                if (p == Parity::Odd) {
                    s[i] = fwd ? 1.0 / (K + 1) : 0.5;
                } else {
                    const bool edge = (i == 0 || i == n - 1);
                    s[i] = fwd ? (edge ? 1.0 : 2.0) / (2.0 * (K + 1)) : (edge ? 1.0 : 0.5);
                }
            }
        };
        scales(par[0], n1, s1);
        scales(par[1], n2, s2);
        for (int a = 0; a < n1; ++a)
            for (int b = 0; b < n2; ++b) {
                const double v = in[static_cast<std::size_t>(a + o1) * N + (b + o2)];
                scratch[static_cast<std::size_t>(a) * n2 + b] = fwd ? v : v * s1[a] * s2[b];
            }
        fftw_execute(plans[parity_index(par)]);
        std::fill(out.begin(), out.end(), 0.0);
        for (int a = 0; a < n1; ++a)
            for (int b = 0; b < n2; ++b) {
                const double v = scratch[static_cast<std::size_t>(a) * n2 + b];
                out[static_cast<std::size_t>(a + o1) * N + (b + o2)] = fwd ? v * s1[a] * s2[b] : v;
            }
    }
};

Transformer::Transformer(const Grid& g) : impl_(std::make_unique<Impl>(g)) {}
Transformer::~Transformer() = default;

const Grid& Transformer::grid() const { return impl_->grid; }

void Transformer::forward(const ScalarField& f, Spectrum& out) {
    if (!(f.grid == impl_->grid) || !(out.grid == impl_->grid)) throw ValidationError("transform grid mismatch");
    out.parity = f.parity;
    impl_->run(f.values, out.coeff, f.parity, true);
}

void Transformer::inverse(const Spectrum& s, ScalarField& out) {
    if (!(s.grid == impl_->grid) || !(out.grid == impl_->grid)) throw ValidationError("transform grid mismatch");
    out.parity = s.parity;
    impl_->run(s.coeff, out.values, s.parity, false);
}

Spectrum Transformer::forward(const ScalarField& f) {
    Spectrum s(f.grid, f.parity);
    forward(f, s);
    return s;
}

ScalarField Transformer::inverse(const Spectrum& s) {
    ScalarField f(s.grid, s.parity);
    inverse(s, f);
    return f;
}

Transformer& transformer_for(const Grid& g) {
    thread_local std::map<int, std::unique_ptr<Transformer>> cache;
    auto& slot = cache[g.resolution()];
    if (!slot) slot = std::make_unique<Transformer>(g);
    return *slot;
}

Spectrum forward_transform(const ScalarField& f) { return transformer_for(f.grid).forward(f); }
ScalarField inverse_transform(const Spectrum& s) { return transformer_for(s.grid).inverse(s); }

std::pair<Spectrum, Spectrum> velocity_from_scalar(const Spectrum& theta, const MultiplierSpec& mult) {
    if (theta.parity != kOddOdd) throw ValidationError("velocity_from_scalar expects odd-odd theta");
    const Grid& g = theta.grid;
    const int K = g.interior();
    Spectrum u1(g, {Parity::Odd, Parity::Even});
    Spectrum u2(g, {Parity::Even, Parity::Odd});
    for (int m1 = 1; m1 <= K; ++m1) {
        const double k1 = M_PI * m1;
        for (int m2 = 1; m2 <= K; ++m2) {
            const double b = theta(m1, m2);
            if (b == 0.0) continue;
            const double k2 = M_PI * m2;
            const double psi = mult.symbol(std::hypot(k1, k2)) * b;
            u1(m1, m2) = k2 * psi;
            u2(m1, m2) = -(k1 * psi);
        }
    }
    return {std::move(u1), std::move(u2)};
}

double divergence_residual(const Spectrum& u1, const Spectrum& u2) {
    const int N = u1.grid.nodes();
    double worst = 0.0;
    for (int m1 = 0; m1 < N; ++m1)
        for (int m2 = 0; m2 < N; ++m2) {
            const double a = M_PI * m1 * u1(m1, m2);
            const double b = M_PI * m2 * u2(m1, m2);
            const double scale = std::max(std::abs(a), std::abs(b));
            if (scale == 0.0) continue;
            worst = std::max(worst, std::abs(a + b) / scale);
        }
    return worst;
}

double sobolev_norm(const Spectrum& s, double sexp) {
    if (!(sexp >= 0.0 && sexp <= 3.0)) throw ValidationError("sobolev index must lie in [0,3]");
    const int N = s.grid.nodes();
    double acc = 0.0;
    for (int m1 = 0; m1 < N; ++m1) {
        const double w1 = axis_weight(s.parity[0], m1);
        for (int m2 = 0; m2 < N; ++m2) {
            const double c = s(m1, m2);
            if (c == 0.0) continue;
            const double k2 = M_PI * M_PI * (double(m1) * m1 + double(m2) * m2);
            const double kw = sexp == 0.0 ? 1.0 : std::pow(k2, sexp);
            acc += w1 * axis_weight(s.parity[1], m2) * kw * c * c;
        }
    }
    return std::sqrt(acc);
}

std::pair<double, double> winfty_norm(const Spectrum& s) {
    auto& tr = transformer_for(s.grid);
    const ScalarField f = tr.inverse(s);
    const ScalarField g1 = tr.inverse(derivative(s, 1, 0));
    const ScalarField g2 = tr.inverse(derivative(s, 0, 1));
    double fmax = 0.0, gmax = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        fmax = std::max(fmax, std::abs(f.values[i]));
        gmax = std::max(gmax, std::hypot(g1.values[i], g2.values[i]));
    }
    return {fmax, gmax};
}

std::pair<double, double> winfty_norm(const ScalarField& f) { return winfty_norm(forward_transform(f)); }

bool retained(const Grid& g, int m1, int m2) { return std::max(m1, m2) <= g.max_retained(); }

Spectrum dealias(const Spectrum& s) {
    Spectrum out = s;
    const int N = s.grid.nodes();
    for (int m1 = 0; m1 < N; ++m1)
        for (int m2 = 0; m2 < N; ++m2)
            if (!retained(s.grid, m1, m2)) out(m1, m2) = 0.0;
    return out;
}

Spectrum derivative(const Spectrum& s, int d1, int d2) {
    Parities p = s.parity;
    Spectrum out = s;
    const int N = s.grid.nodes();
    auto apply = [&](int axis, int d) {
        for (int r = 0; r < d; ++r) {
            // sin -> k cos, cos -> -k sin
            const double sg = p[axis] == Parity::Odd ? 1.0 : -1.0;
            for (int m1 = 0; m1 < N; ++m1)
                for (int m2 = 0; m2 < N; ++m2) out(m1, m2) *= sg * M_PI * (axis == 0 ? m1 : m2);
            p[axis] = p[axis] == Parity::Odd ? Parity::Even : Parity::Odd;
        }
    };
    apply(0, d1);
    apply(1, d2);
    out.parity = p;
    // a sine axis never carries m = 0 or the Nyquist index
    const int K = s.grid.interior();
    for (int axis = 0; axis < 2; ++axis) {
        if (p[axis] != Parity::Odd) continue;
        for (int i = 0; i < N; ++i) {
            if (axis == 0) {
                out(0, i) = 0.0;
                out(K + 1, i) = 0.0;
            } else {
                out(i, 0) = 0.0;
                out(i, K + 1) = 0.0;
            }
        }
    }
    return out;
}

std::complex<double> fourier_coefficient(const Spectrum& s, int m1, int m2) {
    auto axis = [&](Parity p, int m, int& idx) -> std::complex<double> {
        idx = std::abs(m);
        if (p == Parity::Odd) {
            if (m == 0) return 0.0;
            // sin a = (e^{ia} - e^{-ia}) / 2i
            return m > 0 ? std::complex<double>(0.0, -0.5) : std::complex<double>(0.0, 0.5);
        }
        return m == 0 ? 1.0 : 0.5;
    };
    int a = 0, b = 0;
    const auto f1 = axis(s.parity[0], m1, a);
    const auto f2 = axis(s.parity[1], m2, b);
    const int N = s.grid.nodes();
    if (a >= N || b >= N) return 0.0;
    return f1 * f2 * s(a, b);
}

PointEvaluator::PointEvaluator(const Spectrum& s, int max_mode)
    : s_(&s), mmax_(std::min(max_mode, s.grid.nodes() - 1)), b1_(mmax_ + 1), b2_(mmax_ + 1) {}

double PointEvaluator::operator()(Vec2 x) const {
    basis_row(s_->parity[0], x.x1, mmax_, b1_.data());
    basis_row(s_->parity[1], x.x2, mmax_, b2_.data());
    double acc = 0.0;
    for (int m1 = 0; m1 <= mmax_; ++m1) {
        const double* row = &s_->coeff[static_cast<std::size_t>(m1) * s_->grid.nodes()];
        double r = 0.0;
        for (int m2 = 0; m2 <= mmax_; ++m2) r += row[m2] * b2_[m2];
        acc += b1_[m1] * r;
    }
    return acc;
}

std::vector<double> synthesize_patch(const Spectrum& s, Vec2 origin, double step, int n1, int n2,
                                     int max_mode) {
    const int M = std::min(max_mode, s.grid.nodes() - 1);
    const int N = s.grid.nodes();
    std::vector<double> rows(static_cast<std::size_t>(n1) * (M + 1), 0.0);
    std::vector<double> b(M + 1);
    for (int p = 0; p < n1; ++p) {
        basis_row(s.parity[0], origin.x1 + p * step, M, b.data());
        double* r = &rows[static_cast<std::size_t>(p) * (M + 1)];
        for (int m1 = 0; m1 <= M; ++m1) {
            const double w = b[m1];
            if (w == 0.0) continue;
            const double* c = &s.coeff[static_cast<std::size_t>(m1) * N];
            for (int m2 = 0; m2 <= M; ++m2) r[m2] += w * c[m2];
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n1) * n2, 0.0);
    for (int q = 0; q < n2; ++q) {
        basis_row(s.parity[1], origin.x2 + q * step, M, b.data());
        for (int p = 0; p < n1; ++p) {
            const double* r = &rows[static_cast<std::size_t>(p) * (M + 1)];
            double acc = 0.0;
            for (int m2 = 0; m2 <= M; ++m2) acc += r[m2] * b[m2];
            out[static_cast<std::size_t>(p) * n2 + q] = acc;
        }
    }
    return out;
}

namespace {

// Lagrange weights on integer nodes i0..i0+n-1 at position s.
void lagrange_weights(double s, int i0, int n, double* w) {
    for (int a = 0; a < n; ++a) {
        double num = 1.0, den = 1.0;
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            num *= s - (i0 + b);
            den *= static_cast<double>(a - b);
        }
        w[a] = num / den;
    }
}

}  // namespace

double lagrange_interpolate(const ScalarField& f, Vec2 x, int n) {
    if (n < 2 || n > 8) throw ValidationError("interpolation order must be 2..8 points");
    const double h = f.grid.spacing();
    const double s1 = x.x1 / h, s2 = x.x2 / h;
    const int i1 = static_cast<int>(std::floor(s1)) - n / 2 + 1;
    const int i2 = static_cast<int>(std::floor(s2)) - n / 2 + 1;
    double w1[8], w2[8];
    lagrange_weights(s1, i1, n, w1);
    lagrange_weights(s2, i2, n, w2);
    const int last = f.grid.nodes() - 1;
    const bool inside = i1 >= 0 && i2 >= 0 && i1 + n - 1 <= last && i2 + n - 1 <= last;
    double acc = 0.0;
    for (int a = 0; a < n; ++a) {
        double row = 0.0;
        if (inside)
            for (int b = 0; b < n; ++b) row += w2[b] * f(i1 + a, i2 + b);
        else
            for (int b = 0; b < n; ++b) row += w2[b] * f.torus(i1 + a, i2 + b);
        acc += w1[a] * row;
    }
    return acc;
}


}  // namespace sqg
