#include "sqg/key_lemma.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

namespace sqg {

namespace {

// Overlap of the node cell [y - h/2, y + h/2] with [a, b].
double overlap(double y, double h, double a, double b) {
    return std::max(0.0, std::min(y + 0.5 * h, b) - std::max(y - 0.5 * h, a));
}

double kernel(double y1, double y2) {
    const double r2 = y1 * y1 + y2 * y2;
    return y1 * y2 / (r2 * r2 * std::sqrt(r2));
}

}  // namespace

Rect lemma_region(Vec2 x, bool* clipped) {
    Rect r{0.5 * x.x1, 2.0 * x.x1, 2.0 * x.x2, 1.0};
    const bool c = r.b1 > 1.0 || r.a2 > 1.0;
    r.b1 = std::min(r.b1, 1.0);
    r.a2 = std::min(r.a2, 1.0);
    if (clipped) *clipped = c;
    return r;
}

KeyLemmaContext::KeyLemmaContext(const ScalarField& theta, int image_radius)
    : theta_(theta),
      d1_(theta.grid),
      d2_(theta.grid),
      d11_(theta.grid),
      d12_(theta.grid),
      d22_(theta.grid),
      image_radius_(image_radius),
      kernel_(theta) {
    if (!theta.odd_odd()) throw ValidationError("key lemma needs an odd-odd field");
    const Spectrum s = forward_transform(theta);
    d1_ = inverse_transform(derivative(s, 1, 0));
    d2_ = inverse_transform(derivative(s, 0, 1));
    d11_ = inverse_transform(derivative(s, 2, 0));
    d12_ = inverse_transform(derivative(s, 1, 1));
    d22_ = inverse_transform(derivative(s, 0, 2));
    // The quarter holds a quarter of the torus integral, and on the torus
    // int |grad^2 f|^2 = int |lap f|^2.
    hess_l2_ = 0.5 * sobolev_norm(s, 2.0);
    grad_inf_ = winfty_norm(s).second;
    for (double v : theta.values) theta_inf_ = std::max(theta_inf_, std::abs(v));
}

double KeyLemmaContext::leading_term(Vec2 x) const {
    if (!(x.x1 > 0.0 && x.x1 < 0.5)) throw ValidationError("leading term needs 0 < x1 < 1/2");
    const Grid& g = theta_.grid;
    const double h = g.spacing();
    const int last = g.nodes() - 1;
    const double a1 = 2.0 * x.x1;
    // near the origin the kernel varies on the cell scale, refine there
    const double near = 32.0 * h;
    constexpr int q = 4;
    const int j1lo = std::max(0, int(std::floor(a1 / h - 0.5)));
    double acc = 0.0;
    for (int j1 = j1lo; j1 <= last; ++j1) {
        const double y1 = g.node(j1);
        const double w1 = overlap(y1, h, a1, 1.0);
        if (w1 <= 0.0) continue;
        const bool partial = w1 < h * (1.0 - 1e-12) && j1 != last;
        for (int j2 = 0; j2 <= last; ++j2) {
            const double y2 = g.node(j2);
            const double w2 = overlap(y2, h, 0.0, 1.0);
            if (partial || std::hypot(y1, y2) < near) {
                const double lo1 = std::max(y1 - 0.5 * h, a1), hi1 = std::min(y1 + 0.5 * h, 1.0);
                const double lo2 = std::max(y2 - 0.5 * h, 0.0), hi2 = std::min(y2 + 0.5 * h, 1.0);
                const double s1 = (hi1 - lo1) / q, s2 = (hi2 - lo2) / q;
                for (int p = 0; p < q; ++p)
                    for (int r = 0; r < q; ++r) {
                        const Vec2 y{lo1 + (p + 0.5) * s1, lo2 + (r + 0.5) * s2};
                        acc += s1 * s2 * kernel(y.x1, y.x2) * lagrange_interpolate(theta_, y, 8);
                    }
            } else {
                const double v = theta_(j1, j2);
                if (v != 0.0) acc += w1 * w2 * kernel(y1, y2) * v;
            }
        }
    }
    return 12.0 * acc;
}

LemmaNorms KeyLemmaContext::norms(Vec2 x) const {
    LemmaNorms n;
    n.hess_l2 = hess_l2_;
    n.theta_inf = theta_inf_;
    n.grad_inf = grad_inf_;
    const Rect R = lemma_region(x);
    const Grid& g = theta_.grid;
    const double h = g.spacing();
    const int last = g.nodes() - 1;
    const int i1lo = std::max(0, int(std::floor(R.a1 / h - 0.5))), i1hi = std::min(last, int(std::ceil(R.b1 / h + 0.5)));
    const int i2lo = std::max(0, int(std::floor(R.a2 / h - 0.5)));
    double g2 = 0.0, y2 = 0.0, hs = 0.0, gi = 0.0;
    for (int j1 = i1lo; j1 <= i1hi; ++j1) {
        const double w1 = overlap(g.node(j1), h, R.a1, R.b1);
        if (w1 <= 0.0) continue;
        for (int j2 = i2lo; j2 <= last; ++j2) {
            const double w2 = overlap(g.node(j2), h, R.a2, R.b2);
            if (w2 <= 0.0) continue;
            const double w = w1 * w2;
            const double a = d1_(j1, j2), b = d2_(j1, j2);
            g2 += w * (a * a + b * b);
            const double yy = g.node(j2);
            if (yy > 0.0) y2 += w * a * a / (yy * yy);
            hs += w * (d11_(j1, j2) * d11_(j1, j2) + 2.0 * d12_(j1, j2) * d12_(j1, j2) + d22_(j1, j2) * d22_(j1, j2));
            gi = std::max(gi, std::hypot(a, b));
        }
    }
    n.grad_l2_R = std::sqrt(g2);
    n.y2inv_d1_l2_R = std::sqrt(y2);
    n.hess_l2_R = std::sqrt(hs);
    n.grad_inf_R = gi;
    return n;
}

KeyLemmaReport KeyLemmaContext::evaluate(Vec2 x) const {
    if (!(x.x2 > 0.0 && x.x2 <= x.x1)) throw ValidationError("key lemma probes need 0 < x2 <= x1");
    KeyLemmaReport r;
    r.x = x;
    r.leading = leading_term(x);
    KernelProbe p;
    p.x = x;
    p.image_radius = image_radius_;
    p.exclusion_cells = auto_exclusion_cells(x, theta_.grid.spacing());
    const KernelResult k = kernel_.velocity(p);
    r.u = k.u;
    r.tail_bound = k.tail_bound;
    r.exclusion_cells = p.exclusion_cells;
    r.res1 = std::abs(k.u.x1 / x.x1 - r.leading);
    r.res2 = std::abs(k.u.x2 / x.x2 + r.leading);
    r.norms = norms(x);
    lemma_region(x, &r.clipped);
    r.logfac = 1.0 + std::log(x.x1 / x.x2);

    // theta vanishing on R(x), judged on the grid
    {
        const Rect R = lemma_region(x);
        const Grid& g = theta_.grid;
        const double h = g.spacing();
        double m = 0.0;
        for (int j1 = 0; j1 < g.nodes(); ++j1) {
            if (overlap(g.node(j1), h, R.a1, R.b1) <= 0.0) continue;
            for (int j2 = 0; j2 < g.nodes(); ++j2)
                if (overlap(g.node(j2), h, R.a2, R.b2) > 0.0) m = std::max(m, std::abs(theta_(j1, j2)));
        }
        r.theta_zero_on_R = m <= 1e-12 * std::max(theta_inf_, 1e-300);
    }

    const LemmaNorms& n = r.norms;
    const double A = n.hess_l2 + n.theta_inf;
    const double L = r.logfac;
    auto ratio = [](double res, double bound) { return bound > 0.0 ? res / bound : (res > 0.0 ? HUGE_VAL : 0.0); };
    r.ratio1 = ratio(r.res1, A);
    r.ratio2 = ratio(r.res2, L * A + std::pow(L, 1.5) * (n.grad_l2_R + n.y2inv_d1_l2_R));
    r.ratio2_hess = ratio(r.res2, L * A + std::pow(L, 1.5) * (n.hess_l2_R + n.y2inv_d1_l2_R));
    const double B = n.grad_inf + n.theta_inf;
    r.ratio1_lip = ratio(r.res1, B);
    r.ratio2_lip = ratio(r.res2, L * B + L * L * n.grad_inf_R);
    return r;
}

std::vector<KeyLemmaReport> KeyLemmaContext::evaluate(const std::vector<Vec2>& probes) const {
    std::vector<KeyLemmaReport> out(probes.size());
    for (const auto& x : probes)
        if (!(x.x2 > 0.0 && x.x2 <= x.x1)) throw ValidationError("key lemma probes need 0 < x2 <= x1");
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < probes.size(); ++i) out[i] = evaluate(probes[i]);
    return out;
}

double leading_term(const ScalarField& theta, Vec2 x) { return KeyLemmaContext(theta).leading_term(x); }
KeyLemmaReport residuals(const ScalarField& theta, Vec2 x) { return KeyLemmaContext(theta).evaluate(x); }
KeyLemmaReport residuals_lipschitz(const ScalarField& theta, Vec2 x) { return KeyLemmaContext(theta).evaluate(x); }

LemmaSummary summarize(const std::vector<KeyLemmaReport>& reports) {
    LemmaSummary s;
    s.probes = static_cast<int>(reports.size());
    for (const auto& r : reports) {
        s.max_ratio1 = std::max(s.max_ratio1, r.ratio1);
        s.max_ratio2 = std::max(s.max_ratio2, r.ratio2);
        s.max_ratio2_hess = std::max(s.max_ratio2_hess, r.ratio2_hess);
        s.max_ratio1_lip = std::max(s.max_ratio1_lip, r.ratio1_lip);
        s.max_ratio2_lip = std::max(s.max_ratio2_lip, r.ratio2_lip);
        if (r.clipped) ++s.clipped;
        if (r.theta_zero_on_R) {
            ++s.off_support;
            const double A = r.norms.hess_l2 + r.norms.theta_inf;
            if (A > 0.0) s.max_ratio2_off = std::max(s.max_ratio2_off, r.res2 / (r.logfac * A));
        }
    }
    return s;
}

nlohmann::json LemmaSummary::to_json() const {
    return {{"probes", probes},
            {"off_support", off_support},
            {"clipped", clipped},
            {"max_ratio1", max_ratio1},
            {"max_ratio2", max_ratio2},
            {"max_ratio2_hess", max_ratio2_hess},
            {"max_ratio1_lip", max_ratio1_lip},
            {"max_ratio2_lip", max_ratio2_lip},
            {"max_ratio2_off", max_ratio2_off}};
}

// ---- probes --------------------------------------------------------------------

bool vanishes_on_region(const std::vector<BubbleSpec>& bubbles, Vec2 x) {
    const Rect R = lemma_region(x);
    for (const auto& b : bubbles) {
        const double d1 = std::max({R.a1 - b.center.x1, 0.0, b.center.x1 - R.b1});
        const double d2 = std::max({R.a2 - b.center.x2, 0.0, b.center.x2 - R.b2});
        if (std::hypot(d1, d2) < b.support_radius) return false;
    }
    return true;
}

std::vector<SampledProbe> sample_probes(const std::vector<BubbleSpec>& bubbles, const Grid& g,
                                        const ProbePolicy& policy, unsigned long long seed) {
    if (bubbles.empty()) throw ValidationError("no bubbles to probe");
    if (policy.count < 1) throw ValidationError("probes.count must be >= 1");
    if (!(policy.off_support_fraction >= 0.0 && policy.off_support_fraction <= 1.0))
        throw ValidationError("probes.off_support_fraction must lie in [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(bubbles.size()) - 1);
    const double floor_dist = policy.min_cells * g.spacing();
    const int off = static_cast<int>(std::lround(policy.count * policy.off_support_fraction));
    std::vector<SampledProbe> out;
    for (int i = 0; i < policy.count; ++i) {
        const bool want_off = i >= policy.count - off;
        bool ok = false;
        for (int attempt = 0; attempt < 100000 && !ok; ++attempt) {
            const int b = pick(rng);
            const auto& bs = bubbles[b];
            const double r = bs.support_radius;
            Vec2 x;
            if (want_off) {
                x = {bs.center.x1 + r * (2.0 * U(rng) - 1.0), bs.center.x2 + 3.0 * r * U(rng)};
                ok = vanishes_on_region(bubbles, x);
            } else {
                x = {bs.center.x1 + r * (2.0 * U(rng) - 1.0), bs.center.x2 + r * (2.0 * U(rng) - 1.0)};
                ok = bs.in_support(x);
            }
            ok = ok && x.x2 <= x.x1 && std::min(x.x1, x.x2) >= floor_dist && x.x1 < 0.5;
            if (ok) out.push_back({x, b, want_off});
        }
        if (!ok) throw ValidationError("probe sampler could not place probe " + std::to_string(i));
    }
    return out;
}

// ---- Hardy ---------------------------------------------------------------------

HardySample sample_on_interval(const std::function<FunctionJet(double)>& f, double l, int panels) {
    if (!(l > 0.0 && l <= 1.0)) throw ValidationError("Hardy interval length must lie in (0,1]");
    using G = boost::math::quadrature::gauss<double, 16>;
    HardySample s;
    s.l = l;
    s.f0 = f(0.0).f;
    const double hp = l / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * hp;
        for (std::size_t i = 0; i < G::abscissa().size(); ++i)
            for (int sign : {-1, 1}) {
                const double x = mid + sign * 0.5 * hp * G::abscissa()[i];
                const FunctionJet j = f(x);
                s.x.push_back(x);
                s.w.push_back(0.5 * hp * G::weights()[i]);
                s.f.push_back(j.f);
                s.df.push_back(j.df);
                s.d2f.push_back(j.d2f);
            }
    }
    return s;
}

HardyResult hardy_check(const HardySample& s) {
    double scale = 0.0;
    for (double v : s.f) scale = std::max(scale, std::abs(v));
    if (std::abs(s.f0) > 1e-12 * std::max(1.0, scale)) throw ValidationError("Hardy check needs f(0) = 0");
    double a = 0, b = 0, c = 0, d = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double x = s.x[i], w = s.w[i];
        a += w * s.f[i] * s.f[i] / (x * x);
        b += w * s.df[i] * s.df[i];
        c += w * s.f[i] * s.f[i] / (x * x * x * x);
        d += w * s.d2f[i] * s.d2f[i];
    }
    HardyResult r;
    r.lhs1 = std::sqrt(a);
    r.rhs1 = 2.0 * std::sqrt(b);
    r.lhs2 = std::sqrt(c);
    r.rhs2 = std::sqrt(2.0 * d);
    r.first_ok = r.lhs1 <= r.rhs1;
    r.second_ok = r.lhs2 * r.lhs2 <= r.rhs2 * r.rhs2;
    return r;
}

FunctionJet SineSeries::operator()(double x) const {
    FunctionJet j{0, 0, 0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double k = (i + 1) * M_PI / l;
        j.f += a[i] * std::sin(k * x);
        j.df += a[i] * k * std::cos(k * x);
        j.d2f -= a[i] * k * k * std::sin(k * x);
    }
    return j;
}

SineSeries random_sine_series(std::mt19937_64& rng, double l, int terms, bool flat_origin) {
    if (terms < 2) throw ValidationError("sine series needs at least two terms");
    std::normal_distribution<double> N(0.0, 1.0);
    SineSeries s;
    s.l = l;
    for (int j = 1; j <= terms; ++j) s.a.push_back(N(rng) / (double(j) * j));
    if (flat_origin) {
        // f'(0) = (pi/l) sum j a_j
        double av = 0.0, vv = 0.0;
        for (int j = 1; j <= terms; ++j) {
            av += s.a[j - 1] * j;
            vv += double(j) * j;
        }
        for (int j = 1; j <= terms; ++j) s.a[j - 1] -= av / vv * j;
    }
    return s;
}

HardySuite run_hardy_suite(int count, const std::vector<double>& lengths, int terms, unsigned long long seed) {
    HardySuite suite;
    std::mt19937_64 rng(seed);
    for (double l : lengths)
        for (int i = 0; i < count; ++i) {
            const SineSeries f1 = random_sine_series(rng, l, terms, false);
            const SineSeries f2 = random_sine_series(rng, l, terms, true);
            const HardyResult r1 = hardy_check(sample_on_interval(f1, l));
            const HardyResult r2 = hardy_check(sample_on_interval(f2, l));
            ++suite.functions;
            if (!r1.first_ok) ++suite.violations1;
            if (!r2.second_ok) ++suite.violations2;
            if (r1.rhs1 > 0) suite.worst1 = std::max(suite.worst1, r1.lhs1 / r1.rhs1);
            if (r2.rhs2 > 0) suite.worst2 = std::max(suite.worst2, (r2.lhs2 * r2.lhs2) / (r2.rhs2 * r2.rhs2));
        }
    return suite;
}

nlohmann::json HardySuite::to_json() const {
    return {{"functions", functions},
            {"violations_first", violations1},
            {"violations_second", violations2},
            {"worst_ratio_first", worst1},
            {"worst_ratio_second", worst2}};
}

}  // namespace sqg
