#include "sqg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sqg {

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly[i], b = poly[j];
        if ((a.x2 > p.x2) != (b.x2 > p.x2) && p.x1 < (b.x1 - a.x1) * (p.x2 - a.x2) / (b.x2 - a.x2) + a.x1) in = !in;
    }
    return in;
}

double distance_to_polygon(const std::vector<Vec2>& poly, Vec2 p) {
    double d = HUGE_VAL;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % n];
        const Vec2 ab = b - a, ap = p - a;
        const double L2 = ab.x1 * ab.x1 + ab.x2 * ab.x2;
        double t = L2 > 0 ? (ap.x1 * ab.x1 + ap.x2 * ab.x2) / L2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        d = std::min(d, (p - (a + ab * t)).norm());
    }
    return d;
}

H2Partition per_bubble_h2(const Spectrum& theta, const std::vector<BubbleWindow>& windows) {
    const Grid& g = theta.grid;
    const ScalarField lap = [&] {
        Spectrum a = derivative(theta, 2, 0);
        const Spectrum b = derivative(theta, 0, 2);
        for (std::size_t i = 0; i < a.coeff.size(); ++i) a.coeff[i] += b.coeff[i];
        return inverse_transform(a);
    }();
    const double h = g.spacing();
    const int last = g.nodes() - 1;
    // Quarter-node quadrature, four quarters; endpoints carry half weight.
    auto w = [&](int j) { return (j == 0 || j == last) ? 0.5 : 1.0; };

    H2Partition out;
    std::vector<int> owner(static_cast<std::size_t>(g.nodes()) * g.nodes(), -1);
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const auto& win = windows[k];
        if (win.ring.size() < 3) throw ValidationError("bubble window needs a polygon");
        double lo1 = HUGE_VAL, hi1 = -HUGE_VAL, lo2 = HUGE_VAL, hi2 = -HUGE_VAL;
        for (const auto& p : win.ring) {
            lo1 = std::min(lo1, p.x1);
            hi1 = std::max(hi1, p.x1);
            lo2 = std::min(lo2, p.x2);
            hi2 = std::max(hi2, p.x2);
        }
        const int a1 = std::max(0, int(std::floor((lo1 - win.margin) / h)));
        const int b1 = std::min(last, int(std::ceil((hi1 + win.margin) / h)));
        const int a2 = std::max(0, int(std::floor((lo2 - win.margin) / h)));
        const int b2 = std::min(last, int(std::ceil((hi2 + win.margin) / h)));
        double acc = 0.0;
        for (int j1 = a1; j1 <= b1; ++j1)
            for (int j2 = a2; j2 <= b2; ++j2) {
                const Vec2 p{g.node(j1), g.node(j2)};
                if (!point_in_polygon(win.ring, p) && distance_to_polygon(win.ring, p) > win.margin) continue;
                int& o = owner[static_cast<std::size_t>(j1) * g.nodes() + j2];
                if (o >= 0 && o != int(k))
                    throw ValidationError("windows of bubbles " + std::to_string(windows[o].n) + " and " +
                                          std::to_string(win.n) + " overlap");
                o = int(k);
                const double v = lap(j1, j2);
                acc += w(j1) * w(j2) * v * v;
            }
        out.n.push_back(win.n);
        out.contribution.push_back(4.0 * h * h * acc);
    }
    double tot = 0.0;
    for (int j1 = 0; j1 <= last; ++j1)
        for (int j2 = 0; j2 <= last; ++j2) tot += w(j1) * w(j2) * lap(j1, j2) * lap(j1, j2);
    out.total = 4.0 * h * h * tot;
    double s = 0.0;
    for (double c : out.contribution) s += c;
    out.captured = out.total > 0.0 ? s / out.total : 0.0;
    return out;
}

LogLipschitz log_lipschitz_modulus(const std::function<Vec2(Vec2)>& u, double lo, double hi, int pairs,
                                   double min_sep, double max_sep, unsigned long long seed) {
    if (!(hi > lo) || !(max_sep >= min_sep) || !(min_sep > 0.0)) throw ValidationError("bad log-Lipschitz sampling box");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    LogLipschitz r;
    for (int i = 0; i < pairs; ++i) {
        const double d = min_sep * std::pow(max_sep / min_sep, U(rng));
        const double a = 2.0 * M_PI * U(rng);
        const Vec2 x{lo + (hi - lo) * U(rng), lo + (hi - lo) * U(rng)};
        Vec2 y = x + Vec2{std::cos(a), std::sin(a)} * d;
        y.x1 = std::clamp(y.x1, lo, hi);
        y.x2 = std::clamp(y.x2, lo, hi);
        const double s = (y - x).norm();
        if (s <= 0.0) continue;
        ++r.pairs;
        const double m = (u(x) - u(y)).norm() / (s * std::log(10.0 + 1.0 / s));
        if (m > r.modulus) {
            r.modulus = m;
            r.worst_separation = s;
        }
    }
    return r;
}

InflationSummary inflation_summary(const std::vector<DiagnosticsRecord>& records, int N, int n0, double alpha,
                                   std::optional<double> c0_emp, double inflation_factor,
                                   const std::string& stop_reason) {
    InflationSummary s;
    s.N = N;
    s.n0 = n0;
    s.alpha = alpha;
    s.c0_emp = c0_emp;
    s.inflation_factor = inflation_factor;
    s.stop_reason = stop_reason;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (!(records[i].t > records[i - 1].t)) throw ValidationError("diagnostics series is not time-ordered");
    if (c0_emp) {
        const double M = 0.5 * *c0_emp * std::log(double(N));
        s.M_N = M;
        s.ell_N = M * M * M;
        if (M > 1.0) s.T_N = 1.0 / (M * std::log(M));
    }
    if (records.empty()) return s;
    s.hdot2_initial = records.front().hdot2;
    for (const auto& r : records) s.hdot2_max = std::max(s.hdot2_max, r.hdot2);
    s.growth_factor = s.hdot2_initial > 0.0 ? s.hdot2_max / s.hdot2_initial : 0.0;
    s.inflated = s.hdot2_initial > 0.0 && s.growth_factor >= inflation_factor;
    if (records.size() >= 2) {
        double mt = 0, mh = 0;
        for (const auto& r : records) {
            mt += r.t;
            mh += r.hdot2;
        }
        mt /= records.size();
        mh /= records.size();
        double sxy = 0, sxx = 0;
        int up = 0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            sxy += (records[i].t - mt) * (records[i].hdot2 - mh);
            sxx += (records[i].t - mt) * (records[i].t - mt);
            if (i > 0 && records[i].hdot2 > records[i - 1].hdot2) ++up;
        }
        s.trend_slope = sxx > 0 ? sxy / sxx : 0.0;
        s.increasing_fraction = double(up) / (records.size() - 1);
    }
    return s;
}

nlohmann::json InflationSummary::to_json() const {
    auto o = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"N", N},
            {"n0", n0},
            {"alpha", alpha},
            {"c0_emp", o(c0_emp)},
            {"M_N", o(M_N)},
            {"T_N", o(T_N)},
            {"T_N_gate", M_N && *M_N > 1.0 ? "M_N > 1" : "M_N <= 1, T_N not emitted"},
            {"ell_N", o(ell_N)},
            {"hdot2_initial", hdot2_initial},
            {"hdot2_max", hdot2_max},
            {"growth_factor", growth_factor},
            {"inflation_factor", inflation_factor},
            {"inflated", inflated},
            {"trend_slope", trend_slope},
            {"increasing_fraction", increasing_fraction},
            {"stop_reason", stop_reason}};
}

}  // namespace sqg
