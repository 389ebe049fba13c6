#include "sqg/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sqg {

const char* to_string(MarkerKind k) {
    switch (k) {
        case MarkerKind::Core: return "core";
        case MarkerKind::Top: return "top";
        case MarkerKind::Center: return "center";
        case MarkerKind::Support: return "support";
        case MarkerKind::Interior: return "interior";
    }
    return "?";
}

MarkerSet seed_markers(const std::vector<BubbleSpec>& bubbles, const MarkerSeeding& seeding) {
    if (seeding.ring < 8 || seeding.ring % 4 != 0) throw ValidationError("markers.ring must be a multiple of 4, >= 8");
    if (seeding.interior < 4) throw ValidationError("markers.interior must be >= 4");
    if (!(seeding.support_fraction > 0.0 && seeding.support_fraction < 1.0))
        throw ValidationError("markers.support_fraction must lie in (0,1)");
    MarkerSet set;
    set.bubbles = bubbles;
    int label = 0;
    auto add = [&](int b, MarkerKind kind, Vec2 x, double w) {
        Marker m;
        m.bubble = b;
        m.kind = kind;
        m.label = label++;
        m.x0 = m.pos = x;
        m.theta0 = bubbles[b].value(x);
        m.weight = w;
        set.markers.push_back(m);
    };
    for (int b = 0; b < static_cast<int>(bubbles.size()); ++b) {
        const auto& bs = bubbles[b];
        const int top = seeding.ring / 4;
        for (int i = 0; i < seeding.ring; ++i) {
            const double a = 2.0 * M_PI * i / seeding.ring;
            const Vec2 x = bs.center + Vec2{std::cos(a), std::sin(a)} * bs.core_radius;
            add(b, i == top ? MarkerKind::Top : MarkerKind::Core, i == top ? bs.center + Vec2{0, bs.core_radius} : x,
                0.0);
        }
        add(b, MarkerKind::Center, bs.center, 0.0);
        for (int i = 0; i < seeding.ring; ++i) {
            const double a = 2.0 * M_PI * i / seeding.ring;
            add(b, MarkerKind::Support,
                bs.center + Vec2{std::cos(a), std::sin(a)} * (seeding.support_fraction * bs.support_radius), 0.0);
        }
        const int q = seeding.interior;
        const double cell = 2.0 * bs.support_radius / q;
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) {
                const Vec2 x = bs.center + Vec2{(i + 0.5) * cell - bs.support_radius, (j + 0.5) * cell - bs.support_radius};
                if (bs.in_support(x)) add(b, MarkerKind::Interior, x, cell * cell);
            }
    }
    return set;
}

// ---- interpolation -----------------------------------------------------------

GridVelocity::GridVelocity(const Spectrum& theta, const MultiplierSpec& mult)
    : u1_(theta.grid), u2_(theta.grid) {
    auto [s1, s2] = velocity_from_scalar(theta, mult);
    u1_ = inverse_transform(s1);
    u2_ = inverse_transform(s2);
}

Vec2 GridVelocity::eval(Vec2 x, int npts) const { return {lagrange_interpolate(u1_, x, npts), lagrange_interpolate(u2_, x, npts)}; }

double GridVelocity::error(Vec2 x) const { return (eval(x, 8) - eval(x, 6)).norm(); }

TrigVelocity::TrigVelocity(const Spectrum& theta, const MultiplierSpec& mult)
    : u1_(velocity_from_scalar(theta, mult).first),
      u2_(velocity_from_scalar(theta, mult).second),
      e1_(u1_, theta.grid.interior() + 1),
      e2_(u2_, theta.grid.interior() + 1) {}

Vec2 TrigVelocity::velocity(double, Vec2 x) const { return {e1_(x), e2_(x)}; }

void SnapshotWindow::push(double t, std::shared_ptr<const GridVelocity> v) {
    if (!levels_.empty() && !(t > levels_.back().first)) throw ValidationError("snapshot times must increase");
    levels_.emplace_back(t, std::move(v));
}

void SnapshotWindow::weights(double t, double* w) const {
    const std::size_t n = levels_.size();
    for (std::size_t a = 0; a < n; ++a) {
        double num = 1.0, den = 1.0;
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a) continue;
            num *= t - levels_[b].first;
            den *= levels_[a].first - levels_[b].first;
        }
        w[a] = num / den;
    }
}

Vec2 SnapshotWindow::velocity(double t, Vec2 x) const {
    if (levels_.empty()) throw NumericalError("velocity requested from an empty snapshot window");
    double w[4];
    weights(t, w);
    Vec2 u;
    for (std::size_t a = 0; a < levels_.size(); ++a) u = u + w[a] * (*levels_[a].second)(x);
    return u;
}

double SnapshotWindow::interpolation_error(double t, Vec2 x) const {
    double w[4];
    weights(t, w);
    double e = 0.0;
    for (std::size_t a = 0; a < levels_.size(); ++a) e += std::abs(w[a]) * levels_[a].second->error(x);
    return e;
}

double trace(MarkerSet& set, const VelocitySource& src, double t0, double t1, int substeps) {
    if (substeps < 1) throw ValidationError("substeps must be >= 1");
    const double dt = (t1 - t0) / substeps;
    const long long n = static_cast<long long>(set.markers.size());
    double err = 0.0;
    bool crossed = false;
#pragma omp parallel for schedule(static) reduction(max : err) reduction(|| : crossed)
    for (long long i = 0; i < n; ++i) {
        Vec2 x = set.markers[i].pos;
        for (int s = 0; s < substeps; ++s) {
            const double t = t0 + s * dt;
            const Vec2 k1 = src.velocity(t, x);
            const Vec2 k2 = src.velocity(t + 0.5 * dt, x + k1 * (0.5 * dt));
            const Vec2 k3 = src.velocity(t + 0.5 * dt, x + k2 * (0.5 * dt));
            const Vec2 k4 = src.velocity(t + dt, x + k3 * dt);
            x = x + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0);
        }
        if (!(x.x1 > 0.0 && x.x2 > 0.0)) crossed = true;
        set.markers[i].pos = x;
        err = std::max(err, src.interpolation_error(t1, x));
    }
    if (crossed) throw ClaimViolation("marker left the open first quadrant near t = " + std::to_string(t1));
    return err;
}

std::vector<MarkerFrame> trace_series(MarkerSet set, const VelocitySource& src, const std::vector<double>& t_grid,
                                      int substeps) {
    std::vector<MarkerFrame> out;
    auto snap = [&](double t) {
        MarkerFrame f;
        f.t = t;
        for (const auto& m : set.markers) f.pos.push_back(m.pos);
        out.push_back(std::move(f));
    };
    if (t_grid.empty()) return out;
    snap(t_grid[0]);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        trace(set, src, t_grid[i - 1], t_grid[i], substeps);
        snap(t_grid[i]);
    }
    return out;
}

// ---- statistics ----------------------------------------------------------------

double interaction_integral(const MarkerSet& set, int b, int min_markers) {
    double acc = 0.0;
    int count = 0;
    for (const auto& m : set.markers) {
        if (m.bubble != b || m.kind != MarkerKind::Interior) continue;
        const Vec2 p = m.pos;
        const double r = p.norm();
        acc += m.weight * m.theta0 * p.x1 * p.x2 / std::pow(r, 5);
        ++count;
    }
    if (count < min_markers)
        throw ValidationError("bubble " + std::to_string(b) + " has " + std::to_string(count) +
                              " interior markers, too few for the interaction quadrature");
    return acc;
}

std::vector<BubbleStats> bubble_stats(const MarkerSet& set) {
    const int nb = static_cast<int>(set.bubbles.size());
    std::vector<BubbleStats> out(nb);
    std::vector<std::vector<Vec2>> ring(nb);
    for (int b = 0; b < nb; ++b) {
        out[b].n = set.bubbles[b].n;
        out[b].sup1 = out[b].sup2 = out[b].sup1_support = -1e300;
        out[b].inf1 = out[b].inf1_support = 1e300;
    }
    for (const auto& m : set.markers) {
        auto& s = out[m.bubble];
        switch (m.kind) {
            case MarkerKind::Core:
            case MarkerKind::Top:
                ring[m.bubble].push_back(m.pos);
                [[fallthrough]];
            case MarkerKind::Center:
                s.sup1 = std::max(s.sup1, m.pos.x1);
                s.inf1 = std::min(s.inf1, m.pos.x1);
                s.sup2 = std::max(s.sup2, m.pos.x2);
                break;
            case MarkerKind::Support: {
                const auto& bs = set.bubbles[m.bubble];
                s.sup1_support = std::max(s.sup1_support, m.pos.x1);
                s.inf1_support = std::min(s.inf1_support, m.pos.x1);
                s.exit_radius = std::max(s.exit_radius, (m.pos - bs.center).norm() / (2.0 * bs.support_radius));
                break;
            }
            case MarkerKind::Interior: break;
        }
    }
    for (int b = 0; b < nb; ++b) {
        double a = 0.0;
        const auto& r = ring[b];
        for (std::size_t i = 0; i < r.size(); ++i) {
            const Vec2 p = r[i], q = r[(i + 1) % r.size()];
            a += p.x1 * q.x2 - q.x1 * p.x2;
        }
        out[b].core_area = 0.5 * std::abs(a);
        out[b].interaction = interaction_integral(set, b, 1);
    }
    return out;
}

// ---- streaming tracer ----------------------------------------------------------

StreamingTracer::StreamingTracer(MarkerSet markers, MultiplierSpec mult, int substeps, int transport_check_stride)
    : set_(std::move(markers)), mult_(mult), substeps_(substeps), check_stride_(transport_check_stride) {
    if (substeps_ < 1) throw ValidationError("tracer substeps must be >= 1");
    if (check_stride_ < 1) throw ValidationError("transport check stride must be >= 1");
    series_.initial = set_;
    series_.transport_dev.assign(set_.markers.size(), 0.0);
}

void StreamingTracer::sample(double t, const Spectrum& theta, double err) {
    TrackSample s;
    s.t = t;
    s.stats = bubble_stats(set_);
    s.pos.reserve(set_.markers.size());
    for (const auto& m : set_.markers) s.pos.push_back(m.pos);
    s.interp_error = err;
    const long long idx = static_cast<long long>(series_.samples.size());
    series_.samples.push_back(std::move(s));

    if (idx % check_stride_ != 0) return;
    // theta(t, Phi(t, x0)) against the represented initial value at x0.
    const int mmax = theta.grid.max_retained();
    const long long n = static_cast<long long>(set_.markers.size());
    if (idx == 0) reference_.assign(set_.markers.size(), 0.0);
#pragma omp parallel
    {
        PointEvaluator ev(theta, mmax);
#pragma omp for schedule(static)
        for (long long i = 0; i < n; ++i) {
            const auto& m = set_.markers[i];
            if (m.kind != MarkerKind::Interior) continue;
            const double v = ev(m.pos);
            if (idx == 0) reference_[i] = v;
            const double dev = std::abs(v - reference_[i]) / set_.bubbles[m.bubble].amplitude;
            series_.transport_dev[i] = std::max(series_.transport_dev[i], dev);
        }
    }
    ++series_.transport_checks;
}

void StreamingTracer::push(double t, const Spectrum& theta) {
    if (finished_) throw ValidationError("tracer already finished");
    Level lv;
    lv.index = count_++;
    lv.t = t;
    lv.vel = std::make_shared<const GridVelocity>(theta, mult_);
    lv.theta = std::make_shared<const Spectrum>(theta);
    if (!levels_.empty() && !(t > levels_.back().t)) throw ValidationError("snapshot times must increase");
    levels_.push_back(lv);
    if (lv.index == 0) {
        sample(t, theta, 0.0);
        return;
    }
    // Interval k uses levels max(0, k-1) .. +3 once they exist.
    while (true) {
        const long long k = next_interval_;
        const long long s = std::max(0LL, k - 1);
        if (s + 3 > lv.index) break;
        advance(k, s);
    }
}

void StreamingTracer::finish() {
    if (finished_) return;
    const long long last = count_ - 1;
    while (next_interval_ < last) {
        const long long k = next_interval_;
        const long long s = std::max(0LL, std::min(k - 1, last - 3));
        advance(k, s);
    }
    finished_ = true;
    levels_.clear();
}

void StreamingTracer::advance(long long k, long long s) {
    while (!levels_.empty() && levels_.front().index < s) levels_.pop_front();
    SnapshotWindow w;
    const Level* a = nullptr;
    const Level* b = nullptr;
    for (const auto& lv : levels_) {
        if (lv.index >= s && lv.index <= s + 3) w.push(lv.t, lv.vel);
        if (lv.index == k) a = &lv;
        if (lv.index == k + 1) b = &lv;
    }
    if (!a || !b) throw NumericalError("tracer window lost a level");
    const double err = trace(set_, w, a->t, b->t, substeps_);
    sample(b->t, *b->theta, err);
    ++next_interval_;
}

// ---- claims --------------------------------------------------------------------

std::vector<std::optional<double>> claim1_check(const TrackSeries& s) {
    const std::size_t nb = s.initial.bubbles.size();
    std::vector<std::optional<double>> out(nb);
    for (const auto& smp : s.samples) {
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& st = smp.stats[b];
            bool ok = st.sup1 <= 2.0 * st.inf1;
            if (b + 1 < nb) ok = ok && 2.0 * smp.stats[b + 1].sup1 <= st.inf1;
            if (b > 0) ok = ok && 2.0 * st.sup1 <= smp.stats[b - 1].inf1;
            if (!ok && !out[b]) out[b] = smp.t;
        }
    }
    return out;
}

std::vector<std::optional<double>> almost_invariance_check(const TrackSeries& s, double threshold) {
    const std::size_t nb = s.initial.bubbles.size();
    std::vector<std::optional<double>> out(nb);
    for (const auto& smp : s.samples)
        for (std::size_t b = 0; b < nb; ++b)
            if (!out[b] && smp.stats[b].exit_radius > threshold) out[b] = smp.t;
    return out;
}

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    SlopeFit f;
    f.points = static_cast<int>(x.size());
    if (x.size() < 2) return f;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= x.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

namespace {

double sup2_at(const TrackSeries& s, int b, double T) {
    const auto& smp = s.samples;
    if (T <= smp.front().t) return smp.front().stats[b].sup2;
    for (std::size_t i = 1; i < smp.size(); ++i)
        if (smp[i].t >= T) {
            const double w = (T - smp[i - 1].t) / (smp[i].t - smp[i - 1].t);
            return (1 - w) * smp[i - 1].stats[b].sup2 + w * smp[i].stats[b].sup2;
        }
    throw ValidationError("growth ratio time " + std::to_string(T) + " lies beyond the simulated horizon");
}

}  // namespace

double growth_ratio(const TrackSeries& s, int b, double T) {
    return s.samples.front().stats[b].sup2 / sup2_at(s, b, T);
}

std::vector<std::pair<int, int>> sample_pairs(const MarkerSet& set, int count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    const int n = static_cast<int>(set.markers.size());
    std::vector<std::pair<int, int>> out;
    if (n < 2) return out;
    std::uniform_int_distribution<int> pick(0, n - 1);
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard++ < 100 * count) {
        const int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        const double d = (set.markers[a].x0 - set.markers[b].x0).norm();
        if (d > 0.0 && d < 0.5) out.emplace_back(a, b);
    }
    return out;
}

PairEnvelope flow_continuity_check(const TrackSeries& s, const std::vector<std::pair<int, int>>& pairs, double M) {
    PairEnvelope r;
    r.pairs = static_cast<int>(pairs.size());
    for (const auto& [a, b] : pairs) {
        const double d0 = (s.initial.markers[a].x0 - s.initial.markers[b].x0).norm();
        bool bad = false;
        for (const auto& smp : s.samples) {
            if (smp.t <= 0.0) continue;
            const double dt = (smp.pos[a] - smp.pos[b]).norm();
            if (!(dt < 1.0)) {
                bad = true;
                continue;
            }
            ++r.samples;
            const double c = std::abs(std::log(std::log(dt) / std::log(d0))) / (M * smp.t);
            r.c_emp = std::max(r.c_emp, c);
        }
        if (bad) ++r.invalid;
    }
    return r;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json analyze_claims(const TrackSeries& s, const DataSpec& data, double M, const ClaimsConfig& cfg) {
    using nlohmann::json;
    if (s.samples.empty()) throw ValidationError("no tracked samples");
    const auto& bubbles = s.initial.bubbles;
    const int nb = static_cast<int>(bubbles.size());
    const double horizon = s.samples.back().t;
    json out;
    out["M"] = M;
    out["horizon"] = horizon;
    out["samples"] = s.samples.size();
    double max_err = 0.0;
    for (const auto& smp : s.samples) max_err = std::max(max_err, smp.interp_error);
    out["max_interpolation_error"] = max_err;

    // Claim I
    {
        const auto first = claim1_check(s);
        json per = json::array();
        bool holds_at_zero = true;
        double tmin = horizon;
        bool any = false;
        for (int b = 0; b < nb; ++b) {
            per.push_back({{"n", bubbles[b].n}, {"first_violation", opt(first[b])}});
            if (first[b]) {
                any = true;
                tmin = std::min(tmin, *first[b]);
                if (*first[b] <= 0.0) holds_at_zero = false;
            }
        }
        out["claim1"] = {{"per_bubble", per},
                         {"holds_at_t0", holds_at_zero},
                         {"violated", any},
                         {"window", tmin},
                         {"c_emp", tmin * (1.0 + M)},
                         {"c_emp_is_lower_bound", !any}};
    }

    // Claim III: exit times and their scaling in n
    std::optional<double> t_ell;
    const int ell = data.n0 + cfg.ell_offset;
    {
        const auto exits = almost_invariance_check(s);
        json per = json::array();
        std::vector<double> ns, ts;
        bool decreasing = true;
        double prev = -1.0;
        for (int b = 0; b < nb; ++b) {
            per.push_back({{"n", bubbles[b].n}, {"exit_time", opt(exits[b])}});
            if (exits[b]) {
                ns.push_back(bubbles[b].n);
                ts.push_back(*exits[b]);
                if (prev >= 0.0 && !(*exits[b] < prev)) decreasing = false;
                prev = *exits[b];
            }
            if (bubbles[b].n == ell) t_ell = exits[b];
        }
        const SlopeFit f = loglog_fit(ns, ts);
        out["claim3"] = {{"per_bubble", per},
                         {"exited", ns.size()},
                         {"decreasing_in_n", decreasing},
                         {"slope", ns.size() >= 2 ? json(f.slope) : json(nullptr)},
                         {"expected_slope", data.alpha - 1.0}};
    }

    // Squeezing, growth ratio, c0
    {
        json sq = json::array();
        for (int b = std::max(0, nb - 2); b < nb; ++b) {
            bool strict = true;
            for (std::size_t i = 1; i < s.samples.size(); ++i)
                if (!(s.samples[i].stats[b].sup2 < s.samples[i - 1].stats[b].sup2)) strict = false;
            sq.push_back({{"n", bubbles[b].n},
                          {"strictly_decreasing", strict},
                          {"initial", s.samples.front().stats[b].sup2},
                          {"final", s.samples.back().stats[b].sup2}});
        }
        out["squeezing"] = sq;

        const double T = t_ell ? *t_ell : horizon;
        json gr = json::array();
        std::vector<double> ratio_n, ratio;
        bool nondecreasing = true;
        double prev = 0.0;
        for (int b = 0; b < nb; ++b) {
            if (bubbles[b].n < ell) continue;
            const double r = growth_ratio(s, b, T);
            gr.push_back({{"n", bubbles[b].n}, {"ratio", r}});
            ratio_n.push_back(double(bubbles[b].n) / ell);
            ratio.push_back(r);
            if (!gr.empty() && gr.size() > 1 && r < prev) nondecreasing = false;
            prev = r;
        }
        const SlopeFit f = loglog_fit(ratio_n, ratio);
        out["growth"] = {{"ell", ell},
                         {"T_ell", T},
                         {"T_ell_source", t_ell ? "exit_time" : "horizon"},
                         {"ratios", gr},
                         {"nondecreasing_in_n", nondecreasing},
                         {"c0_emp", ratio.size() >= 2 ? json(f.slope) : json(nullptr)}};
    }

    // Claim II: log sup2(t) - log sup2(0) + 10 sum_{j<n} int_0^t I_j <= C M t
    {
        const std::size_t ns = s.samples.size();
        std::vector<std::vector<double>> cum(nb, std::vector<double>(ns, 0.0));
        for (int b = 0; b < nb; ++b)
            for (std::size_t i = 1; i < ns; ++i)
                cum[b][i] = cum[b][i - 1] + 0.5 * (s.samples[i].t - s.samples[i - 1].t) *
                                                (s.samples[i].stats[b].interaction +
                                                 s.samples[i - 1].stats[b].interaction);
        json per = json::array();
        double cmax = 0.0;
        for (int b = 1; b < nb; ++b) {
            double c = -1e300;
            for (std::size_t i = 1; i < ns; ++i) {
                double sum = 0.0;
                for (int j = 0; j < b; ++j) sum += cum[j][i];
                const double lhs = std::log(s.samples[i].stats[b].sup2 / s.samples[0].stats[b].sup2) + 10.0 * sum;
                c = std::max(c, lhs / (M * s.samples[i].t));
            }
            double sum_end = 0.0;
            for (int j = 0; j < b; ++j) sum_end += cum[j][ns - 1];
            const double drop = -std::log(s.samples[ns - 1].stats[b].sup2 / s.samples[0].stats[b].sup2);
            per.push_back({{"n", bubbles[b].n},
                           {"C_emp", c},
                           {"measured_coefficient", sum_end > 0 ? json(drop / sum_end) : json(nullptr)}});
            cmax = std::max(cmax, c);
        }
        out["claim2"] = {{"per_bubble", per}, {"C_emp", cmax}};
    }

    // Interaction integrals
    {
        json per = json::array();
        bool nonneg = true;
        for (int b = 0; b < nb; ++b) {
            double lo = 1e300;
            for (const auto& smp : s.samples) {
                lo = std::min(lo, smp.stats[b].interaction);
                if (smp.stats[b].interaction < 0) nonneg = false;
            }
            const double i0 = s.samples.front().stats[b].interaction;
            per.push_back({{"n", bubbles[b].n},
                           {"I0", i0},
                           {"I0_times_n_alpha", i0 * std::pow(double(bubbles[b].n), data.alpha)},
                           {"a_emp", lo / i0}});
        }
        out["interaction"] = {{"per_bubble", per}, {"nonnegative", nonneg}};
    }

    // Ordering chain on support rings
    {
        std::optional<double> first;
        for (const auto& smp : s.samples) {
            for (int b = 0; b + 1 < nb; ++b)
                if (!(smp.stats[b + 1].sup1_support < smp.stats[b].inf1_support) && !first) first = smp.t;
        }
        out["ordering_chain"] = {{"holds", !first}, {"first_violation", opt(first)}};
    }

    // Core-ring area conservation
    {
        json per = json::array();
        double worst = 0.0;
        for (int b = 0; b < nb; ++b) {
            const double a0 = s.samples.front().stats[b].core_area;
            double d = 0.0;
            for (const auto& smp : s.samples) d = std::max(d, std::abs(smp.stats[b].core_area - a0) / a0);
            per.push_back({{"n", bubbles[b].n}, {"max_relative_drift", d}});
            worst = std::max(worst, d);
        }
        out["area"] = {{"per_bubble", per}, {"max_relative_drift", worst}, {"within_2pct", worst <= 0.02}};
    }

    // Transport representation
    {
        int total = 0, good = 0;
        double worst = 0.0;
        std::vector<int> bt(nb, 0), bg(nb, 0);
        std::vector<double> bw(nb, 0.0);
        for (std::size_t i = 0; i < s.initial.markers.size(); ++i) {
            const auto& m = s.initial.markers[i];
            if (m.kind != MarkerKind::Interior) continue;
            ++total;
            ++bt[m.bubble];
            if (s.transport_dev[i] <= cfg.transport_tolerance) {
                ++good;
                ++bg[m.bubble];
            }
            worst = std::max(worst, s.transport_dev[i]);
            bw[m.bubble] = std::max(bw[m.bubble], s.transport_dev[i]);
        }
        json per = json::array();
        for (int b = 0; b < nb; ++b)
            per.push_back({{"n", bubbles[b].n},
                           {"fraction", bt[b] ? double(bg[b]) / bt[b] : 0.0},
                           {"worst", bw[b]}});
        const double frac = total ? double(good) / total : 0.0;
        out["transport"] = {{"per_bubble", per},
                            {"interior_markers", total},
                            {"within_tolerance", good},
                            {"fraction", frac},
                            {"tolerance", cfg.transport_tolerance},
                            {"worst", worst},
                            {"checks", s.transport_checks}};
    }

    // Flow-map continuity
    {
        const auto pairs = sample_pairs(s.initial, cfg.pairs, cfg.seed);
        const PairEnvelope e = flow_continuity_check(s, pairs, M);
        out["flow_continuity"] = {
            {"pairs", e.pairs}, {"samples", e.samples}, {"invalid", e.invalid}, {"C_emp", e.c_emp}};
    }
    return out;
}

}  // namespace sqg
