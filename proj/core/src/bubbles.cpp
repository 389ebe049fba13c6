#include "sqg/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sqg {

namespace {

double mollifier(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

constexpr double kWidth = BumpProfile::support_radius - BumpProfile::plateau_radius;

}  // namespace

double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = mollifier(s), b = mollifier(1.0 - s);
    return a / (a + b);
}

double smooth_step_derivative(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double a = mollifier(s), b = mollifier(1.0 - s);
    const double d = a + b;
    return a * b * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s))) / (d * d);
}

double bump(double r) { return 1.0 - smooth_step((r - BumpProfile::plateau_radius) / kWidth); }

double bump_derivative(double r) { return -smooth_step_derivative((r - BumpProfile::plateau_radius) / kWidth) / kWidth; }

BumpBounds bump_derivative_bounds(int samples) {
    BumpBounds b{0.0, 0.0};
    const double a = BumpProfile::plateau_radius, c = BumpProfile::support_radius;
    const double dr = (c - a) / samples;
    for (int i = 1; i < samples; ++i) {
        const double r = a + i * dr;
        b.max_d1 = std::max(b.max_d1, std::abs(bump_derivative(r)));
        const double d2 = (bump_derivative(r + 0.5 * dr) - bump_derivative(r - 0.5 * dr)) / dr;
        b.max_d2 = std::max(b.max_d2, std::abs(d2));
    }
    return b;
}

void DataSpec::validate() const {
    if (n0 < 1) throw ValidationError("data.n0 must be >= 1");
    if (N < n0) throw ValidationError("data.N must be >= data.n0");
    if (!(alpha > 0.5 && alpha < 0.75)) throw ValidationError("data.alpha must lie in (1/2, 3/4)");
    if (dilation < 0 || dilation > n0) throw ValidationError("data.dilation must lie in [0, data.n0]");
}

double BubbleSpec::value(Vec2 x) const {
    const double r = (x - center).norm();
    if (r >= support_radius) return 0.0;
    return amplitude * bump(r / (8.0 * support_radius));
}

Vec2 BubbleSpec::gradient(Vec2 x) const {
    const Vec2 d = x - center;
    const double r = d.norm();
    if (r >= support_radius || r == 0.0) return {};
    // theta = A phi(4^m r), d/dr = A 4^m phi'
    const double scale = 1.0 / (8.0 * support_radius);  // 4^m
    const double g = amplitude * scale * bump_derivative(r * scale);
    return d * (g / r);
}

std::vector<BubbleSpec> make_bubbles(const DataSpec& spec) {
    spec.validate();
    std::vector<BubbleSpec> out;
    for (int n = spec.n0; n <= spec.N; ++n) {
        BubbleSpec b;
        b.n = n;
        b.level = n - spec.dilation;
        const double q = std::pow(4.0, -(b.level + 1));
        b.center = {q, 0.5 * q};
        b.support_radius = 0.5 * q;
        b.core_radius = q / 8.0;
        b.amplitude = std::pow(double(n), -spec.alpha) * std::pow(4.0, -b.level);
        out.push_back(b);
    }
    return out;
}

double points_across_smallest(const DataSpec& spec, const Grid& g) {
    const auto bs = make_bubbles(spec);
    return 2.0 * bs.back().support_radius / g.spacing();
}

void require_resolved(const DataSpec& spec, const Grid& g, double min_points) {
    const double pts = points_across_smallest(spec, g);
    if (pts < min_points)
        throw ValidationError("resolution " + std::to_string(g.resolution()) + " puts " + std::to_string(pts) +
                              " points across bubble N=" + std::to_string(spec.N) + " (need >= " +
                              std::to_string(min_points) + ")");
}

double data_value(const std::vector<BubbleSpec>& bubbles, Vec2 x) {
    double v = 0.0;
    for (const auto& b : bubbles) v += b.value(x);
    return v;
}

namespace {

void add_bubble(const BubbleSpec& b, ScalarField& f) {
    const Grid& g = f.grid;
    const double h = g.spacing();
    const int K = g.interior();
    const int lo1 = std::max(1, int(std::floor((b.center.x1 - b.support_radius) / h)));
    const int hi1 = std::min(K, int(std::ceil((b.center.x1 + b.support_radius) / h)));
    const int lo2 = std::max(1, int(std::floor((b.center.x2 - b.support_radius) / h)));
    const int hi2 = std::min(K, int(std::ceil((b.center.x2 + b.support_radius) / h)));
    for (int j1 = lo1; j1 <= hi1; ++j1)
        for (int j2 = lo2; j2 <= hi2; ++j2) f(j1, j2) += b.value({g.node(j1), g.node(j2)});
}

}  // namespace

ScalarField assemble_data(const DataSpec& spec, const Grid& g) {
    require_resolved(spec, g);
    ScalarField f(g);
    const auto bs = make_bubbles(spec);
    double margin = 1.0;
    for (const auto& b : bs) {
        add_bubble(b, f);
        margin = std::min({margin, b.center.x1 - b.support_radius, b.center.x2 - b.support_radius});
    }
    f.axis_margin = std::max(0.0, margin);
    return f;
}

ScalarField single_bubble(const BubbleSpec& b, const Grid& g) {
    ScalarField f(g);
    add_bubble(b, f);
    f.axis_margin = std::max(0.0, std::min(b.center.x1, b.center.x2) - b.support_radius);
    return f;
}

std::vector<double> bubble_h2_increments(const DataSpec& spec, const Grid& g) {
    std::vector<double> out;
    for (const auto& b : make_bubbles(spec)) {
        const double h2 = sobolev_norm(forward_transform(single_bubble(b, g)), 2.0);
        out.push_back(h2 * h2);
    }
    return out;
}

nlohmann::json OrderingReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : entries)
        rows.push_back({{"n", e.n},
                        {"nominal_ratio", e.nominal_ratio},
                        {"core_ratio", e.core_ratio},
                        {"nominal_gap", e.nominal_gap},
                        {"core_gap", e.core_gap},
                        {"nominal_max_slope", e.nominal_max_slope},
                        {"core_max_slope", e.core_max_slope},
                        {"nominal_diag_excess", e.nominal_diag_excess},
                        {"core_diag_excess", e.core_diag_excess}});
    return {{"bubbles", rows},
            {"nominal_ok", nominal_ok},
            {"core_ok", core_ok},
            {"diagonal_ok", diagonal_ok},
            {"thresholds", {{"ratio", 1.5}, {"gap", 2.0}}}};
}

OrderingReport verify_initial_ordering(const DataSpec& spec) {
    const auto bs = make_bubbles(spec);
    OrderingReport rep;
    rep.nominal_ok = rep.core_ok = rep.diagonal_ok = true;
    auto slope = [](const BubbleSpec& b, double r) {
        const double beta = std::atan2(b.center.x2, b.center.x1);
        return std::tan(beta + std::asin(r / b.center.norm()));
    };
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const auto& b = bs[i];
        OrderingEntry e{};
        e.n = b.n;
        const double c = b.center.x1;
        e.nominal_ratio = (c + b.support_radius) / (c - b.support_radius);
        e.core_ratio = (c + b.core_radius) / (c - b.core_radius);
        if (i + 1 < bs.size()) {
            const auto& nb = bs[i + 1];
            e.nominal_gap = (c - b.support_radius) / (nb.center.x1 + nb.support_radius);
            e.core_gap = (c - b.core_radius) / (nb.center.x1 + nb.core_radius);
        }
        e.nominal_max_slope = slope(b, b.support_radius);
        e.core_max_slope = slope(b, b.core_radius);
        // max over the disk of 2 x2 - x1 is (2 c2 - c1) + r sqrt(5)
        e.nominal_diag_excess = 2.0 * b.center.x2 - c + b.support_radius * std::sqrt(5.0);
        e.core_diag_excess = 2.0 * b.center.x2 - c + b.core_radius * std::sqrt(5.0);
        const bool last = i + 1 == bs.size();
        if (!(e.nominal_ratio < 1.5) || (!last && !(e.nominal_gap > 2.0))) rep.nominal_ok = false;
        if (!(e.core_ratio < 1.5) || (!last && !(e.core_gap > 2.0))) rep.core_ok = false;
        if (e.core_diag_excess > 0.0) rep.diagonal_ok = false;
        rep.entries.push_back(e);
    }
    if (!rep.core_ok) throw ValidationError("bubble ordering ratios fail on the plateau disks");
    return rep;
}

}  // namespace sqg
