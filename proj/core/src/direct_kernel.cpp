#include "sqg/direct_kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "sqg/bubbles.hpp"

namespace sqg {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 24>;

// Partition weight of the far field; zero at the singular point.
double far_weight(double r, double rho) { return smooth_step(r / rho); }

// Degree-7 Lagrange weights on unit-spaced nodes 0..7 at offset t.
void lagrange8(double t, double* w) {
    for (int i = 0; i < 8; ++i) {
        double v = 1.0;
        for (int j = 0; j < 8; ++j)
            if (j != i) v *= (t - j) / double(i - j);
        w[i] = v;
    }
}

}  // namespace

double tail_bound(double theta_inf, double x1, int image_radius) {
    if (image_radius < 1) throw ValidationError("image_radius must be >= 1");
    return kTailConstant * std::abs(x1) * theta_inf * 4.0 / (double(image_radius) * image_radius);
}

DirectKernel::DirectKernel(const ScalarField& theta, int radial_nodes, int angular_nodes)
    : theta_(theta), spec_(forward_transform(theta)), nr_(radial_nodes), nphi_(angular_nodes) {
    if (!theta.odd_odd()) throw ValidationError("direct kernel needs an odd-odd field");
    if (radial_nodes != 24) throw ValidationError("radial quadrature is fixed at 24 Gauss nodes");
    const Grid& g = theta.grid;
    const int K = g.interior();
    for (int j1 = 1; j1 <= K; ++j1)
        for (int j2 = 1; j2 <= K; ++j2) {
            const double v = theta(j1, j2);
            theta_inf_ = std::max(theta_inf_, std::abs(v));
            if (v == 0.0) continue;
            y1_.push_back(g.node(j1));
            y2_.push_back(g.node(j2));
            th_.push_back(v);
        }
}

double auto_exclusion_cells(Vec2 x, double spacing, double max_cells, double min_cells) {
    const double room = std::min(x.x1, x.x2) / spacing;
    return std::min(max_cells, std::max(min_cells, room));
}

void DirectKernel::check_probe(const KernelProbe& p, double rho) const {
    if (p.x.x1 == 0.0 || p.x.x2 == 0.0) throw ValidationError("probe lies on an axis");
    if (p.exclusion_cells < 1.0) throw ValidationError("exclusion radius must be at least one grid cell");
    if (p.image_radius < 1) throw ValidationError("image_radius must be >= 1");
    const double ax1 = std::abs(p.x.x1), ax2 = std::abs(p.x.x2);
    if (ax1 >= rho && ax2 >= rho) return;
    // The disk crosses an axis: the part across it is the reflection partner
    // of a region on the probe's side, and must carry no mass.
    const Grid& g = theta_.grid;
    const double h = g.spacing();
    const int c1 = int(std::lround(p.x.x1 / h)), c2 = int(std::lround(p.x.x2 / h));
    const int w = int(std::ceil(rho / h)) + 1;
    for (int i1 = c1 - w; i1 <= c1 + w; ++i1)
        for (int i2 = c2 - w; i2 <= c2 + w; ++i2) {
            const Vec2 y{i1 * h, i2 * h};
            if ((y - p.x).norm() >= rho) continue;
            const bool across = (y.x1 * p.x.x1 < 0.0) || (y.x2 * p.x.x2 < 0.0);
            if (across && theta_.torus(i1, i2) != 0.0)
                throw ValidationError("theta is nonzero in the reflection partner of the exclusion disk at (" +
                                      std::to_string(p.x.x1) + ", " + std::to_string(p.x.x2) + ")");
        }
}

Vec2 DirectKernel::far_field(Vec2 x, int nimg, double rho) const {
    const double rho2 = rho * rho;
    const std::size_t n = th_.size();
    const double* y1 = y1_.data();
    const double* y2 = y2_.data();
    const double* th = th_.data();
    double u1 = 0.0, u2 = 0.0;
    for (int s1 = -1; s1 <= 1; s1 += 2)
        for (int s2 = -1; s2 <= 1; s2 += 2) {
            const double sg = double(s1 * s2);
            for (int a = -nimg; a <= nimg; ++a)
                for (int b = -nimg; b <= nimg; ++b) {
                    const double x1 = x.x1 - 2.0 * a, x2 = x.x2 - 2.0 * b;
                    double acc1 = 0.0, acc2 = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const double z1 = x1 - s1 * y1[i];
                        const double z2 = x2 - s2 * y2[i];
                        const double r2 = z1 * z1 + z2 * z2;
                        const double inv = r2 >= rho2 ? th[i] / (r2 * std::sqrt(r2)) : 0.0;
                        acc1 -= z2 * inv;
                        acc2 += z1 * inv;
                    }
                    u1 += sg * acc1;
                    u2 += sg * acc2;
                }
        }
    // smooth partition inside the disk
    const Grid& g = theta_.grid;
    const double h = g.spacing();
    const int c1 = int(std::lround(x.x1 / h)), c2 = int(std::lround(x.x2 / h));
    const int w = int(std::ceil(rho / h)) + 1;
    for (int i1 = c1 - w; i1 <= c1 + w; ++i1)
        for (int i2 = c2 - w; i2 <= c2 + w; ++i2) {
            const double z1 = x.x1 - i1 * h, z2 = x.x2 - i2 * h;
            const double r = std::hypot(z1, z2);
            if (r >= rho || r == 0.0) continue;
            const double v = theta_.torus(i1, i2);
            if (v == 0.0) continue;
            const double k = far_weight(r, rho) * v / (r * r * r);
            u1 -= z2 * k;
            u2 += z1 * k;
        }
    return {u1 * h * h, u2 * h * h};
}

Vec2 DirectKernel::near_field(Vec2 x, double rho) const {
    const Grid& g = theta_.grid;
    const double hf = g.spacing() / 4.0;
    const int pad = 5;
    const Vec2 origin{std::floor((x.x1 - rho) / hf - pad) * hf, std::floor((x.x2 - rho) / hf - pad) * hf};
    const int np = int(std::ceil(2.0 * rho / hf)) + 2 * pad + 2;
    const auto patch = synthesize_patch(spec_, origin, hf, np, np, g.nodes() - 1);
    auto interp = [&](Vec2 p) {
        const double t1 = (p.x1 - origin.x1) / hf, t2 = (p.x2 - origin.x2) / hf;
        const int i1 = int(std::floor(t1)) - 3, i2 = int(std::floor(t2)) - 3;
        double w1[8], w2[8];
        lagrange8(t1 - i1, w1);
        lagrange8(t2 - i2, w2);
        double acc = 0.0;
        for (int a = 0; a < 8; ++a) {
            const double* row = &patch[static_cast<std::size_t>(i1 + a) * np + i2];
            double r = 0.0;
            for (int b = 0; b < 8; ++b) r += w2[b] * row[b];
            acc += w1[a] * r;
        }
        return acc;
    };
    const auto& abs = Gauss::abscissa();
    const auto& wts = Gauss::weights();
    double u1 = 0.0, u2 = 0.0;
    const double dphi = M_PI / nphi_;
    // Gauss nodes are stored for [0,1] of [-1,1] symmetric pairs
    auto radial = [&](double xi, double wt) {
        const double r = 0.5 * rho * (xi + 1.0);
        const double chi = 1.0 - far_weight(r, rho);
        if (chi == 0.0 || r == 0.0) return;
        double a1 = 0.0, a2 = 0.0;
        for (int j = 0; j < nphi_; ++j) {
            const double phi = (j + 0.5) * dphi;
            const double c = std::cos(phi), s = std::sin(phi);
            const double d = interp({x.x1 - r * c, x.x2 - r * s}) - interp({x.x1 + r * c, x.x2 + r * s});
            a1 -= s * d;
            a2 += c * d;
        }
        const double f = 0.5 * rho * wt * chi / r * dphi;
        u1 += f * a1;
        u2 += f * a2;
    };
    for (std::size_t i = 0; i < abs.size(); ++i) {
        if (abs[i] == 0.0) {
            radial(0.0, wts[i]);
        } else {
            radial(abs[i], wts[i]);
            radial(-abs[i], wts[i]);
        }
    }
    return {u1, u2};
}

KernelResult DirectKernel::velocity(const KernelProbe& p) const {
    const double h = theta_.grid.spacing();
    const double rho = p.exclusion_cells * h;
    check_probe(p, rho);
    KernelResult res;
    const Vec2 far = far_field(p.x, p.image_radius, rho);
    res.near = near_field(p.x, rho);
    res.u = far + res.near;
    res.tail_bound = tail_bound(theta_inf_, p.x.x1, p.image_radius);
    const int c1 = int(std::lround(p.x.x1 / h)), c2 = int(std::lround(p.x.x2 / h));
    const int w = int(std::ceil(rho / h)) + 1;
    double mass = 0.0;
    for (int i1 = c1 - w; i1 <= c1 + w; ++i1)
        for (int i2 = c2 - w; i2 <= c2 + w; ++i2)
            if (std::hypot(p.x.x1 - i1 * h, p.x.x2 - i2 * h) < rho) mass += std::abs(theta_.torus(i1, i2));
    res.excluded_mass = mass * h * h;
    return res;
}

std::vector<KernelResult> DirectKernel::velocity(const std::vector<KernelProbe>& probes) const {
    std::vector<KernelResult> out(probes.size());
    // validate serially so errors surface deterministically
    for (const auto& p : probes) check_probe(p, p.exclusion_cells * theta_.grid.spacing());
    // plan cache is thread-local, so warm one per worker inside the loop
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < probes.size(); ++i) out[i] = velocity(probes[i]);
    return out;
}

KernelResult direct_velocity(const ScalarField& theta, const KernelProbe& probe) {
    return DirectKernel(theta).velocity(probe);
}

std::vector<KernelProbe> probes_from_json(const nlohmann::json& j, int image_radius, double exclusion_cells) {
    if (!j.is_array()) throw ValidationError("probe batch must be a JSON list");
    std::vector<KernelProbe> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        KernelProbe p;
        if (e.is_array() && e.size() == 2) {
            p.x = {e[0].get<double>(), e[1].get<double>()};
        } else if (e.is_object() && e.contains("x1") && e.contains("x2")) {
            p.x = {e["x1"].get<double>(), e["x2"].get<double>()};
        } else {
            throw ValidationError("probe[" + std::to_string(i) + "] must be [x1, x2] or {x1, x2}");
        }
        p.image_radius = image_radius;
        p.exclusion_cells = exclusion_cells;
        out.push_back(p);
    }
    return out;
}

}  // namespace sqg

