#pragma once

#include <nlohmann/json.hpp>

#include <vector>

#include "sqg/spectral.hpp"

namespace sqg {

struct KernelProbe {
    Vec2 x;
    int image_radius = 8;
    // Radius of the singular disk, in grid spacings.
    double exclusion_cells = 8.0;
};

// Largest exclusion radius in [min_cells, max_cells] grid spacings that keeps
// the disk inside the open quadrant, min_cells if none does.
double auto_exclusion_cells(Vec2 x, double spacing, double max_cells = 8.0, double min_cells = 4.0);

struct KernelResult {
    Vec2 u;
    Vec2 near;  // part of u coming from the excluded disk
    double tail_bound = 0.0;
    double excluded_mass = 0.0;  // integral of |theta| over the excluded disk
};

// C x1 theta_inf sum_{|n|_inf > N} |n|_inf^-4 with the shell majorant 4/N^2.
inline constexpr double kTailConstant = 14.142135623730951;  // 10 sqrt(2)
double tail_bound(double theta_inf, double x1, int image_radius);

// Symmetrized periodic kernel sum
//   u(x) = sum_n sum_{4 reflections} int_[0,1]^2 (x - y')^perp / |x - y'|^3 theta(y) dy
// evaluated as a trapezoid sum outside a smooth cut-off disk of radius rho,
// plus polar quadrature of the paired odd difference inside it.
class DirectKernel {
public:
    explicit DirectKernel(const ScalarField& theta, int radial_nodes = 24, int angular_nodes = 32);

    KernelResult velocity(const KernelProbe& p) const;
    std::vector<KernelResult> velocity(const std::vector<KernelProbe>& probes) const;

    double theta_inf() const { return theta_inf_; }
    const ScalarField& field() const { return theta_; }

private:
    ScalarField theta_;
    Spectrum spec_;
    int nr_, nphi_;
    double theta_inf_ = 0.0;
    std::vector<double> y1_, y2_, th_;  // nonzero quarter nodes

    void check_probe(const KernelProbe& p, double rho) const;
    Vec2 far_field(Vec2 x, int nimg, double rho) const;
    Vec2 near_field(Vec2 x, double rho) const;
};

KernelResult direct_velocity(const ScalarField& theta, const KernelProbe& probe);

std::vector<KernelProbe> probes_from_json(const nlohmann::json& j, int image_radius, double exclusion_cells);

}  // namespace sqg
