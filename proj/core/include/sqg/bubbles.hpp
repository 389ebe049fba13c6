#pragma once

#include <nlohmann/json.hpp>

#include <vector>

#include "sqg/spectral.hpp"

namespace sqg {

// 0 for s <= 0, 1 for s >= 1, C-infinity in between (exp(-1/s) mollifier).
double smooth_step(double s);
double smooth_step_derivative(double s);

struct BumpProfile {
    static constexpr double plateau_radius = 1.0 / 32.0;
    static constexpr double support_radius = 1.0 / 8.0;
};

double bump(double r);
double bump_derivative(double r);

struct BumpBounds {
    double max_d1;
    double max_d2;
};
// Sampled sup norms of phi' and phi''.
BumpBounds bump_derivative_bounds(int samples = 20000);

// n0 <= n <= N, amplitude exponent alpha. `dilation` k rescales the whole
// configuration by 4^k (theta -> 4^k theta(4^-k x)), an exact symmetry of the
// equation, so bubble n sits at geometric level m = n - k.
struct DataSpec {
    int n0 = 3;
    int N = 5;
    double alpha = 0.55;
    int dilation = 3;

    void validate() const;
};

struct BubbleSpec {
    int n = 0;
    int level = 0;  // m = n - dilation
    Vec2 center;
    double support_radius = 0.0;
    double core_radius = 0.0;  // plateau of phi, where theta equals the amplitude
    double amplitude = 0.0;

    double value(Vec2 x) const;
    Vec2 gradient(Vec2 x) const;
    bool in_support(Vec2 x) const { return (x - center).norm() < support_radius; }
};

std::vector<BubbleSpec> make_bubbles(const DataSpec& spec);

// Grid points across the smallest support diameter.
double points_across_smallest(const DataSpec& spec, const Grid& g);
// Throws unless the smallest bubble has at least `min_points` across.
void require_resolved(const DataSpec& spec, const Grid& g, double min_points = 8.0);

// Analytic first-quadrant value of the truncated data.
double data_value(const std::vector<BubbleSpec>& bubbles, Vec2 x);

ScalarField assemble_data(const DataSpec& spec, const Grid& g);
ScalarField single_bubble(const BubbleSpec& b, const Grid& g);

// Squared Hdot^2 norm of each bubble taken alone, computed spectrally.
std::vector<double> bubble_h2_increments(const DataSpec& spec, const Grid& g);

struct OrderingEntry {
    int n;
    double nominal_ratio;      // sup x1 / inf x1 over the support ball
    double core_ratio;         // same over the plateau disk
    double nominal_gap;        // inf_n x1 / sup_{n+1} x1, support balls (0 for the last)
    double core_gap;           // same on plateau disks
    double nominal_max_slope;  // max x2/x1
    double core_max_slope;
    double nominal_diag_excess;  // max (2 x2 - x1), positive means 2x2 <= x1 fails
    double core_diag_excess;
};

struct OrderingReport {
    std::vector<OrderingEntry> entries;
    bool nominal_ok = false;  // 3/2 and 2 ratio checks on support balls
    bool core_ok = false;     // same on plateau disks
    bool diagonal_ok = false;  // 2x2 <= x1 on the core
    nlohmann::json to_json() const;
};

// Throws ValidationError if the core ratios fail (a geometry bug).
OrderingReport verify_initial_ordering(const DataSpec& spec);

}  // namespace sqg
