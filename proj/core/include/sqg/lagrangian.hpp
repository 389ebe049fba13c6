#pragma once

#include <nlohmann/json.hpp>

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sqg/bubbles.hpp"
#include "sqg/spectral.hpp"

namespace sqg {

enum class MarkerKind { Core, Top, Center, Support, Interior };
const char* to_string(MarkerKind k);

struct Marker {
    int bubble = 0;  // index into MarkerSet::bubbles
    MarkerKind kind = MarkerKind::Core;
    int label = 0;  // running id, stable across the run
    Vec2 x0;
    Vec2 pos;
    double weight = 0.0;  // quadrature area for interior markers
    double theta0 = 0.0;
};

struct MarkerSeeding {
    int ring = 64;
    int interior = 16;  // interior sub-grid per axis over the support box
    // The support circle touches the x1-axis; the ring sits just inside it.
    double support_fraction = 0.95;
};

struct MarkerSet {
    std::vector<BubbleSpec> bubbles;
    std::vector<Marker> markers;
};

MarkerSet seed_markers(const std::vector<BubbleSpec>& bubbles, const MarkerSeeding& seeding);

// ---- velocity sources -----------------------------------------------------

class VelocitySource {
public:
    virtual ~VelocitySource() = default;
    virtual Vec2 velocity(double t, Vec2 x) const = 0;
    // Spatial interpolation error estimate at (t, x); zero for analytic fields.
    virtual double interpolation_error(double, Vec2) const { return 0.0; }
};

struct ZeroVelocity final : VelocitySource {
    Vec2 velocity(double, Vec2) const override { return {}; }
};

// u = A x.
struct LinearVelocity final : VelocitySource {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    LinearVelocity(double a11, double a12, double a21, double a22) : a11(a11), a12(a12), a21(a21), a22(a22) {}
    Vec2 velocity(double, Vec2 x) const override { return {a11 * x.x1 + a12 * x.x2, a21 * x.x1 + a22 * x.x2}; }
};

// Rigid rotation with angular speed omega about `center`.
struct RotationVelocity final : VelocitySource {
    Vec2 center;
    double omega = 1.0;
    RotationVelocity(Vec2 c, double w) : center(c), omega(w) {}
    Vec2 velocity(double, Vec2 x) const override {
        const Vec2 d = x - center;
        return {-omega * d.x2, omega * d.x1};
    }
};

// Velocity of one spectral state sampled on the quarter grid, read back with
// tensor Lagrange interpolation across the parity reflections.
class GridVelocity {
public:
    GridVelocity(const Spectrum& theta, const MultiplierSpec& mult);
    Vec2 operator()(Vec2 x) const { return eval(x, 8); }
    // |8-point - 6-point| interpolation difference.
    double error(Vec2 x) const;

private:
    ScalarField u1_, u2_;
    Vec2 eval(Vec2 x, int npts) const;
};

// Exact trigonometric evaluation of the velocity (test oracle).
class TrigVelocity final : public VelocitySource {
public:
    TrigVelocity(const Spectrum& theta, const MultiplierSpec& mult);
    Vec2 velocity(double, Vec2 x) const override;

private:
    Spectrum u1_, u2_;
    PointEvaluator e1_, e2_;
};

// Up to four time levels blended by Lagrange interpolation in time.
class SnapshotWindow final : public VelocitySource {
public:
    void push(double t, std::shared_ptr<const GridVelocity> v);
    void drop_front() { levels_.pop_front(); }
    std::size_t size() const { return levels_.size(); }
    double time(std::size_t i) const { return levels_[i].first; }
    Vec2 velocity(double t, Vec2 x) const override;
    double interpolation_error(double t, Vec2 x) const override;

private:
    std::deque<std::pair<double, std::shared_ptr<const GridVelocity>>> levels_;
    void weights(double t, double* w) const;
};

// RK4 over [t0, t1] in `substeps` steps. Returns the largest interpolation
// error estimate seen at the end positions. Throws ClaimViolation if a
// marker leaves the open first quadrant.
double trace(MarkerSet& set, const VelocitySource& src, double t0, double t1, int substeps);

struct MarkerFrame {
    double t = 0.0;
    std::vector<Vec2> pos;
};
std::vector<MarkerFrame> trace_series(MarkerSet set, const VelocitySource& src, const std::vector<double>& t_grid,
                                      int substeps);

// ---- per-bubble statistics ---------------------------------------------------

struct BubbleStats {
    int n = 0;
    double sup1 = 0.0;  // over core ring, top point and centre
    double inf1 = 0.0;
    double sup2 = 0.0;
    double sup1_support = 0.0;  // over the support ring
    double inf1_support = 0.0;
    double interaction = 0.0;  // I_n(t)
    double core_area = 0.0;    // shoelace area of the core ring
    double exit_radius = 0.0;  // max |Phi - c| / (2 r_support) over the support ring
};

std::vector<BubbleStats> bubble_stats(const MarkerSet& set);

// I_n from the interior markers of bubble index `b`.
double interaction_integral(const MarkerSet& set, int b, int min_markers = 32);

struct TrackSample {
    double t = 0.0;
    std::vector<BubbleStats> stats;
    std::vector<Vec2> pos;
    double interp_error = 0.0;
};

struct TrackSeries {
    MarkerSet initial;
    std::vector<TrackSample> samples;
    // per marker: largest |theta(t, Phi) - theta(0, x0)| / amplitude over checks
    std::vector<double> transport_dev;
    int transport_checks = 0;
};

// Feeds spectral snapshots in time order and advances markers between them.
class StreamingTracer {
public:
    StreamingTracer(MarkerSet markers, MultiplierSpec mult, int substeps, int transport_check_stride);
    void push(double t, const Spectrum& theta);
    void finish();
    const TrackSeries& series() const { return series_; }
    TrackSeries take() { return std::move(series_); }

private:
    struct Level {
        long long index;
        double t;
        std::shared_ptr<const GridVelocity> vel;
        std::shared_ptr<const Spectrum> theta;
    };
    MarkerSet set_;
    MultiplierSpec mult_;
    int substeps_;
    int check_stride_;
    std::deque<Level> levels_;
    long long next_interval_ = 0;
    long long count_ = 0;
    bool finished_ = false;
    TrackSeries series_;
    std::vector<double> reference_;  // theta(0, x0) as represented

    void advance(long long k, long long stencil_start);
    void sample(double t, const Spectrum& theta, double err);
};

// ---- claim checks ------------------------------------------------------------

// First time (if any) at which Claim I fails for each bubble.
std::vector<std::optional<double>> claim1_check(const TrackSeries& s);

// First time the support ring leaves B(c, 2 r) for each bubble.
std::vector<std::optional<double>> almost_invariance_check(const TrackSeries& s, double threshold = 1.0);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    int points = 0;
};
SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// x2hat^n / Phi2hat^n(T) with linear interpolation of the sample series.
double growth_ratio(const TrackSeries& s, int b, double T);

struct PairEnvelope {
    double c_emp = 0.0;  // smallest C with the double-exponential envelope
    int pairs = 0;
    int samples = 0;
    int invalid = 0;  // pairs that separated beyond distance 1
};
PairEnvelope flow_continuity_check(const TrackSeries& s, const std::vector<std::pair<int, int>>& pairs, double M);

std::vector<std::pair<int, int>> sample_pairs(const MarkerSet& set, int count, unsigned long long seed);

struct ClaimsConfig {
    int ell_offset = 0;  // ell = n0 + ell_offset
    int pairs = 50;
    double transport_tolerance = 0.02;
    unsigned long long seed = 0;
};

// Everything the claims report needs, as JSON. `M` is sup Hdot^2 over the
// tracked window.
nlohmann::json analyze_claims(const TrackSeries& s, const DataSpec& data, double M, const ClaimsConfig& cfg);

}  // namespace sqg
