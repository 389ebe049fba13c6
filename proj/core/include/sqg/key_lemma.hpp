#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "sqg/bubbles.hpp"
#include "sqg/direct_kernel.hpp"
#include "sqg/spectral.hpp"

namespace sqg {

struct LemmaNorms {
    double hess_l2 = 0.0;        // ||grad^2 theta||_L2([0,1]^2)
    double theta_inf = 0.0;      // ||theta||_inf
    double grad_inf = 0.0;       // ||grad theta||_inf
    double grad_l2_R = 0.0;      // ||grad theta||_L2(R(x))
    double y2inv_d1_l2_R = 0.0;  // ||y2^-1 d1 theta||_L2(R(x))
    double hess_l2_R = 0.0;      // ||grad^2 theta||_L2(R(x))
    double grad_inf_R = 0.0;     // ||grad theta||_inf on R(x)
};

struct KeyLemmaReport {
    Vec2 x;
    double leading = 0.0;
    Vec2 u;
    double res1 = 0.0;
    double res2 = 0.0;
    LemmaNorms norms;
    double logfac = 1.0;  // 1 + log(x1/x2)
    // res normalized by the H^2 bounds
    double ratio1 = 0.0;
    double ratio2 = 0.0;
    double ratio2_hess = 0.0;  // same with ||grad^2 theta||_L2(R) in the local term
    // res normalized by the W^{1,inf} bounds
    double ratio1_lip = 0.0;
    double ratio2_lip = 0.0;
    bool clipped = false;      // R(x) reaches past [0,1]^2
    bool theta_zero_on_R = false;
    double tail_bound = 0.0;
    double exclusion_cells = 0.0;
};

// Region R(x) = [x1/2, 2x1] x [2x2, 1] clipped to [0,1]^2.
struct Rect {
    double a1, b1, a2, b2;
};
Rect lemma_region(Vec2 x, bool* clipped = nullptr);

class KeyLemmaContext {
public:
    explicit KeyLemmaContext(const ScalarField& theta, int image_radius = 8);

    // 12 int_{[2x1,1]x[0,1]} y1 y2 / |y|^5 theta dy.
    double leading_term(Vec2 x) const;
    LemmaNorms norms(Vec2 x) const;
    // Both bound families on one kernel evaluation.
    KeyLemmaReport evaluate(Vec2 x) const;
    std::vector<KeyLemmaReport> evaluate(const std::vector<Vec2>& probes) const;

    const ScalarField& field() const { return theta_; }

private:
    ScalarField theta_;
    ScalarField d1_, d2_, d11_, d12_, d22_;
    double hess_l2_ = 0.0, theta_inf_ = 0.0, grad_inf_ = 0.0;
    int image_radius_;
    DirectKernel kernel_;
};

double leading_term(const ScalarField& theta, Vec2 x);
KeyLemmaReport residuals(const ScalarField& theta, Vec2 x);
KeyLemmaReport residuals_lipschitz(const ScalarField& theta, Vec2 x);

struct LemmaSummary {
    int probes = 0;
    int off_support = 0;
    int clipped = 0;
    double max_ratio1 = 0.0;
    double max_ratio2 = 0.0;
    double max_ratio2_hess = 0.0;
    double max_ratio1_lip = 0.0;
    double max_ratio2_lip = 0.0;
    double max_ratio2_off = 0.0;  // res2 / (logfac * (hess + inf)) on probes with theta = 0 on R
    nlohmann::json to_json() const;
};
LemmaSummary summarize(const std::vector<KeyLemmaReport>& r);

// ---- probe sampling ----------------------------------------------------------

struct ProbePolicy {
    int count = 200;
    double off_support_fraction = 0.25;
    double min_cells = 4.0;  // distance from the axes in grid spacings
};

struct SampledProbe {
    Vec2 x;
    int bubble = 0;
    bool off_support = false;
};

// Support probes are uniform in a random bubble's support. The rest are
// drawn above a bubble's centre where theta vanishes on all of R(x).
std::vector<SampledProbe> sample_probes(const std::vector<BubbleSpec>& bubbles, const Grid& g,
                                        const ProbePolicy& policy, unsigned long long seed);

bool vanishes_on_region(const std::vector<BubbleSpec>& bubbles, Vec2 x);

// ---- Hardy inequalities ------------------------------------------------------

struct HardySample {
    double l = 1.0;
    double f0 = 0.0;
    std::vector<double> x, w, f, df, d2f;  // quadrature nodes and weights on (0,l)
};

struct FunctionJet {
    double f, df, d2f;
};

// Composite Gauss-Legendre sampling of f on (0,l).
HardySample sample_on_interval(const std::function<FunctionJet(double)>& f, double l, int panels = 32);

struct HardyResult {
    double lhs1 = 0.0;  // ||f/x||
    double rhs1 = 0.0;  // 2 ||f'||
    double lhs2 = 0.0;  // ||f/x^2||
    double rhs2 = 0.0;  // sqrt(2) ||f''||, so the inequality reads lhs2^2 <= rhs2^2
    bool first_ok = false;
    bool second_ok = false;
};

// Throws ValidationError if f(0) != 0.
HardyResult hardy_check(const HardySample& s);

// f(x) = sum_j a_j sin(j pi x / l); with `flat_origin` the coefficients are
// projected so that f'(0) = 0 as well.
struct SineSeries {
    double l = 1.0;
    std::vector<double> a;
    FunctionJet operator()(double x) const;
};
SineSeries random_sine_series(std::mt19937_64& rng, double l, int terms, bool flat_origin);

struct HardySuite {
    int functions = 0;
    int violations1 = 0;
    int violations2 = 0;
    double worst1 = 0.0;  // max lhs1 / rhs1
    double worst2 = 0.0;  // max lhs2^2 / rhs2^2
    nlohmann::json to_json() const;
};
HardySuite run_hardy_suite(int count, const std::vector<double>& lengths, int terms, unsigned long long seed);

}  // namespace sqg
