#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <vector>

#include "sqg/evolution.hpp"
#include "sqg/spectral.hpp"

namespace sqg {

struct BubbleWindow {
    int n = 0;
    std::vector<Vec2> ring;  // closed polygon, in order
    double margin = 0.0;
};

struct H2Partition {
    std::vector<int> n;
    std::vector<double> contribution;  // squared Hdot^2 norm inside each window
    double total = 0.0;                // squared Hdot^2 norm of the whole field
    double captured = 0.0;             // sum of contributions / total
};

// Splits ||theta||^2_Hdot2 = int |lap theta|^2 over the windows. Throws
// ValidationError when two windows claim the same grid node.
H2Partition per_bubble_h2(const Spectrum& theta, const std::vector<BubbleWindow>& windows);

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p);
double distance_to_polygon(const std::vector<Vec2>& poly, Vec2 p);

struct LogLipschitz {
    double modulus = 0.0;
    int pairs = 0;
    double worst_separation = 0.0;
};

// max |u(x) - u(y)| / (|x - y| ln(10 + 1/|x - y|)) over `pairs` random pairs
// in [lo, hi]^2 with log-uniform separations in [min_sep, max_sep].
LogLipschitz log_lipschitz_modulus(const std::function<Vec2(Vec2)>& u, double lo, double hi, int pairs,
                                   double min_sep, double max_sep, unsigned long long seed);

struct InflationSummary {
    int N = 0;
    int n0 = 0;
    double alpha = 0.0;
    std::optional<double> c0_emp;
    std::optional<double> M_N;
    std::optional<double> T_N;  // only when M_N > 1
    std::optional<double> ell_N;
    double hdot2_initial = 0.0;
    double hdot2_max = 0.0;
    double growth_factor = 0.0;
    double inflation_factor = 1.5;
    bool inflated = false;
    double trend_slope = 0.0;         // OLS d(Hdot2)/dt
    double increasing_fraction = 0.0;  // consecutive records with Hdot2 up
    std::string stop_reason;
    nlohmann::json to_json() const;
};

InflationSummary inflation_summary(const std::vector<DiagnosticsRecord>& records, int N, int n0, double alpha,
                                   std::optional<double> c0_emp, double inflation_factor,
                                   const std::string& stop_reason);

}  // namespace sqg
