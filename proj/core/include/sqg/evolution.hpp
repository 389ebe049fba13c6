#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sqg/spectral.hpp"

namespace sqg {

struct EvolutionConfig {
    MultiplierSpec multiplier;
    double cfl = 0.4;
    double fixed_dt = 0.0;  // > 0 overrides the CFL policy
    double t_end = 0.1;
    int snapshot_stride = 2;
    bool dealias = true;
    // Stop once this fraction of |k|^2s-weighted energy sits in the top
    // third of the retained modes.
    double exhaustion_fraction = 0.01;
    double exhaustion_sobolev_index = 0.0;

    void validate() const;
};

struct DiagnosticsRecord {
    long long step = 0;
    double t = 0.0;
    double dt = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double min_value = 0.0;  // most negative grid value
    double hdot2 = 0.0;
    double h2 = 0.0;
    double grad_inf = 0.0;
    double tail_fraction = 0.0;
    double umax = 0.0;
    double div_residual = 0.0;  // worst since the previous record
};

DiagnosticsRecord measure(const Spectrum& theta, const EvolutionConfig& cfg);

// Fraction of weighted energy in modes with max(m1, m2) > 2/3 of the
// retained range.
double tail_fraction(const Spectrum& theta, double sobolev_index);

// Pseudo-spectral right-hand side and RK4 stepping for one grid.
class Stepper {
public:
    Stepper(const Grid& g, const MultiplierSpec& mult, bool dealias);

    // -P(u . grad theta), with P the 2/3 truncation when dealiasing.
    void rhs(const Spectrum& theta, Spectrum& out);
    // Max |u| over the grid for the given state.
    double max_velocity(const Spectrum& theta);
    // Classical RK4; refuses dt above cfl * h / max|u|.
    Spectrum step(const Spectrum& theta, double dt, double cfl);
    // RK4 with dt = min(cfl * h / max|u|, dt_cap) chosen from the first
    // stage, or dt = fixed_dt (CFL-checked) when fixed_dt > 0.
    Spectrum advance(const Spectrum& theta, double cfl, double fixed_dt, double dt_cap, double& dt);
    void reset_divergence() { div_ = 0.0; }

    double last_umax() const { return umax_; }
    double last_divergence() const { return div_; }

private:
    Grid grid_;
    MultiplierSpec mult_;
    bool dealias_;
    Spectrum u1s_, u2s_, g1s_, g2s_, ns_;
    ScalarField u1_, u2_, g1_, g2_, n_;
    std::vector<double> symbol_;
    double umax_ = 0.0;
    double div_ = 0.0;

    void velocity_grids(const Spectrum& theta);
};

Spectrum step(const Spectrum& theta, double dt, const MultiplierSpec& mult, double cfl = 0.4);

enum class StopReason { TEnd, Exhausted };
std::string to_string(StopReason r);

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    StopReason stop = StopReason::TEnd;
    Spectrum final_state;
    long long steps = 0;
    double t = 0.0;
};

// Raised on NaN; carries the last finite state for a dump.
struct EvolutionAborted : NumericalError {
    EvolutionAborted(const std::string& what, Spectrum last, double t, long long step)
        : NumericalError(what), last_good(std::move(last)), t(t), step(step) {}
    Spectrum last_good;
    double t;
    long long step;
};

// Called for every snapshot (step 0, each stride, and the final state).
using SnapshotObserver = std::function<void(long long step, double t, const Spectrum& theta)>;

RunResult run(const ScalarField& data, const EvolutionConfig& cfg, const SnapshotObserver& observer = {});
RunResult run(const Spectrum& data, const EvolutionConfig& cfg, const SnapshotObserver& observer = {});

}  // namespace sqg
