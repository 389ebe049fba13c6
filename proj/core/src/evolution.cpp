#include "sqg/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace sqg {

void EvolutionConfig::validate() const {
    multiplier.validate();
    if (!(t_end >= 0.0)) throw ValidationError("evolution.t_end must be >= 0");
    if (!(cfl > 0.0 && cfl < 1.0)) throw ValidationError("evolution.cfl must lie in (0,1)");
    if (fixed_dt < 0.0) throw ValidationError("evolution.fixed_dt must be >= 0");
    if (snapshot_stride < 1) throw ValidationError("evolution.snapshot_stride must be >= 1");
    if (!(exhaustion_fraction > 0.0 && exhaustion_fraction <= 1.0))
        throw ValidationError("evolution.exhaustion_fraction must lie in (0,1]");
    if (!(exhaustion_sobolev_index >= 0.0 && exhaustion_sobolev_index <= 3.0))
        throw ValidationError("evolution.exhaustion_sobolev_index must lie in [0,3]");
}

double tail_fraction(const Spectrum& theta, double sobolev_index) {
    const int M = theta.grid.max_retained();
    const int cut = (2 * M) / 3;
    const int N = theta.grid.nodes();
    double top = 0.0, all = 0.0;
    for (int m1 = 0; m1 < N; ++m1)
        for (int m2 = 0; m2 < N; ++m2) {
            const double c = theta(m1, m2);
            if (c == 0.0) continue;
            const double k2 = M_PI * M_PI * (double(m1) * m1 + double(m2) * m2);
            const double e = (sobolev_index == 0.0 ? 1.0 : std::pow(k2, sobolev_index)) * c * c;
            all += e;
            if (std::max(m1, m2) > cut) top += e;
        }
    return all > 0.0 ? top / all : 0.0;
}

DiagnosticsRecord measure(const Spectrum& theta, const EvolutionConfig& cfg) {
    DiagnosticsRecord r;
    r.l2 = sobolev_norm(theta, 0.0);
    r.hdot2 = sobolev_norm(theta, 2.0);
    r.h2 = std::hypot(r.l2, r.hdot2);
    auto& tr = transformer_for(theta.grid);
    const ScalarField f = tr.inverse(theta);
    double mn = 0.0, mx = 0.0;
    for (double v : f.values) {
        mn = std::min(mn, v);
        mx = std::max(mx, std::abs(v));
    }
    r.linf = mx;
    r.min_value = mn;
    r.grad_inf = winfty_norm(theta).second;
    r.tail_fraction = tail_fraction(theta, cfg.exhaustion_sobolev_index);
    return r;
}

Stepper::Stepper(const Grid& g, const MultiplierSpec& mult, bool dealias)
    : grid_(g),
      mult_(mult),
      dealias_(dealias),
      u1s_(g, {Parity::Odd, Parity::Even}),
      u2s_(g, {Parity::Even, Parity::Odd}),
      g1s_(g, {Parity::Even, Parity::Odd}),
      g2s_(g, {Parity::Odd, Parity::Even}),
      ns_(g),
      u1_(g, u1s_.parity),
      u2_(g, u2s_.parity),
      g1_(g, g1s_.parity),
      g2_(g, g2s_.parity),
      n_(g) {
    mult.validate();
    const int N = g.nodes();
    symbol_.assign(static_cast<std::size_t>(N) * N, 0.0);
    for (int m1 = 1; m1 < N; ++m1)
        for (int m2 = 1; m2 < N; ++m2)
            symbol_[static_cast<std::size_t>(m1) * N + m2] = mult.symbol(M_PI * std::hypot(double(m1), double(m2)));
}

void Stepper::velocity_grids(const Spectrum& theta) {
    const int K = grid_.interior();
    const int N = grid_.nodes();
    std::fill(u1s_.coeff.begin(), u1s_.coeff.end(), 0.0);
    std::fill(u2s_.coeff.begin(), u2s_.coeff.end(), 0.0);
    std::fill(g1s_.coeff.begin(), g1s_.coeff.end(), 0.0);
    std::fill(g2s_.coeff.begin(), g2s_.coeff.end(), 0.0);
    for (int m1 = 1; m1 <= K; ++m1) {
        const double k1 = M_PI * m1;
        for (int m2 = 1; m2 <= K; ++m2) {
            const std::size_t i = static_cast<std::size_t>(m1) * N + m2;
            const double b = theta.coeff[i];
            if (b == 0.0) continue;
            const double k2 = M_PI * m2;
            const double psi = symbol_[i] * b;
            u1s_.coeff[i] = k2 * psi;
            u2s_.coeff[i] = -(k1 * psi);
            g1s_.coeff[i] = k1 * b;
            g2s_.coeff[i] = k2 * b;
        }
    }
    div_ = std::max(div_, divergence_residual(u1s_, u2s_));
    auto& tr = transformer_for(grid_);
    tr.inverse(u1s_, u1_);
    tr.inverse(u2s_, u2_);
    tr.inverse(g1s_, g1_);
    tr.inverse(g2s_, g2_);
}

void Stepper::rhs(const Spectrum& theta, Spectrum& out) {
    if (theta.parity != kOddOdd) throw ValidationError("evolution state must be odd-odd");
    velocity_grids(theta);
    double um = 0.0;
    for (std::size_t i = 0; i < n_.values.size(); ++i) {
        n_.values[i] = u1_.values[i] * g1_.values[i] + u2_.values[i] * g2_.values[i];
        um = std::max(um, u1_.values[i] * u1_.values[i] + u2_.values[i] * u2_.values[i]);
    }
    umax_ = std::sqrt(um);
    transformer_for(grid_).forward(n_, out);
    const int N = grid_.nodes();
    for (int m1 = 0; m1 < N; ++m1)
        for (int m2 = 0; m2 < N; ++m2) {
            double& c = out(m1, m2);
            c = (dealias_ && !retained(grid_, m1, m2)) ? 0.0 : -c;
        }
}

double Stepper::max_velocity(const Spectrum& theta) {
    velocity_grids(theta);
    double um = 0.0;
    for (std::size_t i = 0; i < u1_.values.size(); ++i)
        um = std::max(um, u1_.values[i] * u1_.values[i] + u2_.values[i] * u2_.values[i]);
    umax_ = std::sqrt(um);
    return umax_;
}

Spectrum Stepper::step(const Spectrum& theta, double dt, double cfl) {
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");
    double used = 0.0;
    return advance(theta, cfl, dt, dt, used);
}

Spectrum Stepper::advance(const Spectrum& theta, double cfl, double fixed_dt, double dt_cap, double& dt) {
    Spectrum k1(grid_), k2(grid_), k3(grid_), k4(grid_), tmp(grid_);
    rhs(theta, k1);
    const double limit = umax_ > 0.0 ? cfl * grid_.spacing() / umax_ : dt_cap;
    if (fixed_dt > 0.0) {
        dt = std::min(fixed_dt, dt_cap);
        if (dt > limit * (1.0 + 1e-12))
            throw NumericalError("CFL violation: dt=" + std::to_string(dt) + " exceeds " + std::to_string(limit));
    } else {
        dt = std::min(limit, dt_cap);
    }
    const double u0 = umax_;
    const std::size_t n = theta.coeff.size();
    for (std::size_t i = 0; i < n; ++i) tmp.coeff[i] = theta.coeff[i] + 0.5 * dt * k1.coeff[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp.coeff[i] = theta.coeff[i] + 0.5 * dt * k2.coeff[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp.coeff[i] = theta.coeff[i] + dt * k3.coeff[i];
    rhs(tmp, k4);
    Spectrum out(grid_);
    for (std::size_t i = 0; i < n; ++i)
        out.coeff[i] = theta.coeff[i] + dt / 6.0 * (k1.coeff[i] + 2.0 * k2.coeff[i] + 2.0 * k3.coeff[i] + k4.coeff[i]);
    umax_ = u0;
    return out;
}

Spectrum step(const Spectrum& theta, double dt, const MultiplierSpec& mult, double cfl) {
    Stepper s(theta.grid, mult, true);
    return s.step(theta, dt, cfl);
}

std::string to_string(StopReason r) { return r == StopReason::TEnd ? "t_end" : "resolution_exhausted"; }

namespace {

bool finite(const Spectrum& s) {
    for (double c : s.coeff)
        if (!std::isfinite(c)) return false;
    return true;
}

}  // namespace

RunResult run(const ScalarField& data, const EvolutionConfig& cfg, const SnapshotObserver& observer) {
    return run(forward_transform(data), cfg, observer);
}

RunResult run(const Spectrum& data, const EvolutionConfig& cfg, const SnapshotObserver& observer) {
    cfg.validate();
    const Grid g = data.grid;
    Stepper stepper(g, cfg.multiplier, cfg.dealias);
    RunResult res{.records = {}, .stop = StopReason::TEnd, .final_state = cfg.dealias ? dealias(data) : data};
    Spectrum& theta = res.final_state;
    double t = 0.0;
    long long step_no = 0;
    auto record = [&](double dt) {
        DiagnosticsRecord r = measure(theta, cfg);
        r.step = step_no;
        r.t = t;
        r.dt = dt;
        r.umax = stepper.max_velocity(theta);
        r.div_residual = stepper.last_divergence();
        stepper.reset_divergence();
        res.records.push_back(r);
        if (observer) observer(step_no, t, theta);
        return r;
    };
    record(0.0);
    // tolerance for declaring t_end reached
    const double teps = 1e-12 * std::max(1.0, cfg.t_end);
    while (t < cfg.t_end - teps) {
        double dt = 0.0;
        Spectrum next = stepper.advance(theta, cfg.cfl, cfg.fixed_dt, cfg.t_end - t, dt);
        if (!finite(next))
            throw EvolutionAborted("non-finite state at step " + std::to_string(step_no + 1), theta, t, step_no);
        theta = std::move(next);
        t += dt;
        ++step_no;
        const bool done = t >= cfg.t_end - teps;
        const bool exhausted = tail_fraction(theta, cfg.exhaustion_sobolev_index) > cfg.exhaustion_fraction;
        if (done) t = cfg.t_end;
        if (done || exhausted || step_no % cfg.snapshot_stride == 0) record(dt);
        if (exhausted) {
            res.stop = StopReason::Exhausted;
            break;
        }
    }
    res.steps = step_no;
    res.t = t;
    return res;
}

}  // namespace sqg
