// One PASS/FAIL line per acceptance criterion. Criteria 4 and 6-10 read the
// artifacts of two end-to-end sqglab runs of the default config.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "sqg/config.hpp"
#include "sqg/direct_kernel.hpp"
#include "sqg/io.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::set<int> g_known;
int g_unexpected = 0;

void report(int id, const std::string& name, const Outcome& o) {
    const bool known = !o.pass && g_known.count(id);
    if (!o.pass && !known) ++g_unexpected;
    std::printf("%s criterion %2d: %s | %s%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
                known ? " (known failure)" : "");
    std::fflush(stdout);
}

template <class F>
void criterion(int id, const std::string& name, F&& f) {
    Outcome o;
    try {
        o = f();
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    report(id, name, o);
}

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", v);
    return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- velocity oracle --------------------------------------------------------------

struct OracleResult {
    double rel = 0.0;
    double norm = 0.0;
};

OracleResult velocity_oracle(const ScalarField& f, const std::vector<Vec2>& xs, double exclusion) {
    const auto [u1s, u2s] = velocity_from_scalar(forward_transform(f), MultiplierSpec{});
    const int K = f.grid.interior();
    const PointEvaluator e1(u1s, K), e2(u2s, K);
    const DirectKernel dk(f);
    double err = 0, scale = 0, dot = 0, n2 = 0;
    for (Vec2 x : xs) {
        const Vec2 us{e1(x), e2(x)};
        const Vec2 ud = dk.velocity(KernelProbe{x, 8, exclusion}).u;
        err = std::max(err, (ud - us).norm());
        scale = std::max(scale, us.norm());
        dot += ud.x1 * us.x1 + ud.x2 * us.x2;
        n2 += us.x1 * us.x1 + us.x2 * us.x2;
    }
    return {err / scale, 2.0 * M_PI * dot / n2};
}

Outcome criterion1(unsigned long long seed) {
    const auto t0 = std::chrono::steady_clock::now();
    // smooth odd-odd single mode at 128^2
    const Grid g(128);
    const ScalarField f = sample_odd_odd(g, [](double x1, double x2) {
        return std::sin(M_PI * x1) * std::sin(2 * M_PI * x2);
    });
    std::mt19937_64 rng(seed);
    const double lo = 8.0 * g.spacing();
    std::uniform_real_distribution<double> U(lo, 1.0 - lo);
    std::vector<Vec2> xs;
    for (int i = 0; i < 20; ++i) xs.push_back({U(rng), U(rng)});
    const OracleResult a = velocity_oracle(f, xs, 8.0);

    // bubble data; the smallest bubble needs 1024^2
    const DataSpec d{3, 5, 0.55, 3};
    const Grid gb(1024);
    ProbePolicy pol;
    pol.count = 20;
    pol.min_cells = 8.0;
    std::vector<Vec2> xb;
    for (const auto& p : sample_probes(make_bubbles(d), gb, pol, seed)) xb.push_back(p.x);
    const OracleResult b = velocity_oracle(assemble_data(d, gb), xb, 8.0);
    const double secs = seconds_since(t0);
    const double norm_dev = std::abs(a.norm / (2 * M_PI) - 1.0);
    return {a.rel < 1e-3 && b.rel < 1e-3 && norm_dev < 1e-3 && secs < 300,
            "single mode 128^2 rel " + fmt(a.rel) + ", bubbles 1024^2 rel " + fmt(b.rel) +
                ", fitted normalization/2pi - 1 = " + fmt(norm_dev) + ", " + fmt(secs) + " s"};
}

Outcome criterion2(unsigned long long seed) {
    const HardySuite s = run_hardy_suite(100, {0.25, 0.5, 1.0}, 8, seed);
    return {s.functions == 300 && s.violations1 == 0 && s.violations2 == 0,
            std::to_string(s.functions) + " functions, violations " + std::to_string(s.violations1) + " + " +
                std::to_string(s.violations2) + ", worst ratios " + fmt(s.worst1) + " and " + fmt(s.worst2)};
}

Outcome criterion3(unsigned long long seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const DataSpec d{3, 5, 0.55, 3};
    ProbePolicy pol;
    pol.count = 200;
    // probes valid on the coarse grid are valid on the fine one
    std::vector<Vec2> xs;
    for (const auto& p : sample_probes(make_bubbles(d), Grid(1024), pol, seed)) xs.push_back(p.x);
    auto run = [&](int R) { return summarize(KeyLemmaContext(assemble_data(d, Grid(R))).evaluate(xs)); };
    const LemmaSummary c = run(1024), f = run(2048);
    const double ch1 = std::abs(f.max_ratio1 / c.max_ratio1 - 1.0);
    const double ch2 = std::abs(f.max_ratio2 / c.max_ratio2 - 1.0);
    const bool finite = std::isfinite(c.max_ratio1) && std::isfinite(c.max_ratio2) && std::isfinite(f.max_ratio1) &&
                        std::isfinite(f.max_ratio2);
    const double secs = seconds_since(t0);
    return {finite && ch1 < 0.2 && ch2 < 0.2 && secs < 1800,
            "200 probes, ratio1 " + fmt(c.max_ratio1) + " -> " + fmt(f.max_ratio1) + " (" + fmt(100 * ch1) +
                "%), ratio2 " + fmt(c.max_ratio2) + " -> " + fmt(f.max_ratio2) + " (" + fmt(100 * ch2) +
                "%), 1024^2 -> 2048^2, " + fmt(secs) + " s"};
}

Outcome criterion5() {
    const Grid g(128);
    const ScalarField f = sample_odd_odd(g, [](double x1, double x2) {
        return std::sin(M_PI * x1) * std::sin(7 * M_PI * x2) + 0.4 * std::sin(7 * M_PI * x1) * std::sin(M_PI * x2) +
               0.2 * std::sin(5 * M_PI * x1) * std::sin(5 * M_PI * x2);
    });
    EvolutionConfig cfg;
    cfg.multiplier.alpha = 2.0;
    cfg.t_end = 0.1;
    cfg.snapshot_stride = 1;
    double worst = 0.0;
    const RunResult r = run(f, cfg, [&](long long, double, const Spectrum& s) {
        const ScalarField v = inverse_transform(s);
        for (std::size_t i = 0; i < v.values.size(); ++i) worst = std::max(worst, std::abs(v.values[i] - f.values[i]));
    });
    return {worst < 1e-8 && r.t >= 0.1,
            "Euler multiplier, single-shell data, max |theta(t) - theta0| = " + fmt(worst) + " over " +
                std::to_string(r.steps) + " steps"};
}

// ---- run artifacts ----------------------------------------------------------------

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::size_t col(const std::string& n) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == n) return i;
        throw std::runtime_error("missing column " + n);
    }
};

Table read_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    Table t;
    std::string line;
    std::getline(in, line);
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) t.header.push_back(c);
    while (std::getline(in, line)) {
        std::vector<double> r;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) r.push_back(std::stod(c));
        t.rows.push_back(r);
    }
    return t;
}

Outcome criterion4(const fs::path& run) {
    const Table d = read_csv(run / "diagnostics.csv");
    const auto it = d.col("t"), il2 = d.col("l2"), iinf = d.col("linf"), idiv = d.col("div_residual");
    const double l20 = d.rows.front()[il2], inf0 = d.rows.front()[iinf];
    double dl2 = 0, dinf = 0, div = 0, tmax = 0;
    // Up to and including the first sample at or past t = 0.1.
    for (const auto& r : d.rows) {
        tmax = r[it];
        dl2 = std::max(dl2, std::abs(r[il2] / l20 - 1));
        dinf = std::max(dinf, std::abs(r[iinf] / inf0 - 1));
        div = std::max(div, r[idiv]);
        if (tmax >= 0.1 - 1e-12) break;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {tmax >= 0.1 - 1e-12 && dl2 < 1e-3 && dinf < 1e-2 && div <= 4 * eps,
            "to t = " + fmt(tmax) + ": L2 drift " + fmt(dl2) + ", Linf drift " + fmt(dinf) +
                ", max spectral div residual " + fmt(div) + " (4 eps = " + fmt(4 * eps) + ")"};
}

Outcome criterion6(const nlohmann::json& c) {
    const auto& c1 = c.at("claim1");
    bool ok = c1.at("holds_at_t0").get<bool>();
    std::string fv;
    for (const auto& b : c1.at("per_bubble")) {
        const bool none = b.at("first_violation").is_null();
        if (!none && !(b.at("first_violation").get<double>() > 0.0)) ok = false;
        fv += " n=" + std::to_string(b.at("n").get<int>()) + ":" +
              (none ? std::string("none") : fmt(b.at("first_violation").get<double>()));
    }
    return {ok, "first violation" + fv + " (horizon " + fmt(c.at("horizon").get<double>()) + "), c_emp " +
                    fmt(c1.at("c_emp").get<double>()) + ", M " + fmt(c.at("M").get<double>())};
}

Outcome criterion7(const nlohmann::json& c, double alpha) {
    const auto& c3 = c.at("claim3");
    const int exited = c3.at("exited").get<int>();
    const double slope = c3.at("slope").is_number() ? c3.at("slope").get<double>() : NAN;
    return {exited >= 4 && std::abs(slope - (alpha - 1.0)) <= 0.2,
            std::to_string(exited) + " bubbles with exit times (need >= 4), slope " + fmt(slope) + " vs " +
                fmt(alpha - 1.0)};
}

Outcome criterion8(const nlohmann::json& c, const nlohmann::json& summary) {
    bool squeeze = true;
    for (const auto& b : c.at("squeezing")) squeeze = squeeze && b.at("strictly_decreasing").get<bool>();
    const bool mono = c.at("growth").at("nondecreasing_in_n").get<bool>();
    const auto& c0 = c.at("growth").at("c0_emp");
    const bool c0pos = c0.is_number() && c0.get<double>() > 0.0;
    const double gf = summary.at("growth_factor").get<double>();
    return {squeeze && mono && c0pos && gf >= 1.5,
            std::string("squeezing ") + (squeeze ? "yes" : "no") + ", growth ratio nondecreasing " +
                (mono ? "yes" : "no") + ", c0_emp " + (c0.is_number() ? fmt(c0.get<double>()) : "n/a") +
                ", Hdot2 growth " + fmt(gf) + "x (" + summary.at("stop_reason").get<std::string>() + ")"};
}

Outcome criterion9(const nlohmann::json& c) {
    const auto& t = c.at("transport");
    const double frac = t.at("fraction").get<double>();
    std::string per;
    for (const auto& b : t.at("per_bubble")) per += " n=" + std::to_string(b.at("n").get<int>()) + ":" + fmt(b.at("fraction").get<double>());
    return {frac >= 0.95, fmt(100 * frac) + "% of " + std::to_string(t.at("interior_markers").get<int>()) +
                              " interior markers within 2% (per bubble" + per + ")"};
}

Outcome criterion10(const fs::path& a, const fs::path& b) {
    int files = 0, differ = 0;
    std::string first;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        const auto ext = e.path().extension();
        if (!e.is_regular_file() || (ext != ".csv" && ext != ".json")) continue;
        const fs::path rel = fs::relative(e.path(), a);
        ++files;
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        if (!fs::exists(b / rel) || slurp(e.path()) != slurp(b / rel)) {
            ++differ;
            if (first.empty()) first = rel.string();
        }
    }
    return {files > 0 && differ == 0, std::to_string(files) + " CSV/JSON artifacts compared, " +
                                          std::to_string(differ) + " differ" + (first.empty() ? "" : " (" + first + ")")};
}

int run_cli(const std::string& sqglab, const fs::path& config, const fs::path& out) {
    for (const char* st : {"gen-data", "verify-kernel", "verify-lemmas", "evolve", "trace", "report"}) {
        const std::string cmd = "\"" + sqglab + "\" " + st + " --config \"" + config.string() + "\" --out \"" +
                                out.string() + "\"";
        std::fprintf(stderr, "[acceptance] %s\n", cmd.c_str());
        const int rc = std::system(cmd.c_str());
        if (rc != 0) return rc;
    }
    return 0;
}

bool complete(const fs::path& run) {
    const fs::path m = run / "manifest.json";
    return fs::exists(m) && read_json(m.string())["stages"].contains("report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string config, sqglab, workdir;
    std::vector<int> known;
    bool reuse = false;
    app.add_option("--config", config, "default experiment config")->required()->check(CLI::ExistingFile);
    app.add_option("--sqglab", sqglab, "sqglab executable")->required()->check(CLI::ExistingFile);
    app.add_option("--workdir", workdir, "directory for the two end-to-end runs")->required();
    app.add_option("--known-failure", known, "criteria documented as unattainable at this scale");
    app.add_flag("--reuse", reuse, "keep completed runs found in the work directory");
    CLI11_PARSE(app, argc, argv);
    g_known.insert(known.begin(), known.end());

    const ExperimentConfig cfg = ExperimentConfig::load(config);
    const unsigned long long seed = cfg.seed;

    criterion(1, "velocity oracle equivalence", [&] { return criterion1(seed); });
    criterion(2, "Hardy inequalities", [&] { return criterion2(seed); });
    criterion(3, "key lemma residual refinement stability", [&] { return criterion3(seed); });
    criterion(5, "steady state under the Euler multiplier", [&] { return criterion5(); });

    const fs::path a = fs::path(workdir) / "run_a", b = fs::path(workdir) / "run_b";
    int rc_a = 0, rc_b = 0;
    for (auto [dir, rc] : {std::pair{a, &rc_a}, std::pair{b, &rc_b}}) {
        if (reuse && complete(dir)) {
            std::fprintf(stderr, "[acceptance] reusing %s\n", dir.c_str());
            continue;
        }
        fs::remove_all(dir);
        *rc = run_cli(sqglab, config, dir);
    }
    nlohmann::json claims, summary;
    try {
        claims = read_json((a / "claims.json").string());
        summary = read_json((a / "summary.json").string());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "[acceptance] run artifacts unavailable: %s\n", e.what());
    }
    auto need = [&](const char* what) {
        if (rc_a != 0) throw std::runtime_error("sqglab run failed with status " + std::to_string(rc_a));
        if (claims.is_null()) throw std::runtime_error(std::string(what) + " missing");
    };
    criterion(4, "conservation under evolution", [&] { return criterion4(a); });
    criterion(6, "Claim I ordering window", [&] {
        need("claims.json");
        return criterion6(claims);
    });
    criterion(7, "almost-invariance timescale scaling", [&] {
        need("claims.json");
        return criterion7(claims, cfg.data.alpha);
    });
    criterion(8, "squeezing and growth trend", [&] {
        need("claims.json");
        return criterion8(claims, summary);
    });
    criterion(9, "transport representation", [&] {
        need("claims.json");
        return criterion9(claims);
    });
    criterion(10, "determinism", [&] {
        if (rc_a != 0 || rc_b != 0) throw std::runtime_error("a sqglab run failed");
        return criterion10(a, b);
    });
    return g_unexpected == 0 ? 0 : 1;
}
