#include "pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sqg/container.hpp"
#include "sqg/diagnostics.hpp"
#include "sqg/direct_kernel.hpp"
#include "sqg/io.hpp"

#ifndef SQG_VERSION
#define SQG_VERSION "unknown"
#endif

namespace sqg::lab {

const char* const kCodeVersion = SQG_VERSION;

namespace {

void log(const std::string& msg) { std::cerr << "[sqglab] " << msg << std::endl; }

std::string hash_of(const fs::path& p) { return git_blob_hash_file(p.string()); }

nlohmann::json hashes(const fs::path& dir, std::initializer_list<const char*> files) {
    nlohmann::json j = nlohmann::json::object();
    for (const char* f : files) j[f] = hash_of(dir / f);
    return j;
}

nlohmann::json vec(Vec2 v) { return nlohmann::json::array({v.x1, v.x2}); }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return int(i);
        throw ValidationError("column " + name + " missing");
    }
};

Table read_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ValidationError("cannot read " + p.string());
    Table t;
    std::string line;
    std::getline(in, line);
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) t.header.push_back(c);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) row.push_back(std::stod(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Data field of the run, written on first use and checked against the
// manifest afterwards.
ScalarField ensure_data(const ExperimentConfig& cfg, const fs::path& out, Manifest& man) {
    const fs::path p = out / "data.sqgf";
    const auto& j = man.json();
    if (fs::exists(p)) {
        const std::string h = hash_of(p);
        if (j.contains("data_hash") && j["data_hash"] != h)
            throw ValidationError("data.sqgf does not match the manifest data hash");
        if (!j.contains("data_hash")) man.set_data_hash(h);
        return unpack_field(read_container(p.string()));
    }
    ScalarField f = assemble_data(cfg.data, Grid(cfg.resolution));
    write_container(p.string(), pack_field(f));
    const std::string h = hash_of(p);
    if (j.contains("data_hash") && j["data_hash"] != h)
        throw ValidationError("regenerated data does not match the manifest data hash");
    man.set_data_hash(h);
    return f;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return 1;
    if (dynamic_cast<const ClaimViolation*>(&e)) return 3;
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 1;
    return 2;
}

DirLock::DirLock(const fs::path& dir) : path_(dir / ".lock") {
    fs::create_directories(dir);
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST)
            throw ValidationError("output directory " + dir.string() + " is locked by another run (" +
                                  path_.string() + ")");
        throw ValidationError("cannot lock " + dir.string() + ": " + std::strerror(errno));
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    if (::write(fd, pid.data(), pid.size()) < 0) { /* the lock still holds */ }
    ::close(fd);
}

DirLock::~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

Manifest::Manifest(const fs::path& dir, const ExperimentConfig& cfg) : path_(dir / "manifest.json") {
    nlohmann::json conf = cfg.to_json();
    conf.erase("output");
    if (fs::exists(path_)) {
        j_ = read_json(path_.string());
        if (j_.value("config_hash", "") != cfg.hash())
            throw ValidationError("manifest in " + dir.string() +
                                  " was written for a different config; refusing to resume");
        if (j_.value("code_version", "") != kCodeVersion)
            throw ValidationError("manifest in " + dir.string() + " was written by code version " +
                                  j_.value("code_version", "?") + "; refusing to resume");
        return;
    }
    j_ = {{"code_version", kCodeVersion}, {"config_hash", cfg.hash()}, {"config", conf},
          {"stages", nlohmann::json::object()}};
    save();
}

void Manifest::require_stage(const std::string& stage) const {
    if (!j_["stages"].contains(stage)) throw ValidationError("run directory has no completed '" + stage + "' stage");
}

void Manifest::record(const std::string& stage, const nlohmann::json& outputs) {
    j_["stages"][stage] = {{"outputs", outputs}};
    save();
}

void Manifest::set_data_hash(const std::string& h) {
    j_["data_hash"] = h;
    save();
}

void Manifest::save() const { write_json(path_.string(), j_); }

ExperimentConfig config_from_run(const fs::path& out) {
    const fs::path p = out / "manifest.json";
    if (!fs::exists(p)) throw ValidationError("no manifest.json in " + out.string());
    nlohmann::json c = read_json(p.string()).at("config");
    c["output"] = out.string();
    return ExperimentConfig::from_json(c);
}

// ---- gen-data -----------------------------------------------------------------

int gen_data(const ExperimentConfig& cfg, const fs::path& out) {
    DirLock lock(out);
    Manifest man(out, cfg);
    const ScalarField f = ensure_data(cfg, out, man);
    const Grid g(cfg.resolution);

    const OrderingReport ord = verify_initial_ordering(cfg.data);
    write_json((out / "ordering.json").string(), ord.to_json());

    const auto bubbles = make_bubbles(cfg.data);
    const auto inc = bubble_h2_increments(cfg.data, g);
    const Spectrum s = forward_transform(f);
    nlohmann::json bj = nlohmann::json::array();
    for (std::size_t i = 0; i < bubbles.size(); ++i) {
        const auto& b = bubbles[i];
        bj.push_back({{"n", b.n},
                      {"level", b.level},
                      {"center", vec(b.center)},
                      {"support_radius", b.support_radius},
                      {"core_radius", b.core_radius},
                      {"amplitude", b.amplitude},
                      {"hdot2_squared", inc[i]}});
    }
    const auto [linf, grad] = winfty_norm(s);
    write_json((out / "data.json").string(),
               {{"resolution", cfg.resolution},
                {"bubbles", bj},
                {"points_across_smallest", points_across_smallest(cfg.data, g)},
                {"axis_margin", f.axis_margin},
                {"l2", sobolev_norm(s, 0.0)},
                {"hdot2", sobolev_norm(s, 2.0)},
                {"hdot2_dealiased", sobolev_norm(dealias(s), 2.0)},
                {"linf", linf},
                {"grad_inf", grad}});
    man.record("gen-data", hashes(out, {"data.sqgf", "ordering.json", "data.json"}));
    log("gen-data: " + std::to_string(bubbles.size()) + " bubbles at " + std::to_string(cfg.resolution) + "^2");
    return 0;
}

// ---- verify-kernel --------------------------------------------------------------

int verify_kernel(const ExperimentConfig& cfg, const fs::path& out) {
    DirLock lock(out);
    Manifest man(out, cfg);
    const ScalarField f = ensure_data(cfg, out, man);
    const Grid& g = f.grid;
    const Spectrum s = forward_transform(f);
    const TrigVelocity spectral(s, cfg.multiplier);
    const DirectKernel direct(f);

    ProbePolicy pol;
    pol.count = cfg.kernel.probes;
    pol.off_support_fraction = 0.25;
    pol.min_cells = cfg.kernel.exclusion_cells;
    const auto sampled = sample_probes(make_bubbles(cfg.data), g, pol, cfg.seed);
    std::vector<KernelProbe> probes;
    for (const auto& p : sampled) probes.push_back({p.x, cfg.kernel.image_radius, cfg.kernel.exclusion_cells});
    const auto res = direct.velocity(probes);

    CsvWriter csv((out / "kernel_check.csv").string(),
                  {"probe", "x1", "x2", "u1_spectral", "u2_spectral", "u1_direct", "u2_direct", "abs_error",
                   "near1", "near2", "tail_bound", "excluded_mass"});
    double err = 0.0, scale = 0.0, dot = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const Vec2 us = spectral.velocity(0.0, probes[i].x);
        const Vec2 ud = res[i].u;
        const double e = (ud - us).norm();
        err = std::max(err, e);
        scale = std::max(scale, us.norm());
        dot += ud.x1 * us.x1 + ud.x2 * us.x2;
        norm2 += us.x1 * us.x1 + us.x2 * us.x2;
        csv << int(i) << probes[i].x.x1 << probes[i].x.x2 << us.x1 << us.x2 << ud.x1 << ud.x2 << e
            << res[i].near.x1 << res[i].near.x2 << res[i].tail_bound << res[i].excluded_mass;
        csv.end_row();
    }
    csv.close();
    const double rel = scale > 0 ? err / scale : 0.0;
    const double norm_est = norm2 > 0 ? cfg.multiplier.normalization * dot / norm2 : 0.0;
    write_json((out / "kernel_check.json").string(),
               {{"probes", probes.size()},
                {"relative_linf_error", rel},
                {"tolerance", 1e-3},
                {"pass", rel < 1e-3},
                {"normalization_configured", cfg.multiplier.normalization},
                {"normalization_fitted", norm_est},
                {"normalization_over_2pi", norm_est / (2.0 * M_PI)}});
    man.record("verify-kernel", hashes(out, {"kernel_check.csv", "kernel_check.json"}));
    log("verify-kernel: relative L_inf error " + format_double(rel));
    return 0;
}

// ---- verify-lemmas --------------------------------------------------------------

int verify_lemmas(const ExperimentConfig& cfg, const fs::path& out) {
    DirLock lock(out);
    Manifest man(out, cfg);
    const ScalarField f = ensure_data(cfg, out, man);
    const KeyLemmaContext ctx(f, cfg.lemma_image_radius);
    const auto sampled = sample_probes(make_bubbles(cfg.data), f.grid, cfg.probes, cfg.seed);
    std::vector<Vec2> xs;
    for (const auto& p : sampled) xs.push_back(p.x);
    const auto reps = ctx.evaluate(xs);

    CsvWriter csv((out / "lemma_probes.csv").string(),
                  {"probe", "bubble_n", "sampled_off_support", "x1", "x2", "leading", "u1", "u2", "res1", "res2",
                   "hess_l2", "theta_inf", "grad_inf", "grad_l2_R", "y2inv_d1_l2_R", "hess_l2_R", "grad_inf_R",
                   "logfac", "ratio1", "ratio2", "ratio2_hess", "ratio1_lip", "ratio2_lip", "clipped",
                   "theta_zero_on_R", "tail_bound"});
    const auto bubbles = make_bubbles(cfg.data);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& r = reps[i];
        csv << int(i) << bubbles[sampled[i].bubble].n << int(sampled[i].off_support) << r.x.x1 << r.x.x2
            << r.leading << r.u.x1 << r.u.x2 << r.res1 << r.res2 << r.norms.hess_l2 << r.norms.theta_inf
            << r.norms.grad_inf << r.norms.grad_l2_R << r.norms.y2inv_d1_l2_R << r.norms.hess_l2_R
            << r.norms.grad_inf_R << r.logfac << r.ratio1 << r.ratio2 << r.ratio2_hess << r.ratio1_lip
            << r.ratio2_lip << int(r.clipped) << int(r.theta_zero_on_R) << r.tail_bound;
        csv.end_row();
    }
    csv.close();
    const LemmaSummary sum = summarize(reps);
    const HardySuite hardy = run_hardy_suite(cfg.hardy.count, cfg.hardy.lengths, cfg.hardy.terms, cfg.seed);
    write_json((out / "lemma_summary.json").string(),
               {{"resolution", cfg.resolution}, {"key_lemma", sum.to_json()}, {"hardy", hardy.to_json()}});
    man.record("verify-lemmas", hashes(out, {"lemma_probes.csv", "lemma_summary.json"}));
    log("verify-lemmas: max ratio1 " + format_double(sum.max_ratio1) + ", max ratio2 " +
        format_double(sum.max_ratio2) + ", Hardy violations " +
        std::to_string(hardy.violations1 + hardy.violations2));
    return 0;
}

// ---- evolve ---------------------------------------------------------------------

namespace {

const std::vector<std::string> kDiagColumns{"step", "t",    "dt",       "l2",   "linf", "min_value",
                                            "hdot2", "h2",  "grad_inf", "tail_fraction", "umax",
                                            "div_residual"};

}  // namespace

int evolve(const ExperimentConfig& cfg, const fs::path& out) {
    DirLock lock(out);
    Manifest man(out, cfg);
    const ScalarField f = ensure_data(cfg, out, man);
    const fs::path snapdir = out / "snapshots";
    fs::remove_all(snapdir);
    fs::create_directories(snapdir);
    const int block = cfg.evolution.dealias ? f.grid.max_retained() : 0;

    nlohmann::json snaps = nlohmann::json::array();
    auto observer = [&](long long step, double t, const Spectrum& s) {
        char name[64];
        std::snprintf(name, sizeof name, "snap_%06zu.sqgf", snaps.size());
        write_container((snapdir / name).string(), pack_spectrum(s, cfg.multiplier, block));
        snaps.push_back({{"index", snaps.size()}, {"step", step}, {"t", t}, {"file", std::string("snapshots/") + name}});
        if (snaps.size() % 100 == 0) log("evolve: t = " + format_double(t) + " step " + std::to_string(step));
    };
    std::optional<RunResult> run_out;
    try {
        run_out.emplace(run(f, cfg.evolution, observer));
    } catch (const EvolutionAborted& e) {
        write_container((out / "abort_state.sqgf").string(), pack_spectrum(e.last_good, cfg.multiplier));
        throw;
    }
    const RunResult& res = *run_out;

    CsvWriter csv((out / "diagnostics.csv").string(), kDiagColumns);
    double M = 0.0;
    for (const auto& r : res.records) {
        csv << r.step << r.t << r.dt << r.l2 << r.linf << r.min_value << r.hdot2 << r.h2 << r.grad_inf
            << r.tail_fraction << r.umax << r.div_residual;
        csv.end_row();
        M = std::max(M, r.hdot2);
    }
    csv.close();
    double div = 0.0;
    for (const auto& r : res.records) div = std::max(div, r.div_residual);
    write_json((out / "evolution.json").string(),
               {{"stop_reason", to_string(res.stop)},
                {"steps", res.steps},
                {"t_final", res.t},
                {"M", M},
                {"hdot2_initial", res.records.front().hdot2},
                {"max_div_residual", div},
                {"snapshot_block", block},
                {"snapshots", snaps}});
    man.record("evolve", hashes(out, {"diagnostics.csv", "evolution.json"}));
    log("evolve: stop " + to_string(res.stop) + " at t = " + format_double(res.t) + " after " +
        std::to_string(res.steps) + " steps");
    return 0;
}

// ---- trace ----------------------------------------------------------------------

int trace(const ExperimentConfig& cfg, const fs::path& out) {
    DirLock lock(out);
    Manifest man(out, cfg);
    man.require_stage("evolve");
    const nlohmann::json ev = read_json((out / "evolution.json").string());
    const double M = ev.at("M").get<double>();
    const auto bubbles = make_bubbles(cfg.data);
    StreamingTracer tracer(seed_markers(bubbles, cfg.tracker.seeding), cfg.multiplier, cfg.tracker.substeps,
                           cfg.tracker.transport_check_stride);
    const auto& snaps = ev.at("snapshots");
    try {
        for (std::size_t i = 0; i < snaps.size(); ++i) {
            const Spectrum s = unpack_spectrum(read_container((out / snaps[i].at("file").get<std::string>()).string()));
            tracer.push(snaps[i].at("t").get<double>(), s);
            if ((i + 1) % 100 == 0) log("trace: " + std::to_string(i + 1) + "/" + std::to_string(snaps.size()));
        }
        tracer.finish();
    } catch (const ClaimViolation& e) {
        write_json((out / "claims.json").string(), {{"hard_violation", e.what()}});
        throw;
    }
    const TrackSeries& series = tracer.series();
    const auto& markers = series.initial.markers;

    {
        CsvWriter csv((out / "trajectories.csv").string(), {"t", "n", "label", "kind", "phi1", "phi2"});
        for (std::size_t i = 0; i < series.samples.size(); ++i) {
            if (i % cfg.tracker.trajectory_stride != 0 && i + 1 != series.samples.size()) continue;
            const auto& smp = series.samples[i];
            for (std::size_t k = 0; k < markers.size(); ++k) {
                csv << smp.t << bubbles[markers[k].bubble].n << markers[k].label
                    << std::string(to_string(markers[k].kind)) << smp.pos[k].x1 << smp.pos[k].x2;
                csv.end_row();
            }
        }
    }
    {
        CsvWriter csv((out / "bubble_stats.csv").string(),
                      {"t", "n", "sup1", "inf1", "sup2", "sup1_support", "inf1_support", "interaction", "core_area",
                       "exit_radius", "interp_error"});
        for (const auto& smp : series.samples)
            for (const auto& st : smp.stats) {
                csv << smp.t << st.n << st.sup1 << st.inf1 << st.sup2 << st.sup1_support << st.inf1_support
                    << st.interaction << st.core_area << st.exit_radius << smp.interp_error;
                csv.end_row();
            }
    }
    {
        // support rings at a couple dozen times, for the per-bubble Hdot2 split
        nlohmann::json win = nlohmann::json::array();
        const std::size_t ns = series.samples.size();
        const std::size_t stride = std::max<std::size_t>(1, ns / 24);
        for (std::size_t i = 0; i < ns; ++i) {
            if (i % stride != 0 && i + 1 != ns) continue;
            nlohmann::json rings = nlohmann::json::array();
            for (std::size_t b = 0; b < bubbles.size(); ++b) {
                nlohmann::json pts = nlohmann::json::array();
                for (std::size_t k = 0; k < markers.size(); ++k)
                    if (markers[k].bubble == int(b) && markers[k].kind == MarkerKind::Support)
                        pts.push_back(vec(series.samples[i].pos[k]));
                rings.push_back({{"n", bubbles[b].n}, {"ring", pts}});
            }
            win.push_back({{"sample", i}, {"t", series.samples[i].t}, {"rings", rings}});
        }
        write_json((out / "windows.json").string(), win);
    }

    nlohmann::json claims = analyze_claims(series, cfg.data, M, cfg.claims);
    std::string hard;
    if (!claims["claim1"]["holds_at_t0"].get<bool>()) hard = "Claim I fails at t = 0";
    if (!claims["interaction"]["nonnegative"].get<bool>()) hard = "negative interaction integral";
    if (!hard.empty()) claims["hard_violation"] = hard;
    write_json((out / "claims.json").string(), claims);
    man.record("trace", hashes(out, {"trajectories.csv", "bubble_stats.csv", "windows.json", "claims.json"}));
    if (!hard.empty()) throw ClaimViolation(hard);
    log("trace: " + std::to_string(series.samples.size()) + " samples, " + std::to_string(markers.size()) +
        " markers");
    return 0;
}

// ---- report ---------------------------------------------------------------------

int report(const ExperimentConfig& cfg, const fs::path& out) {
    DirLock lock(out);
    Manifest man(out, cfg);
    man.require_stage("trace");
    const nlohmann::json ev = read_json((out / "evolution.json").string());
    const nlohmann::json claims = read_json((out / "claims.json").string());
    const nlohmann::json windows = read_json((out / "windows.json").string());
    const Table diag = read_csv(out / "diagnostics.csv");

    std::vector<DiagnosticsRecord> recs;
    for (const auto& row : diag.rows) {
        DiagnosticsRecord r;
        r.step = static_cast<long long>(row[diag.col("step")]);
        r.t = row[diag.col("t")];
        r.l2 = row[diag.col("l2")];
        r.linf = row[diag.col("linf")];
        r.hdot2 = row[diag.col("hdot2")];
        r.grad_inf = row[diag.col("grad_inf")];
        recs.push_back(r);
    }
    std::optional<double> c0;
    if (claims.contains("growth") && claims["growth"]["c0_emp"].is_number()) c0 = claims["growth"]["c0_emp"].get<double>();
    const InflationSummary inf = inflation_summary(recs, cfg.data.N, cfg.data.n0, cfg.data.alpha, c0,
                                                   cfg.report.inflation_factor, ev.at("stop_reason"));
    {
        CsvWriter csv((out / "norms.csv").string(), {"t", "hdot2", "grad_inf", "l2", "linf"});
        for (const auto& r : recs) {
            csv << r.t << r.hdot2 << r.grad_inf << r.l2 << r.linf;
            csv.end_row();
        }
    }

    const auto bubbles = make_bubbles(cfg.data);
    const auto& snaps = ev.at("snapshots");
    CsvWriter h2csv((out / "h2_partition.csv").string(),
                    {"t", "n", "contribution", "total", "captured", "overlap"});
    CsvWriter llcsv((out / "loglip.csv").string(), {"t", "modulus", "hdot2", "ratio", "worst_separation"});
    double max_ratio = 0.0, worst_capture = 1.0;
    double h2_t0_dev = 0.0;
    for (const auto& w : windows) {
        const std::size_t idx = w.at("sample").get<std::size_t>();
        const double t = w.at("t").get<double>();
        const Spectrum s = unpack_spectrum(read_container((out / snaps[idx].at("file").get<std::string>()).string()));
        std::vector<BubbleWindow> wins;
        for (std::size_t b = 0; b < bubbles.size(); ++b) {
            BubbleWindow bw;
            bw.n = bubbles[b].n;
            bw.margin = cfg.report.window_margin * bubbles[b].support_radius;
            for (const auto& p : w.at("rings")[b].at("ring")) bw.ring.push_back({p[0].get<double>(), p[1].get<double>()});
            wins.push_back(std::move(bw));
        }
        try {
            const H2Partition part = per_bubble_h2(s, wins);
            worst_capture = std::min(worst_capture, part.captured);
            for (std::size_t b = 0; b < part.n.size(); ++b) {
                h2csv << t << part.n[b] << part.contribution[b] << part.total << part.captured << 0;
                h2csv.end_row();
            }
            if (idx == 0) {
                const auto inc = bubble_h2_increments(cfg.data, s.grid);
                for (std::size_t b = 0; b < inc.size(); ++b)
                    h2_t0_dev = std::max(h2_t0_dev, std::abs(part.contribution[b] / inc[b] - 1.0));
            }
        } catch (const ValidationError&) {
            h2csv << t << 0 << 0.0 << 0.0 << 0.0 << 1;
            h2csv.end_row();
        }
        const GridVelocity gv(s, cfg.multiplier);
        const double h = s.grid.spacing();
        const LogLipschitz ll = log_lipschitz_modulus([&](Vec2 x) { return gv(x); }, h, 0.5, cfg.report.loglip_pairs,
                                                      h, 0.25, cfg.seed + idx);
        const double hd = sobolev_norm(s, 2.0);
        const double ratio = hd > 0 ? ll.modulus / hd : 0.0;
        max_ratio = std::max(max_ratio, ratio);
        llcsv << t << ll.modulus << hd << ratio << ll.worst_separation;
        llcsv.end_row();
    }
    h2csv.close();
    llcsv.close();

    {
        CsvWriter csv((out / "exit_times.csv").string(), {"n", "exit_time", "n_pow_alpha_minus_1"});
        for (const auto& e : claims["claim3"]["per_bubble"]) {
            csv << e["n"].get<int>() << (e["exit_time"].is_number() ? e["exit_time"].get<double>() : NAN)
                << std::pow(e["n"].get<double>(), cfg.data.alpha - 1.0);
            csv.end_row();
        }
    }
    {
        CsvWriter csv((out / "growth.csv").string(), {"n", "ratio"});
        for (const auto& e : claims["growth"]["ratios"]) {
            csv << e["n"].get<int>() << e["ratio"].get<double>();
            csv.end_row();
        }
    }
    nlohmann::json summary = inf.to_json();
    summary["h2_partition"] = {{"worst_captured", worst_capture}, {"t0_max_relative_deviation", h2_t0_dev}};
    summary["log_lipschitz"] = {{"max_modulus_over_hdot2", max_ratio}};
    write_json((out / "summary.json").string(), summary);
    man.record("report", hashes(out, {"summary.json", "norms.csv", "h2_partition.csv", "loglip.csv", "exit_times.csv",
                                      "growth.csv"}));
    log("report: Hdot2 growth factor " + format_double(inf.growth_factor));
    return 0;
}

}  // namespace sqg::lab
