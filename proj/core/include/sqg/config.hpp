#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "sqg/bubbles.hpp"
#include "sqg/evolution.hpp"
#include "sqg/key_lemma.hpp"
#include "sqg/lagrangian.hpp"

namespace sqg {

struct KernelCheckConfig {
    int probes = 20;
    int image_radius = 8;
    double exclusion_cells = 8.0;
};

struct TrackerConfig {
    MarkerSeeding seeding;
    int substeps = 2;
    int transport_check_stride = 8;  // in tracked samples
    int trajectory_stride = 4;       // rows written to trajectories.csv
};

struct HardyConfig {
    int count = 100;
    std::vector<double> lengths{0.25, 0.5, 1.0};
    int terms = 8;
};

struct ReportConfig {
    double inflation_factor = 1.5;
    double window_margin = 0.25;  // per-bubble Hdot2 window margin, in support radii
    int loglip_pairs = 2000;
};

struct ExperimentConfig {
    DataSpec data;
    int resolution = 1024;
    MultiplierSpec multiplier;
    EvolutionConfig evolution;
    KernelCheckConfig kernel;
    ProbePolicy probes;
    int lemma_image_radius = 8;
    TrackerConfig tracker;
    ClaimsConfig claims;
    HardyConfig hardy;
    ReportConfig report;
    unsigned long long seed = 0;
    std::string output;

    // Throws ValidationError naming every missing or mistyped field path,
    // then the first semantic inconsistency.
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;
    void validate() const;
    // Content hash of the canonical JSON form.
    std::string hash() const;
};

}  // namespace sqg
