#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

#include "sqg/config.hpp"

namespace sqg::lab {

namespace fs = std::filesystem;

extern const char* const kCodeVersion;

// Exclusive lock on an output directory, released on destruction.
class DirLock {
public:
    explicit DirLock(const fs::path& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    fs::path path_;
};

// manifest.json binds the directory to one config, code version and data.
class Manifest {
public:
    Manifest(const fs::path& dir, const ExperimentConfig& cfg);
    void require_stage(const std::string& stage) const;
    void record(const std::string& stage, const nlohmann::json& outputs);
    void set_data_hash(const std::string& h);
    const nlohmann::json& json() const { return j_; }

private:
    fs::path path_;
    nlohmann::json j_;
    void save() const;
};

int gen_data(const ExperimentConfig& cfg, const fs::path& out);
int verify_kernel(const ExperimentConfig& cfg, const fs::path& out);
int verify_lemmas(const ExperimentConfig& cfg, const fs::path& out);
int evolve(const ExperimentConfig& cfg, const fs::path& out);
int trace(const ExperimentConfig& cfg, const fs::path& out);
int report(const ExperimentConfig& cfg, const fs::path& out);

// Config stored in a run directory's manifest.
ExperimentConfig config_from_run(const fs::path& out);

// Error type to exit code: 1 validation, 2 numerical, 3 claim violation.
int exit_code_for(const std::exception& e);

}  // namespace sqg::lab
