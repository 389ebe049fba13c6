#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

#include "pipeline.hpp"

using namespace sqg;

int main(int argc, char** argv) {
    CLI::App app{"sqglab: generalized SQG bubble experiments"};
    app.require_subcommand(1);

    std::string config, out;
    std::optional<unsigned long long> seed;
    using Stage = std::function<int(const ExperimentConfig&, const lab::fs::path&)>;
    const std::map<std::string, std::pair<Stage, const char*>> stages{
        {"gen-data", {lab::gen_data, "build the bubble initial datum"}},
        {"verify-kernel", {lab::verify_kernel, "compare spectral and direct-kernel velocities"}},
        {"verify-lemmas", {lab::verify_lemmas, "key lemma residual ratios and the Hardy suite"}},
        {"evolve", {lab::evolve, "integrate and write snapshots"}},
        {"trace", {lab::trace, "advect markers through the snapshots and check the claims"}},
        {"report", {lab::report, "norm inflation summary and tables"}},
    };
    for (const auto& [name, st] : stages) {
        auto* sub = app.add_subcommand(name, st.second);
        sub->add_option("--config", config, "experiment config (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--out", out, "run directory (defaults to the config's output)");
        sub->add_option("--seed", seed, "override the config seed");
    }
    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        ExperimentConfig cfg;
        if (!config.empty()) {
            cfg = ExperimentConfig::load(config);
            if (!out.empty()) cfg.output = out;
        } else if (!out.empty() && name == "report") {
            cfg = lab::config_from_run(out);
        } else {
            throw ValidationError("--config is required");
        }
        if (seed) {
            cfg.seed = *seed;
            cfg.claims.seed = *seed;
        }
        return stages.at(name).first(cfg, cfg.output);
    } catch (const std::exception& e) {
        std::cerr << "sqglab " << name << ": " << e.what() << std::endl;
        return lab::exit_code_for(e);
    }
}
