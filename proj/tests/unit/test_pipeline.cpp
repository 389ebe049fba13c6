#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pipeline.hpp"
#include "sqg/io.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

// Two bubbles at 256^2: the smallest has 8 points across.
ExperimentConfig small_config(const fs::path& out) {
    ExperimentConfig c = ExperimentConfig::load(SQG_DEFAULT_CONFIG);
    c.data.N = 4;
    c.resolution = 256;
    c.evolution.t_end = 0.01;
    c.evolution.snapshot_stride = 2;
    c.kernel.probes = 4;
    c.probes.count = 8;
    c.hardy.count = 5;
    c.report.loglip_pairs = 100;
    c.output = out.string();
    c.validate();
    return c;
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("sqg_pipeline_" + name);
    fs::remove_all(p);
    return p;
}

void run_all(const ExperimentConfig& c) {
    const fs::path out = c.output;
    lab::gen_data(c, out);
    lab::verify_kernel(c, out);
    lab::verify_lemmas(c, out);
    lab::evolve(c, out);
    lab::trace(c, out);
    lab::report(c, out);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Pipeline, EndToEndIsDeterministic) {
    const ExperimentConfig a = small_config(fresh("a")), b = small_config(fresh("b"));
    run_all(a);
    run_all(b);
    int compared = 0;
    for (const auto& e : fs::recursive_directory_iterator(a.output)) {
        if (!e.is_regular_file()) continue;
        const fs::path rel = fs::relative(e.path(), a.output);
        EXPECT_EQ(slurp(e.path()), slurp(fs::path(b.output) / rel)) << rel;
        ++compared;
    }
    EXPECT_GT(compared, 20);
    const auto m = read_json((fs::path(a.output) / "manifest.json").string());
    for (const char* st : {"gen-data", "verify-kernel", "verify-lemmas", "evolve", "trace", "report"})
        EXPECT_TRUE(m["stages"].contains(st)) << st;
    for (const auto& [st, rec] : m["stages"].items())
        for (const auto& [file, h] : rec["outputs"].items())
            EXPECT_EQ(h.get<std::string>(), git_blob_hash_file((fs::path(a.output) / file).string())) << st << " " << file;
    EXPECT_EQ(slurp(fs::path(a.output) / "manifest.json").find(a.output), std::string::npos);
}

TEST(Pipeline, RefusesForeignManifest) {
    const ExperimentConfig a = small_config(fresh("foreign"));
    lab::gen_data(a, a.output);
    ExperimentConfig b = a;
    b.seed += 1;
    EXPECT_THROW(lab::gen_data(b, b.output), ValidationError);
}

TEST(Pipeline, StagesNeedTheirInputs) {
    const ExperimentConfig a = small_config(fresh("order"));
    EXPECT_THROW(lab::trace(a, a.output), ValidationError);
    EXPECT_THROW(lab::report(a, a.output), ValidationError);
}

TEST(Pipeline, LockIsExclusive) {
    const fs::path d = fresh("lock");
    lab::DirLock first(d);
    EXPECT_THROW(lab::DirLock second(d), ValidationError);
}

TEST(Pipeline, TamperedDataIsRefused) {
    const ExperimentConfig a = small_config(fresh("tamper"));
    lab::gen_data(a, a.output);
    std::ofstream(fs::path(a.output) / "data.sqgf", std::ios::app) << "x";
    EXPECT_THROW(lab::verify_kernel(a, a.output), ValidationError);
}

TEST(Pipeline, ExitCodes) {
    EXPECT_EQ(lab::exit_code_for(ValidationError("x")), 1);
    EXPECT_EQ(lab::exit_code_for(NumericalError("x")), 2);
    EXPECT_EQ(lab::exit_code_for(ClaimViolation("x")), 3);
}
