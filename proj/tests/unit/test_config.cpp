#include <gtest/gtest.h>

#include "sqg/config.hpp"

#ifndef SQG_DEFAULT_CONFIG
#error "SQG_DEFAULT_CONFIG must point at configs/default.json"
#endif

using namespace sqg;

TEST(Config, DefaultLoads) {
    const ExperimentConfig c = ExperimentConfig::load(SQG_DEFAULT_CONFIG);
    EXPECT_EQ(c.data.N, 5);
    EXPECT_EQ(c.resolution, 4096);
    EXPECT_EQ(ExperimentConfig::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(Config, ListsEveryMissingField) {
    nlohmann::json j = ExperimentConfig::load(SQG_DEFAULT_CONFIG).to_json();
    j["data"].erase("alpha");
    j["evolution"].erase("t_end");
    j["seed"] = "abc";
    try {
        ExperimentConfig::from_json(j);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        const std::string m = e.what();
        EXPECT_NE(m.find("/data/alpha"), std::string::npos);
        EXPECT_NE(m.find("/evolution/t_end"), std::string::npos);
        EXPECT_NE(m.find("/seed"), std::string::npos);
    }
}

TEST(Config, SemanticChecks) {
    nlohmann::json j = ExperimentConfig::load(SQG_DEFAULT_CONFIG).to_json();
    j["grid"]["resolution"] = 512;
    EXPECT_THROW(ExperimentConfig::from_json(j), ValidationError);
    j = ExperimentConfig::load(SQG_DEFAULT_CONFIG).to_json();
    j["multiplier"]["alpha"] = 0.5;
    EXPECT_THROW(ExperimentConfig::from_json(j), ValidationError);
}

TEST(Config, HashIgnoresOutputOnly) {
    ExperimentConfig a = ExperimentConfig::load(SQG_DEFAULT_CONFIG);
    ExperimentConfig b = a;
    b.output = "elsewhere";
    EXPECT_EQ(a.hash(), b.hash());
    b.seed += 1;
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_EQ(a.hash().size(), 40u);
}
