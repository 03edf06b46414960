// Copyright 2026 The qref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "test_util.hpp"

namespace qref {
namespace {

namespace fs = std::filesystem;
using io::Json;

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qref_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write_config(const Json &j) const {
        const fs::path p = dir_ / "config.json";
        std::ofstream(p) << j.dump();
        return p.string();
    }
    cli::CliConfig with_config(const Json &j) const {
        cli::CliConfig c;
        c.config_path = write_config(j);
        c.output_dir = (dir_ / "out").string();
        return c;
    }
    static Json read_json(const fs::path &p) {
        std::ifstream in(p);
        return Json::parse(in);
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

Json quick_verify() {
    return Json{{"verify",
                 {{"grid_resolution", 12},
                  {"lhs_trials", 5},
                  {"lhs_dims", {2}},
                  {"lambda_sizes", {1, 4}},
                  {"equivalence_samples", 3},
                  {"threshold_step", 0.01}}}};
}

TEST_F(CliTest, RunWritesSummaryAndTranscript) {
    Json cfg{{"rounds", 2000}, {"seed", 99}, {"werner", 0.98}, {"r", 1.081}};
    const auto c = with_config(cfg);
    ASSERT_EQ(cli::cmd_run(c, out_, err_), cli::kExitOk) << err_.str();
    const Json s = read_json(fs::path(c.output_dir) / "summary.json");
    EXPECT_EQ(s["seed"], 99);
    EXPECT_EQ(s["config"]["rounds"], 2000);
    EXPECT_EQ(s["strategy"], "honest");
    EXPECT_NEAR(s["exact_payoff"].get<double>(), 1.0676530770180437, 1e-12);
    EXPECT_EQ(s["estimate"]["rounds"], 2000);
    std::ifstream csv(fs::path(c.output_dir) / "transcript.csv");
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "round,j,s,a,b,payoff");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 2000);
}

TEST_F(CliTest, RunIsReproducible) {
    cli::CliConfig c = with_config(Json{{"rounds", 500}, {"seed", 3}});
    ASSERT_EQ(cli::cmd_run(c, out_, err_), cli::kExitOk);
    const Json first = read_json(fs::path(c.output_dir) / "summary.json");
    c.overrides.threads = 3;
    ASSERT_EQ(cli::cmd_run(c, out_, err_), cli::kExitOk);
    const Json second = read_json(fs::path(c.output_dir) / "summary.json");
    EXPECT_EQ(first["estimate"], second["estimate"]);
}

TEST_F(CliTest, OverridesApplyAfterTheFile) {
    cli::CliConfig c = with_config(Json{{"rounds", 100}, {"r", 1.5}});
    c.overrides.r = 1.0;
    c.overrides.strategy = "comm-a2b";
    c.overrides.transcript = false;
    ASSERT_EQ(cli::cmd_run(c, out_, err_), cli::kExitOk) << err_.str();
    const Json s = read_json(fs::path(c.output_dir) / "summary.json");
    EXPECT_EQ(s["config"]["communication"], "alice-to-bob");
    EXPECT_NEAR(s["exact_payoff"].get<double>(), 2.5358983848622456, 1e-12);
    EXPECT_FALSE(fs::exists(fs::path(c.output_dir) / "transcript.csv"));
}

TEST_F(CliTest, InvalidConfigurationsExitWithTwo) {
    const std::vector<Json> bad{
        Json{{"rounds", 0}},
        Json{{"rounds", -4}},
        Json{{"werner", 1.5}},
        Json{{"r", -1}},
        Json{{"unknown_field", 1}},
        Json{{"verify", {{"bogus", 1}}}},
        Json{{"strategy", {{"type", "nope"}}}},
        Json{{"communication", "alice-to-bob"}},
        Json{{"strategy", {{"type", "comm-cheat"}, {"direction", "alice-to-bob"}}}},
        Json{{"channel", {{"type", "depolarizing"}, {"p", 2}}}},
        Json{{"input_distribution", {0.5, 0.5}}},
        Json{{"preparation", {{"type", "guess"}}}},
        Json{{"threads", 0}},
    };
    for (const Json &j : bad) {
        err_.str("");
        EXPECT_EQ(cli::cmd_run(with_config(j), out_, err_), cli::kExitInvalid) << j.dump();
        EXPECT_NE(err_.str().find("invalid configuration"), std::string::npos) << j.dump();
    }
    cli::CliConfig missing;
    missing.config_path = (dir_ / "does_not_exist.json").string();
    EXPECT_EQ(cli::cmd_run(missing, out_, err_), cli::kExitInvalid);
    std::ofstream(dir_ / "broken.json") << "{not json";
    missing.config_path = (dir_ / "broken.json").string();
    EXPECT_EQ(cli::cmd_verify(missing, out_, err_), cli::kExitInvalid);
}

TEST_F(CliTest, VerifyPassesOnDefaultsAndWritesReport) {
    const auto c = with_config(quick_verify());
    ASSERT_EQ(cli::cmd_verify(c, out_, err_), cli::kExitOk) << err_.str();
    for (const char *name : {"chsh_enumeration", "grid_max_cheat", "random_lhs_suite", "noisy_equivalence",
                             "threshold_scan"}) {
        EXPECT_NE(out_.str().find(std::string("PASS ") + name), std::string::npos) << name;
    }
    const Json report = read_json(fs::path(c.output_dir) / "verify_report.json");
    EXPECT_TRUE(report["passed"].get<bool>());
    EXPECT_EQ(report["seed"], 1);
    EXPECT_EQ(report["config"]["verify"]["grid_resolution"], 12);
}

TEST_F(CliTest, VerifyFailsOnBiasedPreparation) {
    Json cfg = quick_verify();
    cfg["preparation"] = {{"type", "sigma1-only"}};
    const auto c = with_config(cfg);
    EXPECT_EQ(cli::cmd_verify(c, out_, err_), cli::kExitFailure);
    EXPECT_NE(out_.str().find("FAIL grid_max_cheat"), std::string::npos);
    const Json report = read_json(fs::path(c.output_dir) / "verify_report.json");
    EXPECT_FALSE(report["passed"].get<bool>());
    EXPECT_TRUE(report["checks"]["grid_max_cheat"].contains("counterexample"));
}

TEST_F(CliTest, VerifyFailsOnLoweredPayoffBound) {
    Json cfg = quick_verify();
    cfg["verify"]["lhs_trials"] = 200;
    cfg["payoff_bound"] = 1.5;
    const auto c = with_config(cfg);
    EXPECT_EQ(cli::cmd_verify(c, out_, err_), cli::kExitFailure);
    EXPECT_NE(out_.str().find("FAIL random_lhs_suite"), std::string::npos);
    const Json report = read_json(fs::path(c.output_dir) / "verify_report.json");
    EXPECT_EQ(report["checks"]["random_lhs_suite"]["counterexample"]["type"], "lhs");
}

std::vector<std::vector<double>> read_csv(const fs::path &p, std::string &header) {
    std::ifstream in(p);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

TEST_F(CliTest, SweepOverWerner) {
    const auto c = with_config(Json::object());
    ASSERT_EQ(cli::cmd_sweep(c, out_, err_), cli::kExitOk) << err_.str();
    std::string header;
    const auto rows = read_csv(fs::path(c.output_dir) / "sweep.csv", header);
    EXPECT_EQ(header, "W,r,witness2,witness_payoff,steering2,steering3,chsh,honest_payoff");
    ASSERT_EQ(rows.size(), 101u);
    for (const auto &row : rows) {
        ASSERT_EQ(row.size(), 8u);
        EXPECT_NEAR(row[7], 3 * row[0] - std::numbers::sqrt3, 1e-12);
        EXPECT_NEAR(row[3], 2 * row[0] - 1, 1e-12);
    }
    const Json meta = read_json(fs::path(c.output_dir) / "sweep.json");
    EXPECT_EQ(meta["rows"], 101);
    EXPECT_TRUE(meta.contains("config"));
}

TEST_F(CliTest, SweepOverRCrossesZeroAtSqrt3) {
    cli::CliConfig c = with_config(Json{{"sweep", {{"w_start", 1.0}, {"w_stop", 1.0}, {"r_start", 1.0}, {"r_stop", 2.0}, {"r_step", 0.001}}}});
    ASSERT_EQ(cli::cmd_sweep(c, out_, err_), cli::kExitOk) << err_.str();
    std::string header;
    const auto rows = read_csv(fs::path(c.output_dir) / "sweep.csv", header);
    ASSERT_EQ(rows.size(), 1001u);
    double crossing = -1;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k - 1][7] > 0 && rows[k][7] <= 0) crossing = rows[k][1];
    }
    EXPECT_NEAR(crossing, std::numbers::sqrt3, 0.0011);
}

TEST_F(CliTest, SweepRejectsEmptyOrOutOfRangeGrids) {
    cli::CliConfig c = with_config(Json::object());
    c.overrides.w_step = 0.0;
    EXPECT_EQ(cli::cmd_sweep(c, out_, err_), cli::kExitInvalid);
    c.overrides.w_step = 0.1;
    c.overrides.w_stop = 1.5;
    EXPECT_EQ(cli::cmd_sweep(c, out_, err_), cli::kExitInvalid);
    c.overrides.w_stop = 0.5;
    c.overrides.w_start = 0.8;
    EXPECT_EQ(cli::cmd_sweep(c, out_, err_), cli::kExitInvalid);
}

TEST_F(CliTest, SchemaOutput) {
    EXPECT_EQ(cli::cmd_schema("config", out_, err_), cli::kExitOk);
    const Json config = Json::parse(out_.str());
    EXPECT_EQ(config["$schema"], "https://json-schema.org/draft/2020-12/schema");
    EXPECT_EQ(config["type"], "object");
    EXPECT_TRUE(config["properties"].contains("strategy"));
    out_.str("");
    EXPECT_EQ(cli::cmd_schema("all", out_, err_), cli::kExitOk);
    const Json all = Json::parse(out_.str());
    EXPECT_TRUE(all.contains("config"));
    EXPECT_TRUE(all.contains("strategy"));
    EXPECT_EQ(cli::cmd_schema("weather", out_, err_), cli::kExitInvalid);
}

TEST_F(CliTest, DefaultConfigPropertiesMatchSchema) {
    // Every default key is declared by the config schema and vice versa.
    const Json schema = cli::schemas()["config"];
    const Json defaults = cli::default_config();
    for (auto it = defaults.begin(); it != defaults.end(); ++it) {
        EXPECT_TRUE(schema["properties"].contains(it.key())) << it.key();
    }
    EXPECT_EQ(schema["additionalProperties"], false);
}

TEST(NamedStrategy, ShorthandsImplyCommunication) {
    EXPECT_EQ(cli::named_strategy("comm-b2a").second, "bob-to-alice");
    EXPECT_EQ(cli::named_strategy("honest").second, "none");
    EXPECT_THROW(cli::named_strategy("psychic"), io::ConfigError);
}

}  // namespace
}  // namespace qref
