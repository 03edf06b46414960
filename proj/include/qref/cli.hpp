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

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qref/serialization.hpp"

/// Batch front-end shared by the `qref` binary and its tests. Every command
/// returns 0 on success, 1 on a runtime error or failed check, 2 on invalid
/// configuration.
namespace qref::cli {

using io::ConfigError;
using io::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

/// Command-line overrides; each one, when present, replaces the config file value.
struct Overrides {
    std::optional<std::uint64_t> rounds;
    std::optional<std::uint64_t> seed;
    std::optional<double> werner;
    std::optional<double> r;
    std::optional<double> p;  // depolarizing channel on the signal qubit
    std::optional<int> grid_resolution;
    std::optional<double> payoff_bound;
    std::optional<std::string> strategy;  // honest | cheat-nostate | comm-a2b | comm-b2a
    std::optional<std::string> communication;
    std::optional<std::string> preparation;  // ideal | sigma1-only
    std::optional<unsigned> threads;
    std::optional<bool> transcript;
    std::optional<double> w_start, w_stop, w_step;
    std::optional<double> r_start, r_stop, r_step;
};

struct CliConfig {
    std::string subcommand;
    std::optional<std::string> config_path;
    std::string output_dir = ".";
    Overrides overrides;
};

inline Json default_config() {
    Json dist = Json::array();
    for (int c = 0; c < kNumConditions; ++c) dist.push_back(1.0 / kNumConditions);
    return Json{
        {"rounds", 100000},
        {"seed", 1},
        {"threads", 1},
        {"transcript", true},
        {"werner", 1.0},
        {"r", 1.0},
        {"payoff_bound", std::numbers::sqrt3},
        {"input_distribution", dist},
        {"preparation", {{"type", "ideal"}}},
        {"channel", nullptr},
        {"communication", "none"},
        {"strategy", {{"type", "honest"}}},
        {"verify",
         {{"grid_resolution", 50},
          {"lhs_trials", 1000},
          {"lhs_dims", {2, 3, 4}},
          {"lambda_sizes", {1, 4, 8}},
          {"lhs_seed", 1},
          {"equivalence_samples", 50},
          {"threshold_step", 0.001}}},
        {"sweep", {{"w_start", 0.0}, {"w_stop", 1.0}, {"w_step", 0.01}, {"r_start", 1.0}, {"r_stop", 1.0}, {"r_step", 0.1}}},
    };
}

/// Shorthand strategy names accepted by --strategy, with the communication they imply.
inline std::pair<Json, std::string> named_strategy(const std::string &name) {
    if (name == "honest") return {Json{{"type", "honest"}}, "none"};
    if (name == "cheat-nostate") return {Json{{"type", "cheat-nostate"}}, "none"};
    if (name == "comm-a2b") return {Json{{"type", "comm-cheat"}, {"direction", "alice-to-bob"}}, "alice-to-bob"};
    if (name == "comm-b2a") return {Json{{"type", "comm-cheat"}, {"direction", "bob-to-alice"}}, "bob-to-alice"};
    throw ConfigError("--strategy: unknown strategy '" + name + "' (honest, cheat-nostate, comm-a2b, comm-b2a)");
}

inline void check_keys(const Json &j, const std::set<std::string> &allowed, const std::string &where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError(where + ": unknown field '" + it.key() + "'");
    }
}

/// Defaults, then the config file (JSON merge patch), then command-line overrides.
inline Json resolve_config(const CliConfig &cli) {
    Json config = default_config();
    if (cli.config_path) {
        std::ifstream in(*cli.config_path);
        if (!in) throw ConfigError("cannot open config file '" + *cli.config_path + "'");
        Json file;
        try {
            file = Json::parse(in);
        } catch (const nlohmann::json::parse_error &e) {
            throw ConfigError("config file '" + *cli.config_path + "' is not valid JSON: " + e.what());
        }
        check_keys(file,
                   {"rounds", "seed", "threads", "transcript", "werner", "shared_state", "r", "payoff_bound",
                    "input_distribution", "preparation", "channel", "communication", "strategy", "verify", "sweep"},
                   "config");
        // Nested objects are replaced wholesale except verify/sweep, which merge.
        for (auto it = file.begin(); it != file.end(); ++it) {
            if ((it.key() == "verify" || it.key() == "sweep") && it.value().is_object()) {
                check_keys(it.value(),
                           it.key() == "verify"
                               ? std::set<std::string>{"grid_resolution", "lhs_trials", "lhs_dims", "lambda_sizes",
                                                       "lhs_seed", "equivalence_samples", "threshold_step"}
                               : std::set<std::string>{"w_start", "w_stop", "w_step", "r_start", "r_stop", "r_step"},
                           "config." + it.key());
                for (auto f = it.value().begin(); f != it.value().end(); ++f) config[it.key()][f.key()] = f.value();
            } else {
                config[it.key()] = it.value();
            }
        }
    }
    const Overrides &o = cli.overrides;
    if (o.rounds) config["rounds"] = *o.rounds;
    if (o.seed) config["seed"] = *o.seed;
    if (o.threads) config["threads"] = *o.threads;
    if (o.transcript) config["transcript"] = *o.transcript;
    if (o.werner) {
        config["werner"] = *o.werner;
        config.erase("shared_state");
    }
    if (o.r) config["r"] = *o.r;
    if (o.payoff_bound) config["payoff_bound"] = *o.payoff_bound;
    if (o.p) config["channel"] = Json{{"type", "depolarizing"}, {"p", *o.p}};
    if (o.preparation) config["preparation"] = Json{{"type", *o.preparation}};
    if (o.strategy) {
        auto [strategy, comm] = named_strategy(*o.strategy);
        config["strategy"] = strategy;
        config["communication"] = comm;
    }
    if (o.communication) config["communication"] = *o.communication;
    if (o.grid_resolution) config["verify"]["grid_resolution"] = *o.grid_resolution;
    if (o.w_start) config["sweep"]["w_start"] = *o.w_start;
    if (o.w_stop) config["sweep"]["w_stop"] = *o.w_stop;
    if (o.w_step) config["sweep"]["w_step"] = *o.w_step;
    if (o.r_start) config["sweep"]["r_start"] = *o.r_start;
    if (o.r_stop) config["sweep"]["r_stop"] = *o.r_stop;
    if (o.r_step) config["sweep"]["r_step"] = *o.r_step;
    return config;
}

inline std::uint64_t as_count(const Json &j, const std::string &where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(where + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

inline SteeringGameSpec spec_from_config(const Json &config, std::optional<double> r = std::nullopt) {
    const auto dist = io::as_number_list(config.at("input_distribution"), "input_distribution");
    if (dist.size() != kNumConditions) throw ConfigError("input_distribution: expected six probabilities");
    std::array<double, kNumConditions> d{};
    std::copy(dist.begin(), dist.end(), d.begin());
    const double rr = r ? *r : io::as_number(config.at("r"), "r");
    const double bound = io::as_number(config.at("payoff_bound"), "payoff_bound");
    const SteeringGameSpec base = io::validated("game", [&] {
        return SteeringGameSpec(SteeringGameSpec::ideal_ensemble(), d, rr, bound);
    });
    const PreparationModel prep = io::preparation_from_json(config.at("preparation"), "preparation");
    return io::validated("preparation", [&] { return with_preparation(base, prep); });
}

inline DensityOperator shared_state_from_config(const Json &config) {
    if (config.contains("shared_state") && !config.at("shared_state").is_null()) {
        return io::density_from_json(config.at("shared_state"), "shared_state");
    }
    const double w = io::as_number(config.at("werner"), "werner");
    return io::validated("werner", [&] { return werner_state(w); });
}

inline RunConfig run_config_from_json(const Json &config) {
    RunConfig rc;
    rc.rounds = as_count(config.at("rounds"), "rounds");
    if (rc.rounds < 1) throw ConfigError("rounds: must be >= 1");
    rc.seed = as_count(config.at("seed"), "seed");
    rc.threads = static_cast<unsigned>(as_count(config.at("threads"), "threads"));
    if (rc.threads < 1) throw ConfigError("threads: must be >= 1");
    if (!config.at("transcript").is_boolean()) throw ConfigError("transcript: expected a boolean");
    rc.keep_transcript = config.at("transcript").get<bool>();
    rc.spec = spec_from_config(config);
    rc.strategy = io::strategy_from_json(config.at("strategy"));
    rc.shared_state = shared_state_from_config(config);
    if (!config.at("channel").is_null()) rc.channel = io::channel_from_json(config.at("channel"), "channel");
    const std::string comm = io::as_string(config.at("communication"), "communication");
    rc.communication = io::validated("communication", [&] { return communication_from_string(comm); });
    io::validated("config", [&] {
        validate_run_config(rc);
        return 0;
    });
    return rc;
}

inline void write_json(const std::filesystem::path &path, const Json &j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

inline std::filesystem::path prepare_output_dir(const std::string &dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

/// Maps exceptions onto the exit-code contract.
template <class F>
int guarded(std::ostream &err, F &&body) {
    try {
        return body();
    } catch (const ConfigError &e) {
        err << "error: invalid configuration: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

/// Simulates the game; writes transcript.csv and summary.json.
inline int cmd_run(const CliConfig &cli, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    return guarded(err, [&] {
        const Json config = resolve_config(cli);
        const RunConfig rc = run_config_from_json(config);
        const auto dir = prepare_output_dir(cli.output_dir);
        const double exact = exact_payoff(rc);
        const RunResult result = run_game(rc);
        if (rc.keep_transcript) {
            std::ofstream csv(dir / "transcript.csv");
            if (!csv) throw std::runtime_error("cannot write transcript.csv");
            write_transcript_csv(csv, result.transcript);
        }
        Json summary{{"config", config},
                     {"seed", rc.seed},
                     {"strategy", strategy_kind(rc.strategy)},
                     {"exact_payoff", exact},
                     {"estimate", io::estimate_to_json(result.estimate)},
                     {"exact_correlations",
                      io::correlations_to_json(correlation_table(rc.spec, rc.strategy, rc.shared_state,
                                                                 rc.channel))}};
        write_json(dir / "summary.json", summary);
        out << "mean " << result.estimate.mean << " +- " << result.estimate.std_error << " (exact " << exact
            << ", rounds " << result.estimate.rounds << ")\n";
        return kExitOk;
    });
}

/// Builds the oracle report; `passed` is true iff every check passed.
inline Json verify_report(const Json &config) {
    const SteeringGameSpec spec = spec_from_config(config);
    const Json &v = config.at("verify");
    check_keys(v,
               {"grid_resolution", "lhs_trials", "lhs_dims", "lambda_sizes", "lhs_seed", "equivalence_samples",
                "threshold_step"},
               "verify");
    const int resolution = io::as_int(v.at("grid_resolution"), "verify.grid_resolution");
    if (resolution < 10) throw ConfigError("verify.grid_resolution: must be >= 10");
    const int trials = io::as_int(v.at("lhs_trials"), "verify.lhs_trials");
    if (trials < 1) throw ConfigError("verify.lhs_trials: must be >= 1");
    const auto dims = io::as_int_list(v.at("lhs_dims"), "verify.lhs_dims");
    const auto lambdas = io::as_int_list(v.at("lambda_sizes"), "verify.lambda_sizes");
    for (int d : dims) {
        if (d < 1 || d > 4) throw ConfigError("verify.lhs_dims: dimensions must lie in [1, 4]");
    }
    for (int l : lambdas) {
        if (l < 1) throw ConfigError("verify.lambda_sizes: sizes must be >= 1");
    }
    const std::uint64_t lhs_seed = as_count(v.at("lhs_seed"), "verify.lhs_seed");
    const int samples = io::as_int(v.at("equivalence_samples"), "verify.equivalence_samples");
    if (samples < 1) throw ConfigError("verify.equivalence_samples: must be >= 1");
    const double step = io::as_number(v.at("threshold_step"), "verify.threshold_step");
    const std::vector<double> w_grid = oracle::uniform_grid(0.0, 1.0, step);
    if (w_grid.size() < 2) throw ConfigError("verify.threshold_step: must lie in (0, 1)");

    Json checks = Json::object();
    bool all = true;

    const auto chsh = oracle::enumerate_chsh_deterministic();
    const bool chsh_ok = chsh.max_value == 2.0;
    checks["chsh_enumeration"] = {{"passed", chsh_ok},
                                  {"max", chsh.max_value},
                                  {"min", chsh.min_value},
                                  {"maximizers", chsh.maximizer_count}};
    all = all && chsh_ok;

    const auto grid = oracle::grid_max_cheat(spec, resolution);
    const bool grid_ok = grid.max_payoff <= 1e-9 && grid.refined_max_payoff <= 1e-9;
    checks["grid_max_cheat"] = {{"passed", grid_ok},
                                {"resolution", resolution},
                                {"max_payoff", grid.max_payoff},
                                {"argmax", io::bloch_to_json(grid.argmax)},
                                {"refined_max_payoff", grid.refined_max_payoff},
                                {"refined_argmax", io::bloch_to_json(grid.refined_argmax)},
                                {"cell_size", grid.cell_size},
                                {"max_discrimination_ratio", io::number(grid.max_ratio)}};
    if (!grid_ok) {
        NoStateCheat witness;
        witness.estimator = grid.max_payoff >= grid.refined_max_payoff ? grid.argmax : grid.refined_argmax;
        checks["grid_max_cheat"]["counterexample"] = io::strategy_to_json(witness);
    }
    all = all && grid_ok;

    const auto lhs = oracle::random_lhs_suite(trials, dims, lambdas, lhs_seed, spec);
    checks["random_lhs_suite"] = io::lhs_report_to_json(lhs);
    all = all && lhs.passed;

    std::vector<std::pair<std::string, QuantumChannel>> channels;
    if (!config.at("channel").is_null()) {
        channels.emplace_back("configured", io::channel_from_json(config.at("channel"), "channel"));
    } else {
        channels.emplace_back("identity", identity_channel(2));
        for (double p : {0.1, 0.5, 0.9}) channels.emplace_back("depolarizing p=" + std::to_string(p), depolarizing_channel(p));
        channels.emplace_back("amplitude-damping gamma=0.3", amplitude_damping_channel(0.3));
    }
    Json eq = Json::array();
    bool eq_ok = true;
    for (const auto &[name, ch] : channels) {
        const auto rep = noisy_equivalence_check(ch, partial_bell_povm(), samples, lhs_seed);
        eq.push_back({{"channel", name}, {"passed", rep.passed}, {"max_deviation", rep.max_deviation},
                      {"diagnostic", rep.diagnostic}});
        eq_ok = eq_ok && rep.passed;
    }
    checks["noisy_equivalence"] = {{"passed", eq_ok}, {"channels", eq}};
    all = all && eq_ok;

    const double r = io::as_number(config.at("r"), "r");
    const auto rows = oracle::threshold_scan(w_grid, r);
    Json th = Json::array();
    bool th_ok = true;
    for (const auto &c : oracle::check_thresholds(rows, step, r)) {
        th.push_back({{"functional", c.name},
                      {"expected", c.expected},
                      {"found", c.found ? Json(*c.found) : Json(nullptr)},
                      {"passed", c.passed}});
        th_ok = th_ok && c.passed;
    }
    checks["threshold_scan"] = {{"passed", th_ok}, {"step", step}, {"thresholds", th}};
    all = all && th_ok;

    return Json{{"config", config}, {"seed", lhs_seed}, {"passed", all}, {"checks", checks}};
}

/// Runs every oracle; writes verify_report.json and exits 0 iff all pass.
inline int cmd_verify(const CliConfig &cli, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    return guarded(err, [&] {
        const Json config = resolve_config(cli);
        spec_from_config(config);  // validate the game before any work
        const Json report = verify_report(config);
        const auto dir = prepare_output_dir(cli.output_dir);
        write_json(dir / "verify_report.json", report);
        for (auto it = report.at("checks").begin(); it != report.at("checks").end(); ++it) {
            out << (it.value().at("passed").get<bool>() ? "PASS " : "FAIL ") << it.key() << "\n";
        }
        if (!report.at("passed").get<bool>()) {
            err << report.at("checks").dump(2) << "\n";
            return kExitFailure;
        }
        return kExitOk;
    });
}

/// Tabulates functionals and honest payoffs over a (W, r) grid; writes sweep.csv and sweep.json.
inline int cmd_sweep(const CliConfig &cli, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    return guarded(err, [&] {
        const Json config = resolve_config(cli);
        const Json &s = config.at("sweep");
        check_keys(s, {"w_start", "w_stop", "w_step", "r_start", "r_stop", "r_step"}, "sweep");
        auto num = [&](const char *k) { return io::as_number(s.at(k), std::string("sweep.") + k); };
        const auto ws = oracle::uniform_grid(num("w_start"), num("w_stop"), num("w_step"));
        const auto rs = oracle::uniform_grid(num("r_start"), num("r_stop"), num("r_step"));
        if (ws.empty() || rs.empty()) throw ConfigError("sweep: empty W or r grid");
        for (double w : ws) {
            if (w < -1.0 / 3.0 - kValidationTol || w > 1.0 + kValidationTol) {
                throw ConfigError("sweep: W values must lie in [-1/3, 1]");
            }
        }
        const Strategy honest = HonestStrategy::canonical();
        const auto dir = prepare_output_dir(cli.output_dir);
        std::ofstream csv(dir / "sweep.csv");
        if (!csv) throw std::runtime_error("cannot write sweep.csv");
        csv << "W,r,witness2,witness_payoff,steering2,steering3,chsh,honest_payoff\n";
        std::size_t rows = 0;
        for (double r : rs) {
            const SteeringGameSpec spec = spec_from_config(config, r);
            const auto table = oracle::threshold_scan(ws, r);
            for (const auto &row : table) {
                const double payoff = qrs_payoff_exact(spec, honest, werner_state(row.w));
                char line[256];
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.w, r,
                              row.witness2, row.witness_payoff, row.steering2, row.steering3, row.chsh, payoff);
                csv << line;
                ++rows;
            }
        }
        write_json(dir / "sweep.json", Json{{"config", config}, {"rows", rows}, {"csv", "sweep.csv"}});
        out << "wrote " << rows << " rows to " << (dir / "sweep.csv").string() << "\n";
        return kExitOk;
    });
}

/// JSON Schema (draft 2020-12) for matrices, strategies and configs.
inline Json schemas() {
    const Json matrix{{"type", "object"},
                      {"required", {"real"}},
                      {"properties",
                       {{"real", {{"type", "array"}, {"items", {{"type", "array"}, {"items", {{"type", "number"}}}}}}},
                        {"imag", {{"type", "array"}, {"items", {{"type", "array"}, {"items", {{"type", "number"}}}}}}}}},
                      {"additionalProperties", false}};
    const Json matrix_ref{{"$ref", "#/$defs/matrix"}};
    const Json povm{{"type", "array"}, {"items", matrix_ref}, {"minItems", 1}};
    const Json pm_list{{"type", "array"}, {"items", {{"enum", {1, -1}}}}};
    const Json bloch{{"type", "object"},
                     {"required", {"m", "mu"}},
                     {"properties",
                      {{"m", {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 3}, {"maxItems", 3}}},
                       {"mu", {{"type", "number"}, {"exclusiveMinimum", 0}}}}},
                     {"additionalProperties", false}};
    const Json strategy{
        {"oneOf",
         {{{"type", "object"},
           {"required", {"type"}},
           {"properties",
            {{"type", {{"const", "honest"}}},
             {"alice_povms", {{"type", "array"}, {"items", povm}, {"minItems", 3}, {"maxItems", 3}}},
             {"bob_joint_povm", povm}}},
           {"additionalProperties", false}},
          {{"type", "object"},
           {"required", {"type"}},
           {"properties",
            {{"type", {{"const", "cheat-nostate"}}}, {"estimator", {{"$ref", "#/$defs/bloch"}}}, {"alice_list", pm_list}}},
           {"additionalProperties", false}},
          {{"type", "object"},
           {"required", {"type", "weights", "hidden_states", "alice_responses"}},
           {"properties",
            {{"type", {{"const", "lhs"}}},
             {"weights", {{"type", "array"}, {"items", {{"type", "number"}, {"minimum", 0}}}}},
             {"hidden_states", {{"type", "array"}, {"items", matrix_ref}}},
             {"alice_responses",
              {{"type", "array"},
               {"items",
                {{"type", "array"},
                 {"items", {{"type", "number"}, {"minimum", -1}, {"maximum", 1}}},
                 {"minItems", 3},
                 {"maxItems", 3}}}}},
             {"bob_joint_povm", povm}}},
           {"additionalProperties", false}},
          {{"type", "object"},
           {"required", {"type", "direction"}},
           {"properties",
            {{"type", {{"const", "comm-cheat"}}},
             {"direction", {{"enum", {"alice-to-bob", "bob-to-alice"}}}},
             {"alice_list", pm_list},
             {"estimator", {{"$ref", "#/$defs/bloch"}}},
             {"bob_rule", {{"type", "array"}, {"items", {{"enum", {0, 1}}}}, {"minItems", 2}, {"maxItems", 2}}},
             {"alice_table",
              {{"type", "array"},
               {"minItems", 3},
               {"maxItems", 3},
               {"items",
                {{"type", "array"},
                 {"minItems", 2},
                 {"maxItems", 2},
                 {"items", {{"type", "array"}, {"items", {{"enum", {1, -1}}}}, {"minItems", 2}, {"maxItems", 2}}}}}}}}},
           {"additionalProperties", false}}}}};
    const Json channel{
        {"oneOf",
         {{{"type", "object"},
           {"required", {"type"}},
           {"properties", {{"type", {{"const", "identity"}}}}},
           {"additionalProperties", false}},
          {{"type", "object"},
           {"required", {"type", "p"}},
           {"properties", {{"type", {{"const", "depolarizing"}}}, {"p", {{"type", "number"}, {"minimum", 0}, {"maximum", 1}}}}},
           {"additionalProperties", false}},
          {{"type", "object"},
           {"required", {"type", "gamma"}},
           {"properties",
            {{"type", {{"const", "amplitude-damping"}}}, {"gamma", {{"type", "number"}, {"minimum", 0}, {"maximum", 1}}}}},
           {"additionalProperties", false}},
          {{"type", "object"},
           {"required", {"type", "operators"}},
           {"properties", {{"type", {{"const", "kraus"}}}, {"operators", {{"type", "array"}, {"items", matrix_ref}}}}},
           {"additionalProperties", false}}}}};
    const Json preparation{
        {"oneOf",
         {{{"type", "object"},
           {"required", {"type"}},
           {"properties", {{"type", {{"enum", {"ideal", "sigma1-only"}}}}}},
           {"additionalProperties", false}},
          {{"type", "object"},
           {"required", {"type", "states"}},
           {"properties",
            {{"type", {{"const", "table"}}},
             {"states", {{"type", "array"}, {"items", matrix_ref}, {"minItems", 6}, {"maxItems", 6}}}}},
           {"additionalProperties", false}},
          {{"type", "object"},
           {"required", {"type", "channel"}},
           {"properties", {{"type", {{"const", "channel"}}}, {"channel", {{"$ref", "#/$defs/channel"}}}}},
           {"additionalProperties", false}}}}};
    const Json count{{"type", "integer"}, {"minimum", 0}};
    const Json config{
        {"type", "object"},
        {"properties",
         {{"rounds", {{"type", "integer"}, {"minimum", 1}}},
          {"seed", count},
          {"threads", {{"type", "integer"}, {"minimum", 1}}},
          {"transcript", {{"type", "boolean"}}},
          {"werner", {{"type", "number"}, {"minimum", -1.0 / 3.0}, {"maximum", 1}}},
          {"shared_state", {{"anyOf", {matrix_ref, {{"type", "null"}}}}}},
          {"r", {{"type", "number"}, {"minimum", 1}}},
          {"payoff_bound", {{"type", "number"}, {"exclusiveMinimum", 0}}},
          {"input_distribution",
           {{"type", "array"}, {"items", {{"type", "number"}, {"minimum", 0}}}, {"minItems", 6}, {"maxItems", 6}}},
          {"preparation", {{"$ref", "#/$defs/preparation"}}},
          {"channel", {{"anyOf", {{{"$ref", "#/$defs/channel"}}, {{"type", "null"}}}}}},
          {"communication", {{"enum", {"none", "alice-to-bob", "bob-to-alice"}}}},
          {"strategy", {{"$ref", "#/$defs/strategy"}}},
          {"verify",
           {{"type", "object"},
            {"properties",
             {{"grid_resolution", {{"type", "integer"}, {"minimum", 10}}},
              {"lhs_trials", {{"type", "integer"}, {"minimum", 1}}},
              {"lhs_dims", {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 1}, {"maximum", 4}}}}},
              {"lambda_sizes", {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 1}}}}},
              {"lhs_seed", count},
              {"equivalence_samples", {{"type", "integer"}, {"minimum", 1}}},
              {"threshold_step", {{"type", "number"}, {"exclusiveMinimum", 0}, {"exclusiveMaximum", 1}}}}},
            {"additionalProperties", false}}},
          {"sweep",
           {{"type", "object"},
            {"properties",
             {{"w_start", {{"type", "number"}}},
              {"w_stop", {{"type", "number"}}},
              {"w_step", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"r_start", {{"type", "number"}}},
              {"r_stop", {{"type", "number"}}},
              {"r_step", {{"type", "number"}, {"exclusiveMinimum", 0}}}}},
            {"additionalProperties", false}}}}},
        {"additionalProperties", false}};
    const Json defs{{"matrix", matrix}, {"bloch", bloch}, {"strategy", strategy}, {"channel", channel},
                    {"preparation", preparation}};
    Json config_schema = config;
    config_schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
    config_schema["title"] = "qref config";
    config_schema["$defs"] = defs;
    Json strategy_schema = strategy;
    strategy_schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
    strategy_schema["title"] = "qref strategy";
    strategy_schema["$defs"] = defs;
    return Json{{"config", config_schema}, {"strategy", strategy_schema}};
}

/// Prints the schemas; `which` is "config", "strategy" or "all".
inline int cmd_schema(const std::string &which, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    return guarded(err, [&] {
        const Json all = schemas();
        if (which == "all") {
            out << all.dump(2) << "\n";
        } else if (all.contains(which)) {
            out << all.at(which).dump(2) << "\n";
        } else {
            throw ConfigError("schema: unknown schema '" + which + "' (config, strategy, all)");
        }
        return kExitOk;
    });
}

}  // namespace qref::cli
