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


#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qref/cli.hpp"

namespace {

void add_common(CLI::App *cmd, qref::cli::CliConfig &cfg) {
    auto &o = cfg.overrides;
    cmd->add_option("-c,--config", cfg.config_path, "JSON config file");
    cmd->add_option("-o,--out", cfg.output_dir, "Output directory")->capture_default_str();
    cmd->add_option("--rounds", o.rounds, "Number of rounds");
    cmd->add_option("--seed", o.seed, "Master RNG seed");
    cmd->add_option("--werner", o.werner, "Werner parameter W of the shared state");
    cmd->add_option("--r", o.r, "Penalty scale r >= 1");
    cmd->add_option("--payoff-bound", o.payoff_bound, "Payoff bound (default sqrt 3)");
    cmd->add_option("--p", o.p, "Depolarizing probability of the signal channel");
    cmd->add_option("--strategy", o.strategy, "honest | cheat-nostate | comm-a2b | comm-b2a");
    cmd->add_option("--communication", o.communication, "none | alice-to-bob | bob-to-alice");
    cmd->add_option("--preparation", o.preparation, "ideal | sigma1-only");
    cmd->add_option("--threads", o.threads, "Worker threads");
    cmd->add_option("--grid-resolution", o.grid_resolution, "Estimator grid resolution for verify");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qref: quantum-refereed steering game simulator"};
    app.require_subcommand(1);
    qref::cli::CliConfig cfg;

    auto *run = app.add_subcommand("run", "Simulate the game; writes transcript.csv and summary.json");
    add_common(run, cfg);
    bool no_transcript = false;
    run->add_flag("--no-transcript", no_transcript, "Skip the per-round transcript");

    auto *verify = app.add_subcommand("verify", "Run the oracle suites; writes verify_report.json");
    add_common(verify, cfg);

    auto *sweep = app.add_subcommand("sweep", "Tabulate functionals over a (W, r) grid; writes sweep.csv");
    add_common(sweep, cfg);
    auto &o = cfg.overrides;
    sweep->add_option("--w-start", o.w_start);
    sweep->add_option("--w-stop", o.w_stop);
    sweep->add_option("--w-step", o.w_step);
    sweep->add_option("--r-start", o.r_start);
    sweep->add_option("--r-stop", o.r_stop);
    sweep->add_option("--r-step", o.r_step);

    auto *schema = app.add_subcommand("schema", "Print JSON schemas");
    std::string which = "all";
    schema->add_option("which", which, "config | strategy | all")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qref::cli::kExitInvalid;
    }
    if (no_transcript) o.transcript = false;

    if (*run) return qref::cli::cmd_run(cfg);
    if (*verify) return qref::cli::cmd_verify(cfg);
    if (*sweep) return qref::cli::cmd_sweep(cfg);
    return qref::cli::cmd_schema(which);
}
