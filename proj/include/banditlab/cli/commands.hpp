#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "banditlab/agents/agent.hpp"
#include "banditlab/cli/config.hpp"
#include "banditlab/envs/environments.hpp"
#include "banditlab/harness/trial.hpp"

namespace banditlab::cli {

// A dataset id resolved to something an environment can be built from.  The
// table (when present) is immutable and shared across concurrent trials.
struct ResolvedDataset {
    enum class Kind { kWheel, kMushroom, kClassification, kTableReward };

    std::string id;
    Kind kind = Kind::kClassification;
    std::shared_ptr<const envs::DatasetTable> table;  // null for the wheel
    std::size_t harmful_class = 0;                    // mushroom kind only
    double wheel_delta = 0.5;                         // wheel kind only
};

// Built-in ids: "wheel" (uses wheel_delta), "synth-mushroom",
// "synth-statlog".  Anything else is looked up as <id>.data / <id>.schema
// under data_path/schema_path if given, else under $BANDIT_LAB_DATA (default
// ".").  Environment kind is inferred from the schema: reward columns win,
// an id starting with "mushroom" selects the mushroom rule, otherwise the
// label column gives a classification bandit.
ResolvedDataset resolve_dataset(const ExperimentConfig& cfg);

// Fresh environment for one trial.  The seed stream depends on the master
// seed and trial index but never on the agent, so every agent sees the same
// context/reward sequence for a given (seed, trial).
std::unique_ptr<envs::BanditEnvironment> make_environment(const ResolvedDataset& ds,
                                                          const ExperimentConfig& cfg,
                                                          std::uint64_t trial_index);

// Fresh agent for one trial.  Known ids: uniform, linfullpost,
// neural-linear, lu-gauss, lu-sivi, lu-gauss-global, lu-sivi-global.
std::unique_ptr<agents::Agent> make_agent(const ExperimentConfig& cfg,
                                          std::size_t context_dim,
                                          std::size_t num_actions,
                                          std::uint64_t trial_index);

// Run cfg.trials trials (up to cfg.jobs concurrently), results in trial
// order.  This is cmd_run without the file output; the acceptance gate and
// tests drive it directly.
std::vector<harness::TrialResult> run_trials(const ExperimentConfig& cfg);

// run: execute the trials and write trials.csv, regret_curve.csv, and
// manifest.json into cfg.out_dir (atomically: temp file + rename).
int cmd_run(const ExperimentConfig& cfg);

// aggregate: read trials.csv + manifest.json from each result directory and
// write report.csv + report.json into out_dir.
int cmd_aggregate(const std::vector<std::string>& result_dirs, const std::string& out_dir);

struct TraceRequest {
    std::size_t action = 0;
    std::size_t context_row = 0;  // repeated-draw mode: row index into the context stream
    std::size_t per_context = 0;  // > 0: one draw per context over this many rows instead
    std::size_t samples = 2000;
    std::size_t bins = 50;
    std::size_t record_every = 100;
};

// trace: run one trial's worth of interaction, sampling the agent's mean
// rewards on a pinned context set at a fixed cadence; writes trace.csv.
int cmd_trace(const ExperimentConfig& cfg, const TraceRequest& req);

// Parse argv, run the selected command, and map errors to exit codes:
// 0 success, 2 usage/config, 3 data, 4 numeric.
int dispatch(int argc, char** argv);

}  // namespace banditlab::cli
