#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "banditlab/harness/trial.hpp"

namespace banditlab::harness {

inline constexpr std::size_t kSimpleRegretWindow = 500;
inline constexpr char kBaselineAgentId[] = "uniform";

// Per-trial normalized cumulative regrets: 100 * CR_i / mean(baseline CRs).
// The denominator is the mean over the baseline trials, not a trial-paired
// ratio.  Throws NumericError when the baseline mean is zero or non-finite.
std::vector<double> normalized_cr(std::span<const TrialResult> results,
                                  std::span<const TrialResult> baseline_results);

// Mean of the last `window` per-step regrets.  Throws ConfigError when the
// window is zero or longer than the trial.
double simple_regret(const TrialResult& result,
                     std::size_t window = kSimpleRegretWindow);

// One (dataset, agent) cell of the aggregate report.  Standard errors are
// sample-std / sqrt(trials); zero when the cell holds a single trial.
struct CellStats {
    std::string dataset_id;
    std::string agent_id;
    std::size_t trials = 0;
    double mean_cr = 0.0;
    double se_cr = 0.0;
    double mean_normalized = 0.0;
    double se_normalized = 0.0;
    double mean_simple_regret = 0.0;
    double se_simple_regret = 0.0;
};

struct AgentSummary {
    std::string agent_id;
    double mean_rank = 0.0;   // per-dataset ranks of mean normalized CR, averaged
    double mean_value = 0.0;  // per-dataset mean normalized CRs, averaged
};

struct AggregateReport {
    std::vector<std::string> dataset_ids;  // sorted
    std::vector<CellStats> cells;          // dataset-major, agent-minor, sorted
    std::vector<AgentSummary> agents;      // ordered by (mean_rank, id)
    std::string baseline_id;
};

// Reduces completed trials into the report.  Every agent must cover every
// dataset (ragged coverage -> DataError naming the missing cells) and the
// baseline agent must be present (-> DataError "normalization baseline
// absent").  Each cell's normalized mean is computed as a ratio of means, so
// the baseline's own cells normalize to exactly 100.  Ranks are 1 = best per
// dataset, ties sharing the average of their positions.  Trials are ordered
// by trial index inside each cell before reducing, making the result
// invariant to input permutation.
AggregateReport aggregate(std::span<const TrialResult> results,
                          const std::string& baseline_id = kBaselineAgentId);

}  // namespace banditlab::harness
