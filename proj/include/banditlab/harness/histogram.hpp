#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "banditlab/agents/lu_common.hpp"
#include "banditlab/envs/environments.hpp"

namespace banditlab::harness {

// How each trace row turns latent draws into mean-reward samples.
enum class TraceMode {
    kRepeatedDraws,  // one fixed context, `samples` independent draws per row
    kOnePerContext,  // one draw per context in the set per row
};

struct TraceOptions {
    std::size_t horizon = 0;         // interaction steps to run; 0 = snapshot only
    std::size_t record_every = 100;  // rows at 0, k, 2k, ... and the final step
    std::size_t samples = 2000;      // draws per row in kRepeatedDraws mode
    std::size_t bins = 50;

    void validate() const;
};

// Histogram-per-training-step trace of an agent's sampled mean rewards for
// one action.  Rows share one global binning covering every recorded draw;
// each row's counts sum to the number of draws taken for that row.
struct HistogramTrace {
    std::vector<std::size_t> steps;                // interactions completed per row
    std::vector<std::vector<double>> samples;      // raw draws per row
    std::vector<double> bin_edges;                 // bins + 1 increasing edges
    std::vector<std::vector<std::size_t>> counts;  // [rows x bins]
};

// Runs the interaction loop on `env`, pausing at the recording steps to draw
// mean-reward samples for `action` at the fixed context(s).  kRepeatedDraws
// requires exactly one context.  Throws ConfigError on dimension or option
// violations, NumericError if a sampled mean is non-finite.
HistogramTrace trace_histogram(envs::BanditEnvironment& env,
                               agents::LocalUncertaintyAgent& agent,
                               std::span<const nd::Tensor> contexts,
                               std::size_t action, TraceMode mode,
                               const TraceOptions& opts);

}  // namespace banditlab::harness
