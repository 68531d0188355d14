#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "banditlab/agents/agent.hpp"
#include "banditlab/envs/environments.hpp"

namespace banditlab::harness {

// Everything one seeded trial produces.  `step_regret[t]` compares expected
// rewards (the optimum minus the conditional mean of the action actually
// taken) so it is non-negative and `cumulative_regret` is non-decreasing in
// the horizon regardless of reward noise.  Realized rewards still drive the
// agent's learning.
struct TrialResult {
    std::string dataset_id;
    std::string agent_id;
    std::uint64_t master_seed = 0;
    std::size_t trial_index = 0;
    std::vector<double> step_regret;    // length = horizon
    double cumulative_regret = 0.0;     // sum of step_regret
    std::vector<std::size_t> actions;   // length = horizon
    double wall_seconds = 0.0;          // measured; never serialized
};

// Runs the interaction loop for `horizon` steps: draw a round, let the agent
// act on the context, reveal only the chosen action's realized reward, and
// account regret against the round's expected rewards.  The env and agent
// must arrive freshly seeded; `master_seed` and `trial_index` are recorded
// verbatim for provenance.
TrialResult run_trial(envs::BanditEnvironment& env, agents::Agent& agent,
                      std::size_t horizon, std::uint64_t master_seed,
                      std::size_t trial_index);

}  // namespace banditlab::harness
