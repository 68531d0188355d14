#include "banditlab/harness/trial.hpp"

#include <chrono>

#include "banditlab/errors.hpp"

namespace banditlab::harness {

TrialResult run_trial(envs::BanditEnvironment& env, agents::Agent& agent,
                      std::size_t horizon, std::uint64_t master_seed,
                      std::size_t trial_index) {
    if (env.context_dim() != agent.context_dim() ||
        env.num_actions() != agent.num_actions()) {
        throw DimensionError("run_trial: env " + env.id() + " (" +
                             std::to_string(env.context_dim()) + "d, " +
                             std::to_string(env.num_actions()) + " actions) does not match agent " +
                             agent.id() + " (" + std::to_string(agent.context_dim()) + "d, " +
                             std::to_string(agent.num_actions()) + " actions)");
    }

    TrialResult out;
    out.dataset_id = env.id();
    out.agent_id = agent.id();
    out.master_seed = master_seed;
    out.trial_index = trial_index;
    out.step_regret.reserve(horizon);
    out.actions.reserve(horizon);

    const auto start = std::chrono::steady_clock::now();
    for (std::size_t t = 0; t < horizon; ++t) {
        const envs::Round round = env.next();
        const std::size_t action = agent.act(round.context);
        if (action >= agent.num_actions())
            throw Error("run_trial: agent " + agent.id() + " returned action " +
                        std::to_string(action) + " out of range");
        agent.observe(round.context, action, round.rewards[action]);

        const double regret = round.optimal_expected - round.expected_rewards[action];
        out.step_regret.push_back(regret);
        out.cumulative_regret += regret;
        out.actions.push_back(action);
    }
    out.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return out;
}

}  // namespace banditlab::harness
