#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "banditlab/envs/dataset.hpp"
#include "banditlab/ndcore/tensor.hpp"

namespace banditlab::envs {

// One interaction round.  `rewards` holds the realized reward of every
// action; `expected_rewards` holds the conditional means given the context,
// which is what regret accounting consumes.  Learners only ever see the
// realized reward of the action they picked.
struct Round {
    nd::Tensor context;           // {context_dim}
    nd::Tensor rewards;           // {num_actions}, realized
    nd::Tensor expected_rewards;  // {num_actions}
    double optimal_expected = 0.0;
};

class BanditEnvironment {
  public:
    virtual ~BanditEnvironment() = default;
    virtual std::size_t context_dim() const = 0;
    virtual std::size_t num_actions() const = 0;
    virtual Round next() = 0;
    virtual const std::string& id() const = 0;
};

// Two actions over a binary-labelled table: action 0 declines (always 0);
// action 1 consumes, paying +5 on the safe class and, on the harmful class,
// +5 or -35 with equal probability (so its conditional mean is -15).
std::unique_ptr<BanditEnvironment> make_mushroom_env(
    std::shared_ptr<const DatasetTable> table, std::size_t harmful_class,
    std::uint64_t seed, std::string label = "mushroom");

// Picks the harmful class from the label names ("p"/"poison..." preferred,
// falling back to class 1).
std::size_t find_harmful_class(const DatasetTable& table);

// One action per class; reward 1 when the chosen action matches the row's
// label, else 0.  Deterministic given the context.
std::unique_ptr<BanditEnvironment> make_classification_env(
    std::shared_ptr<const DatasetTable> table, std::uint64_t seed, std::string label);

// Reward columns straight from the table (deterministic given the row).
std::unique_ptr<BanditEnvironment> make_table_reward_env(
    std::shared_ptr<const DatasetTable> table, std::uint64_t seed, std::string label);

// Synthetic wheel with exploration parameter delta: contexts uniform on the
// unit disk, five actions.  Action 0 pays N(1.2, 0.01^2) everywhere.  Inside
// radius delta, actions 1-4 all pay N(1.0, 0.01^2); outside, the action of
// the context's quadrant pays N(50, 0.01^2) and the other three N(1.0,
// 0.01^2).
std::unique_ptr<BanditEnvironment> make_wheel_env(double delta, std::uint64_t seed,
                                                  std::string label = "wheel");

}  // namespace banditlab::envs
