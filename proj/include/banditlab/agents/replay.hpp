#pragma once

#include <cstddef>
#include <vector>

#include "banditlab/ndcore/tensor.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::agents {

// Training view of interaction history under partial feedback: each row's
// reward vector is zero except at the action actually taken, and the mask
// records which entry is real.
struct MaskedBatch {
    nd::Tensor contexts;        // [n x context_dim]
    nd::Tensor reward_targets;  // [n x num_actions]
    nd::Tensor mask;            // [n x num_actions], 1 where observed
    std::size_t size() const { return contexts.rows(); }
};

class ReplayBuffer {
  public:
    ReplayBuffer(std::size_t context_dim, std::size_t num_actions);

    void push(const nd::Tensor& context, std::size_t action, double reward);

    std::size_t size() const { return actions_.size(); }
    std::size_t context_dim() const { return context_dim_; }
    std::size_t num_actions() const { return num_actions_; }

    nd::Tensor context_at(std::size_t i) const;
    std::size_t action_at(std::size_t i) const { return actions_[i]; }
    double reward_at(std::size_t i) const { return rewards_[i]; }

    // Uniform sample with replacement; batch_size is capped at size().
    MaskedBatch sample(std::size_t batch_size, Rng& rng) const;

    // Every record once, in insertion order.
    MaskedBatch all() const;

  private:
    MaskedBatch gather(const std::vector<std::size_t>& rows) const;

    std::size_t context_dim_;
    std::size_t num_actions_;
    std::vector<double> contexts_;  // row-major
    std::vector<std::size_t> actions_;
    std::vector<double> rewards_;
};

}  // namespace banditlab::agents
