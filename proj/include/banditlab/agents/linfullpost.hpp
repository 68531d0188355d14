#pragma once

#include <cstdint>
#include <vector>

#include "banditlab/agents/agent.hpp"
#include "banditlab/agents/nig.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::agents {

// Thompson sampling with one exact Bayesian linear regression per action:
// each act() draws (beta, sigma^2) from every arm's posterior and plays the
// arm with the highest sampled mean reward.
class LinFullPostAgent final : public Agent {
  public:
    LinFullPostAgent(std::size_t context_dim, std::size_t num_actions, NigPrior prior,
                     std::uint64_t act_seed);

    std::size_t act(const nd::Tensor& context) override;
    void observe(const nd::Tensor& context, std::size_t action, double reward) override;
    const std::string& id() const override { return id_; }
    std::size_t context_dim() const override { return context_dim_; }
    std::size_t num_actions() const override { return posteriors_.size(); }

    const NigPosterior& posterior(std::size_t action) const { return posteriors_[action]; }

  private:
    std::size_t context_dim_;
    std::vector<NigPosterior> posteriors_;
    Rng rng_;
    std::string id_ = "linfullpost";
};

}  // namespace banditlab::agents
