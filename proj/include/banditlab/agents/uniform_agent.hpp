#pragma once

#include <cstdint>

#include "banditlab/agents/agent.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::agents {

class UniformAgent final : public Agent {
  public:
    UniformAgent(std::size_t context_dim, std::size_t num_actions, std::uint64_t seed);

    std::size_t act(const nd::Tensor& context) override;
    void observe(const nd::Tensor&, std::size_t, double) override {}
    const std::string& id() const override { return id_; }
    std::size_t context_dim() const override { return context_dim_; }
    std::size_t num_actions() const override { return num_actions_; }

  private:
    std::size_t context_dim_;
    std::size_t num_actions_;
    Rng rng_;
    std::string id_ = "uniform";
};

}  // namespace banditlab::agents
