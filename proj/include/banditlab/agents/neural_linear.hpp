#pragma once

#include <cstdint>
#include <vector>

#include "banditlab/agents/agent.hpp"
#include "banditlab/agents/nig.hpp"
#include "banditlab/agents/replay.hpp"
#include "banditlab/ndcore/adam.hpp"
#include "banditlab/ndcore/mlp.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::agents {

struct NeuralLinearConfig {
    std::size_t context_dim = 0;
    std::size_t num_actions = 0;
    std::vector<std::size_t> hidden = {100, 100};
    std::size_t train_every = 20;
    std::size_t minibatches_per_period = 40;
    std::size_t batch_size = 512;
    double lr = 1e-3;
    NigPrior prior;

    void validate() const;
};

// Thompson sampling on a Bayesian linear head over the network's last hidden
// activations.  The network trains on masked squared error every
// `train_every` steps; afterwards the per-action posteriors are rebuilt from
// scratch over the whole buffer, since retraining moves every feature.
class NeuralLinearAgent final : public Agent {
  public:
    NeuralLinearAgent(const NeuralLinearConfig& cfg, std::uint64_t init_seed,
                      std::uint64_t act_seed, std::uint64_t train_seed);

    std::size_t act(const nd::Tensor& context) override;
    void observe(const nd::Tensor& context, std::size_t action, double reward) override;
    const std::string& id() const override { return id_; }
    std::size_t context_dim() const override { return cfg_.context_dim; }
    std::size_t num_actions() const override { return cfg_.num_actions; }

    // Last hidden activations for one context.
    nd::Tensor features(const nd::Tensor& context) const;

    const NigPosterior& posterior(std::size_t action) const { return posteriors_[action]; }
    std::size_t trains_run() const { return trains_run_; }

    nd::Mlp net;  // public: tests reach in

  private:
    void train();
    void refit_posteriors();

    NeuralLinearConfig cfg_;
    std::string id_ = "neural-linear";
    ReplayBuffer buffer_;
    nd::AdamState adam_;
    std::vector<NigPosterior> posteriors_;
    Rng act_rng_;
    Rng train_rng_;
    std::size_t steps_ = 0;
    std::size_t trains_run_ = 0;
};

}  // namespace banditlab::agents
