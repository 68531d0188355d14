#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "banditlab/agents/lu_common.hpp"
#include "banditlab/agents/replay.hpp"
#include "banditlab/ndcore/adam.hpp"
#include "banditlab/ndcore/graph.hpp"
#include "banditlab/ndcore/mlp.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::agents {

struct LuSiviConfig {
    std::size_t context_dim = 0;
    std::size_t num_actions = 0;
    std::size_t latent_dim = 50;      // H
    std::size_t mixture_size = 50;    // K: extra candidate centers per record
    double noise_std = 2.0;           // std of the injected noise epsilon
    std::size_t mean_hidden = 100;    // mean net: [context, eps] (2d) -> mean_hidden -> H
    std::size_t std_hidden = 50;      // std net:  context (d) -> std_hidden -> H (exp link)
    std::size_t decoder_hidden = 50;  // decoder: d+H -> decoder_hidden -> C
    std::size_t batch_size = 512;
    std::size_t train_every = 20;
    std::size_t train_steps = 40;
    double learning_rate = 1e-3;
    double prior_std_init = 1.25;
    double reward_std_init = 1.0;
    bool global_latent = false;  // same semantics as LuGaussConfig::global_latent

    void validate() const;
};

struct LuSiviModel {
    nd::Mlp mean_net;  // [context (or ones), eps] -> candidate latent center
    nd::Mlp std_net;   // context (or ones) -> latent std (exp link)
    nd::Mlp decoder;   // [context, z] -> per-action mean rewards
    nd::Tensor log_reward_std;  // {C}
    nd::Tensor log_prior_std;   // {1}

    void collect_params(std::vector<nd::Tensor*>& out);
};

// Semi-implicit variant: the latent center is itself a nonlinear transform of
// injected noise, psi = T([x, eps]), so the marginal q(z|x) is a continuous
// mixture.  Training maximizes the masked |A|-rescaled reconstruction plus
// log p(z) minus a log-mean over K+1 candidate-component densities, with z
// sampled from the first candidate (a lower bound on the marginal objective
// that tightens as K grows).
class LuSiviAgent final : public LocalUncertaintyAgent {
  public:
    LuSiviAgent(const LuSiviConfig& cfg, std::uint64_t init_seed,
                std::uint64_t act_seed, std::uint64_t train_seed);

    std::size_t act(const nd::Tensor& context) override;
    void observe(const nd::Tensor& context, std::size_t action, double reward) override;
    const std::string& id() const override { return id_; }
    std::size_t context_dim() const override { return cfg_.context_dim; }
    std::size_t num_actions() const override { return cfg_.num_actions; }

    nd::Tensor sample_mean_rewards(const nd::Tensor& context, std::size_t S) override;
    LuObjectiveEval evaluate_objective(const MaskedBatch& batch, Rng& rng) const override;

    // Same evaluation with an explicit mixture size (bound-ordering tests).
    LuObjectiveEval evaluate_objective_k(const MaskedBatch& batch, std::size_t K,
                                         Rng& rng) const;

    std::vector<nd::Tensor> objective_gradients(const MaskedBatch& batch, Rng& rng) const;

    double train_step(const MaskedBatch& batch, Rng& rng);

    // Pinned order: mean_net, std_net, decoder (weights then biases within
    // each), log_reward_std, log_prior_std.
    std::vector<nd::Tensor*> params();

    const ReplayBuffer& buffer() const { return buffer_; }
    std::size_t trains_run() const { return trains_run_; }
    const std::vector<double>& last_sampled_means() const { return last_means_; }

    LuSiviModel model;  // public: tests reach in

  private:
    struct Built {
        nd::Graph graph;
        nd::Node* mean = nullptr;
        nd::Node* per_record = nullptr;
        nd::Node* z = nullptr;
        nd::Node* center = nullptr;   // psi^(0), [n x H]
        nd::Node* sigma = nullptr;    // [n x H]
        nd::Node* psi_all = nullptr;  // [n*(K+1) x H], row i*(K+1)+k
        std::vector<nd::Node*> param_nodes;
    };
    Built build_objective(const MaskedBatch& batch, std::size_t K, Rng& rng,
                          bool trainable) const;
    void train();

    LuSiviConfig cfg_;
    std::string id_;
    ReplayBuffer buffer_;
    nd::AdamState adam_;
    Rng act_rng_;
    Rng train_rng_;
    std::size_t steps_ = 0;
    std::size_t trains_run_ = 0;
    std::vector<double> last_means_;
};

}  // namespace banditlab::agents
