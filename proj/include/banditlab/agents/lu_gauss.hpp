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

struct LuGaussConfig {
    std::size_t context_dim = 0;
    std::size_t num_actions = 0;
    std::size_t latent_dim = 50;       // H
    std::size_t encoder_hidden = 100;  // encoder: d -> encoder_hidden -> encoder_out
    std::size_t encoder_out = 50;
    std::size_t head_hidden = 50;      // heads: encoder_out -> head_hidden -> H
    std::size_t decoder_hidden = 50;   // decoder: d+H -> decoder_hidden -> C
    std::size_t batch_size = 512;
    std::size_t train_every = 20;      // environment steps between training periods
    std::size_t train_steps = 40;      // minibatches per training period
    double learning_rate = 1e-3;
    double prior_std_init = 1.25;
    double reward_std_init = 1.0;
    // Feed the variational networks a constant all-ones vector instead of the
    // context, making the latent global; the log-ratio term is then rescaled
    // by 1/(buffer size) so the shared latent's ratio is counted once per
    // full-data objective rather than once per record.
    bool global_latent = false;

    void validate() const;
};

// Generator networks plus the learned noise scales.  A hidden width of 0
// collapses that network to a single affine layer (used by toy tests with
// analytic optima).
struct LuGaussModel {
    nd::Mlp encoder;    // context (or ones) -> shared representation
    nd::Mlp mean_head;  // representation -> latent mean
    nd::Mlp std_head;   // representation -> latent std (exp link)
    nd::Mlp decoder;    // [context, z] -> per-action mean rewards
    nd::Tensor log_reward_std;  // {C}, std = clamped exp
    nd::Tensor log_prior_std;   // {1}, std = clamped exp

    void collect_params(std::vector<nd::Tensor*>& out);
};

// Thompson sampling through a per-context latent variable: act() samples
// z ~ q(z|x) once and plays the argmax of the decoded mean rewards.  Training
// maximizes the masked, |A|-rescaled reconstruction term plus the
// single-sample log-ratio log p(z) - log q(z|x), everything reparameterized.
class LuGaussAgent final : public LocalUncertaintyAgent {
  public:
    LuGaussAgent(const LuGaussConfig& cfg, std::uint64_t init_seed,
                 std::uint64_t act_seed, std::uint64_t train_seed);

    std::size_t act(const nd::Tensor& context) override;
    void observe(const nd::Tensor& context, std::size_t action, double reward) override;
    const std::string& id() const override { return id_; }
    std::size_t context_dim() const override { return cfg_.context_dim; }
    std::size_t num_actions() const override { return cfg_.num_actions; }

    nd::Tensor sample_mean_rewards(const nd::Tensor& context, std::size_t S) override;
    LuObjectiveEval evaluate_objective(const MaskedBatch& batch, Rng& rng) const override;

    // d(mean objective)/d(param), aligned with params(); model unchanged.
    std::vector<nd::Tensor> objective_gradients(const MaskedBatch& batch, Rng& rng) const;

    // One maximizing Adam step on the given batch; returns the objective mean.
    double train_step(const MaskedBatch& batch, Rng& rng);

    // Pinned order: encoder, mean_head, std_head, decoder (weights then
    // biases within each), log_reward_std, log_prior_std.
    std::vector<nd::Tensor*> params();

    const ReplayBuffer& buffer() const { return buffer_; }
    std::size_t trains_run() const { return trains_run_; }

    // Mean-reward vector sampled by the most recent act().
    const std::vector<double>& last_sampled_means() const { return last_means_; }

    LuGaussModel model;  // public: tests reach in

  private:
    struct Built {
        nd::Graph graph;
        nd::Node* mean = nullptr;        // scalar objective (maximize)
        nd::Node* per_record = nullptr;  // [n x 1]
        nd::Node* z = nullptr;
        nd::Node* center = nullptr;
        nd::Node* sigma = nullptr;
        std::vector<nd::Node*> param_nodes;  // aligned with params()
    };
    Built build_objective(const MaskedBatch& batch, Rng& rng, bool trainable) const;
    void train();

    LuGaussConfig cfg_;
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
