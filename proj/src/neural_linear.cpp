#include "banditlab/agents/neural_linear.hpp"

#include <algorithm>

#include "banditlab/errors.hpp"
#include "banditlab/ndcore/graph.hpp"

namespace banditlab::agents {

namespace {

nd::MlpSpec net_spec(const NeuralLinearConfig& cfg) {
    cfg.validate();
    std::vector<std::size_t> widths{cfg.context_dim};
    widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
    widths.push_back(cfg.num_actions);
    return {widths, nd::OutputLink::kIdentity};
}

}  // namespace

void NeuralLinearConfig::validate() const {
    if (context_dim == 0 || num_actions == 0) {
        throw ConfigError("NeuralLinearConfig: zero context_dim or num_actions");
    }
    if (hidden.empty()) {
        throw ConfigError("NeuralLinearConfig: needs at least one hidden layer");
    }
    if (train_every == 0 || minibatches_per_period == 0 || batch_size == 0) {
        throw ConfigError("NeuralLinearConfig: cadence values must be >= 1");
    }
    if (!(lr > 0.0)) throw ConfigError("NeuralLinearConfig: lr must be positive");
}

NeuralLinearAgent::NeuralLinearAgent(const NeuralLinearConfig& cfg,
                                     std::uint64_t init_seed, std::uint64_t act_seed,
                                     std::uint64_t train_seed)
    : net(net_spec(cfg)),
      cfg_(cfg),
      buffer_(cfg.context_dim, cfg.num_actions),
      act_rng_(act_seed),
      train_rng_(train_seed) {
    adam_.lr = cfg_.lr;
    Rng init_rng(init_seed);
    net.init(init_rng);
    const std::size_t feature_dim = cfg_.hidden.back();
    posteriors_.reserve(cfg_.num_actions);
    for (std::size_t a = 0; a < cfg_.num_actions; ++a) {
        posteriors_.emplace_back(feature_dim, cfg_.prior);
    }
}

nd::Tensor NeuralLinearAgent::features(const nd::Tensor& context) const {
    if (context.numel() != cfg_.context_dim) {
        throw DimensionError("NeuralLinearAgent::features: context dimension mismatch");
    }
    // All layers except the linear head, ReLU after each.
    std::vector<double> h(context.data);
    for (std::size_t l = 0; l + 1 < net.weights.size(); ++l) {
        const nd::Tensor& w = net.weights[l];
        const nd::Tensor& b = net.biases[l];
        const std::size_t in = w.shape[0];
        const std::size_t out = w.shape[1];
        std::vector<double> next(out);
        for (std::size_t j = 0; j < out; ++j) {
            double s = b[j];
            for (std::size_t k = 0; k < in; ++k) s += h[k] * w.data[k * out + j];
            next[j] = s > 0.0 ? s : 0.0;
        }
        h = std::move(next);
    }
    const std::size_t feature_dim = h.size();
    return nd::Tensor({feature_dim}, std::move(h));
}

std::size_t NeuralLinearAgent::act(const nd::Tensor& context) {
    const nd::Tensor f = features(context);
    std::vector<double> scores(cfg_.num_actions);
    for (std::size_t a = 0; a < cfg_.num_actions; ++a) {
        const NigPosterior::Draw draw = posteriors_[a].sample(act_rng_);
        scores[a] = posteriors_[a].score(f, draw.beta);
    }
    return argmax_lowest(scores);
}

void NeuralLinearAgent::observe(const nd::Tensor& context, std::size_t action,
                                double reward) {
    buffer_.push(context, action, reward);
    ++steps_;
    if (steps_ % cfg_.train_every == 0) {
        train();
        refit_posteriors();
    }
}

void NeuralLinearAgent::train() {
    std::vector<nd::Tensor*> params;
    net.collect_params(params);
    for (std::size_t it = 0; it < cfg_.minibatches_per_period; ++it) {
        MaskedBatch batch = buffer_.sample(cfg_.batch_size, train_rng_);
        nd::Graph g;
        nd::MlpNodes nodes = register_mlp(g, net);
        nd::Node* out = mlp_forward(g, net.spec, nodes, g.leaf(batch.contexts));
        nd::Node* diff = g.sub(out, g.leaf(batch.reward_targets));
        nd::Node* masked = g.mul(g.square(diff), g.leaf(batch.mask));
        nd::Node* loss = g.scale(g.sum_all(masked),
                                 1.0 / static_cast<double>(batch.size()));
        g.backward(loss);
        std::vector<const nd::Tensor*> grads;
        for (nd::Node* n : nodes.weights) grads.push_back(&n->grad);
        for (nd::Node* n : nodes.biases) grads.push_back(&n->grad);
        for (const nd::Tensor* gr : grads) {
            if (!all_finite(*gr)) {
                throw NumericError("NeuralLinearAgent: non-finite gradient");
            }
        }
        adam_step(adam_, params, grads);
    }
    ++trains_run_;
}

void NeuralLinearAgent::refit_posteriors() {
    const std::size_t feature_dim = cfg_.hidden.back();
    std::vector<NigPosterior> fresh;
    fresh.reserve(cfg_.num_actions);
    for (std::size_t a = 0; a < cfg_.num_actions; ++a) {
        fresh.emplace_back(feature_dim, cfg_.prior);
    }
    for (std::size_t i = 0; i < buffer_.size(); ++i) {
        const nd::Tensor f = features(buffer_.context_at(i));
        fresh[buffer_.action_at(i)].observe(f, buffer_.reward_at(i));
    }
    posteriors_ = std::move(fresh);
}

}  // namespace banditlab::agents
