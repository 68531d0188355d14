#include "banditlab/agents/lu_gauss.hpp"

#include <algorithm>
#include <cmath>

#include "banditlab/dists/diag_gaussian.hpp"
#include "banditlab/errors.hpp"

namespace banditlab::agents {

namespace {

std::vector<std::size_t> layer_widths(std::size_t in, std::size_t hidden,
                                      std::size_t out) {
    if (hidden == 0) return {in, out};
    return {in, hidden, out};
}

const LuGaussConfig& checked(const LuGaussConfig& c) {
    c.validate();
    return c;
}

nd::MlpSpec encoder_spec(const LuGaussConfig& c) {
    return {layer_widths(c.context_dim, c.encoder_hidden, c.encoder_out),
            nd::OutputLink::kIdentity};
}

nd::MlpSpec mean_spec(const LuGaussConfig& c) {
    return {layer_widths(c.encoder_out, c.head_hidden, c.latent_dim),
            nd::OutputLink::kIdentity};
}

nd::MlpSpec std_spec(const LuGaussConfig& c) {
    return {layer_widths(c.encoder_out, c.head_hidden, c.latent_dim),
            nd::OutputLink::kExp};
}

nd::MlpSpec decoder_spec(const LuGaussConfig& c) {
    return {layer_widths(c.context_dim + c.latent_dim, c.decoder_hidden, c.num_actions),
            nd::OutputLink::kIdentity};
}

nd::Tensor as_row(const nd::Tensor& context, std::size_t d) {
    if (context.numel() != d) {
        throw DimensionError("lu-gauss: context has wrong dimension");
    }
    nd::Tensor row({1, d});
    for (std::size_t j = 0; j < d; ++j) row[j] = context[j];
    return row;
}

// One posterior draw decoded to mean rewards, [1 x C].  Draw order: H latent
// noise values, row-major.
nd::Tensor decode_once(const LuGaussModel& m, const LuGaussConfig& cfg,
                       const nd::Tensor& xrow, Rng& rng) {
    const std::size_t d = cfg.context_dim;
    const std::size_t H = cfg.latent_dim;
    nd::Tensor q_in = cfg.global_latent ? nd::Tensor::full({1, d}, 1.0) : xrow;
    nd::Tensor h = nd::mlp_apply(m.encoder, q_in);
    nd::Tensor mu = nd::mlp_apply(m.mean_head, h);
    nd::Tensor sg = nd::mlp_apply(m.std_head, h);
    nd::Tensor dec_in({1, d + H});
    for (std::size_t j = 0; j < d; ++j) dec_in[j] = xrow[j];
    for (std::size_t j = 0; j < H; ++j) dec_in[d + j] = mu[j] + sg[j] * rng.normal();
    return nd::mlp_apply(m.decoder, dec_in);
}

}  // namespace

void LuGaussConfig::validate() const {
    if (context_dim == 0) throw ConfigError("lu-gauss: context_dim must be >= 1");
    if (num_actions == 0) throw ConfigError("lu-gauss: num_actions must be >= 1");
    if (latent_dim == 0) throw ConfigError("lu-gauss: latent_dim must be >= 1");
    if (encoder_out == 0) throw ConfigError("lu-gauss: encoder_out must be >= 1");
    if (batch_size == 0) throw ConfigError("lu-gauss: batch_size must be >= 1");
    if (train_every == 0) throw ConfigError("lu-gauss: train_every must be >= 1");
    if (train_steps == 0) throw ConfigError("lu-gauss: train_steps must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("lu-gauss: learning_rate must be > 0");
    if (!(prior_std_init > 0.0)) throw ConfigError("lu-gauss: prior_std_init must be > 0");
    if (!(reward_std_init > 0.0)) throw ConfigError("lu-gauss: reward_std_init must be > 0");
}

void LuGaussModel::collect_params(std::vector<nd::Tensor*>& out) {
    encoder.collect_params(out);
    mean_head.collect_params(out);
    std_head.collect_params(out);
    decoder.collect_params(out);
    out.push_back(&log_reward_std);
    out.push_back(&log_prior_std);
}

LuGaussAgent::LuGaussAgent(const LuGaussConfig& cfg, std::uint64_t init_seed,
                           std::uint64_t act_seed, std::uint64_t train_seed)
    : model{nd::Mlp(encoder_spec(checked(cfg))), nd::Mlp(mean_spec(cfg)),
            nd::Mlp(std_spec(cfg)), nd::Mlp(decoder_spec(cfg)),
            nd::Tensor::full({cfg.num_actions}, std::log(cfg.reward_std_init)),
            nd::Tensor::full({1}, std::log(cfg.prior_std_init))},
      cfg_(cfg),
      id_(cfg.global_latent ? "lu-gauss-global" : "lu-gauss"),
      buffer_(cfg.context_dim, cfg.num_actions),
      act_rng_(act_seed),
      train_rng_(train_seed) {
    Rng init_rng(init_seed);
    model.encoder.init(init_rng);
    model.mean_head.init(init_rng);
    model.std_head.init(init_rng);
    model.decoder.init(init_rng);
    adam_.lr = cfg_.learning_rate;
}

std::size_t LuGaussAgent::act(const nd::Tensor& context) {
    nd::Tensor xrow = as_row(context, cfg_.context_dim);
    nd::Tensor means = decode_once(model, cfg_, xrow, act_rng_);
    last_means_.assign(means.data.begin(), means.data.end());
    return argmax_lowest(last_means_);
}

void LuGaussAgent::observe(const nd::Tensor& context, std::size_t action,
                           double reward) {
    buffer_.push(context, action, reward);
    ++steps_;
    if (steps_ % cfg_.train_every == 0) train();
}

nd::Tensor LuGaussAgent::sample_mean_rewards(const nd::Tensor& context, std::size_t S) {
    if (S == 0) throw ConfigError("sample_mean_rewards: S must be >= 1");
    nd::Tensor xrow = as_row(context, cfg_.context_dim);
    nd::Tensor out({S, cfg_.num_actions});
    for (std::size_t s = 0; s < S; ++s) {
        nd::Tensor means = decode_once(model, cfg_, xrow, act_rng_);
        for (std::size_t a = 0; a < cfg_.num_actions; ++a) out.at(s, a) = means[a];
    }
    return out;
}

LuGaussAgent::Built LuGaussAgent::build_objective(const MaskedBatch& batch, Rng& rng,
                                                  bool trainable) const {
    const std::size_t n = batch.size();
    const std::size_t d = cfg_.context_dim;
    const std::size_t H = cfg_.latent_dim;
    const std::size_t C = cfg_.num_actions;
    if (n == 0) throw DimensionError("lu-gauss: objective needs a non-empty batch");
    if (batch.contexts.cols() != d || batch.reward_targets.cols() != C ||
        !nd::same_shape(batch.reward_targets, batch.mask)) {
        throw DimensionError("lu-gauss: batch shape mismatch");
    }

    Built b;
    nd::Graph& g = b.graph;

    nd::MlpNodes enc = nd::register_mlp(g, model.encoder, trainable);
    nd::MlpNodes mh = nd::register_mlp(g, model.mean_head, trainable);
    nd::MlpNodes sh = nd::register_mlp(g, model.std_head, trainable);
    nd::MlpNodes dec = nd::register_mlp(g, model.decoder, trainable);
    nd::Node* lrs = g.leaf(model.log_reward_std, trainable);
    nd::Node* lps = g.leaf(model.log_prior_std, trainable);
    auto push_net = [&b](const nd::MlpNodes& nodes) {
        for (nd::Node* w : nodes.weights) b.param_nodes.push_back(w);
        for (nd::Node* bias : nodes.biases) b.param_nodes.push_back(bias);
    };
    push_net(enc);
    push_net(mh);
    push_net(sh);
    push_net(dec);
    b.param_nodes.push_back(lrs);
    b.param_nodes.push_back(lps);

    nd::Node* x = g.leaf(batch.contexts, false);
    nd::Node* q_in =
        cfg_.global_latent ? g.leaf(nd::Tensor::full({n, d}, 1.0), false) : x;

    nd::Node* h = nd::mlp_forward(g, model.encoder.spec, enc, q_in);
    b.center = nd::mlp_forward(g, model.mean_head.spec, mh, h);
    b.sigma = nd::mlp_forward(g, model.std_head.spec, sh, h);

    nd::Tensor noise({n, H});
    for (std::size_t i = 0; i < noise.numel(); ++i) noise[i] = rng.normal();
    b.z = dists::reparam_sample(g, b.center, b.sigma, noise);

    nd::Node* mu_r = nd::mlp_forward(g, model.decoder.spec, dec, g.concat_cols(x, b.z));
    nd::Node* reward_std = g.clamp_min(g.exp(lrs), nd::kExpLinkFloor);
    nd::Node* targets = g.leaf(batch.reward_targets, false);
    nd::Node* mask = g.leaf(batch.mask, false);
    nd::Node* recon =
        g.row_sums(g.mul(dists::gaussian_logpdf(g, targets, mu_r, reward_std), mask));
    recon = g.scale(recon, static_cast<double>(C));

    nd::Node* prior_std = g.clamp_min(g.exp(lps), nd::kExpLinkFloor);
    nd::Node* zero = g.leaf(nd::Tensor::scalar(0.0), false);
    nd::Node* prior = g.row_sums(dists::gaussian_logpdf(g, b.z, zero, prior_std));
    nd::Node* entropy = g.row_sums(dists::gaussian_logpdf(g, b.z, b.center, b.sigma));
    nd::Node* ratio = g.sub(prior, entropy);
    if (cfg_.global_latent) {
        const double B =
            static_cast<double>(std::max<std::size_t>(std::size_t{1}, buffer_.size()));
        ratio = g.scale(ratio, 1.0 / B);
    }
    b.per_record = g.add(recon, ratio);
    b.mean = g.mean_all(b.per_record);
    return b;
}

LuObjectiveEval LuGaussAgent::evaluate_objective(const MaskedBatch& batch,
                                                 Rng& rng) const {
    Built b = build_objective(batch, rng, false);
    LuObjectiveEval ev;
    ev.mean = b.mean->value[0];
    ev.per_record.assign(b.per_record->value.data.begin(),
                         b.per_record->value.data.end());
    ev.z = b.z->value;
    ev.center = b.center->value;
    ev.sigma = b.sigma->value;
    return ev;
}

std::vector<nd::Tensor> LuGaussAgent::objective_gradients(const MaskedBatch& batch,
                                                          Rng& rng) const {
    Built b = build_objective(batch, rng, true);
    b.graph.backward(b.mean);
    std::vector<nd::Tensor> out;
    out.reserve(b.param_nodes.size());
    for (nd::Node* p : b.param_nodes) out.push_back(p->grad);
    return out;
}

double LuGaussAgent::train_step(const MaskedBatch& batch, Rng& rng) {
    Built b = build_objective(batch, rng, true);
    nd::Node* loss = b.graph.scale(b.mean, -1.0);
    b.graph.backward(loss);
    std::vector<nd::Tensor*> ps = params();
    if (ps.size() != b.param_nodes.size()) {
        throw Error("lu-gauss: parameter list out of sync");
    }
    std::vector<const nd::Tensor*> gs;
    gs.reserve(b.param_nodes.size());
    for (nd::Node* p : b.param_nodes) {
        if (!nd::all_finite(p->grad)) {
            throw NumericError("lu-gauss: non-finite gradient");
        }
        gs.push_back(&p->grad);
    }
    nd::adam_step(adam_, ps, gs);
    return b.mean->value[0];
}

std::vector<nd::Tensor*> LuGaussAgent::params() {
    std::vector<nd::Tensor*> out;
    model.collect_params(out);
    return out;
}

void LuGaussAgent::train() {
    for (std::size_t s = 0; s < cfg_.train_steps; ++s) {
        MaskedBatch batch = buffer_.sample(cfg_.batch_size, train_rng_);
        train_step(batch, train_rng_);
    }
    ++trains_run_;
}

}  // namespace banditlab::agents
