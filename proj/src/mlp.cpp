#include "banditlab/ndcore/mlp.hpp"

#include <cmath>

#include "banditlab/errors.hpp"

namespace banditlab::nd {

void MlpSpec::validate() const {
    if (widths.size() < 2) {
        throw ConfigError("MlpSpec: need at least input and output widths");
    }
    for (std::size_t w : widths) {
        if (w == 0) throw ConfigError("MlpSpec: zero layer width");
    }
}

void Mlp::init(Rng& rng) {
    weights.clear();
    biases.clear();
    for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
        const std::size_t fan_in = spec.widths[l];
        const std::size_t fan_out = spec.widths[l + 1];
        Tensor w({fan_in, fan_out});
        const double std = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : w.data) v = rng.normal(0.0, std);
        weights.push_back(std::move(w));
        biases.push_back(Tensor({fan_out}));
    }
}

void Mlp::collect_params(std::vector<Tensor*>& out) {
    for (auto& w : weights) out.push_back(&w);
    for (auto& b : biases) out.push_back(&b);
}

std::size_t Mlp::num_params() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += w.numel();
    for (const auto& b : biases) n += b.numel();
    return n;
}

MlpNodes register_mlp(Graph& g, const Mlp& mlp, bool trainable) {
    if (mlp.weights.size() != mlp.spec.num_layers()) {
        throw ConfigError("register_mlp: network has not been initialized");
    }
    MlpNodes nodes;
    for (const auto& w : mlp.weights) nodes.weights.push_back(g.leaf(w, trainable));
    for (const auto& b : mlp.biases) nodes.biases.push_back(g.leaf(b, trainable));
    return nodes;
}

Node* mlp_forward(Graph& g, const MlpSpec& spec, const MlpNodes& nodes, Node* input) {
    if (input->value.rank() != 2 || input->value.shape[1] != spec.input_dim()) {
        throw DimensionError("mlp_forward: input shape does not match spec");
    }
    Node* h = input;
    const std::size_t layers = spec.num_layers();
    for (std::size_t l = 0; l < layers; ++l) {
        h = g.add(g.matmul(h, nodes.weights[l]), nodes.biases[l]);
        if (l + 1 < layers) h = g.relu(h);
    }
    if (spec.link == OutputLink::kExp) {
        h = g.clamp_min(g.exp(h), kExpLinkFloor);
    }
    if (!all_finite(h->value)) {
        throw NumericError("mlp_forward: non-finite output");
    }
    return h;
}

Tensor mlp_apply(const Mlp& mlp, const Tensor& input) {
    Graph g;
    MlpNodes nodes = register_mlp(g, mlp, /*trainable=*/false);
    Node* in = g.leaf(input, false);
    return mlp_forward(g, mlp.spec, nodes, in)->value;
}

}  // namespace banditlab::nd
