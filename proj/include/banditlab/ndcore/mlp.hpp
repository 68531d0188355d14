#pragma once

#include <vector>

#include "banditlab/ndcore/graph.hpp"
#include "banditlab/ndcore/tensor.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::nd {

// Output links: identity leaves the last affine layer untouched; exp maps it
// through elementwise exp and floors the result so downstream log-densities
// stay finite.
enum class OutputLink { kIdentity, kExp };

constexpr double kExpLinkFloor = 1e-6;

struct MlpSpec {
    // Full width list, input first, output last: {in, h1, ..., out}.
    std::vector<std::size_t> widths;
    OutputLink link = OutputLink::kIdentity;

    std::size_t input_dim() const { return widths.front(); }
    std::size_t output_dim() const { return widths.back(); }
    std::size_t num_layers() const { return widths.size() - 1; }
    void validate() const;
};

// Plain parameter container: weights[l] is [widths[l] x widths[l+1]],
// biases[l] is {widths[l+1]}.  Hidden activations are ReLU; the output layer
// is affine followed by the spec's link.
struct Mlp {
    MlpSpec spec;
    std::vector<Tensor> weights;
    std::vector<Tensor> biases;

    explicit Mlp(MlpSpec spec_in) : spec(std::move(spec_in)) { spec.validate(); }

    // Weights ~ N(0, 1/fan_in), biases 0.
    void init(Rng& rng);

    void collect_params(std::vector<Tensor*>& out);
    std::size_t num_params() const;
};

// Graph-registered view of an Mlp's parameters for one forward/backward pass.
struct MlpNodes {
    std::vector<Node*> weights;
    std::vector<Node*> biases;
};

MlpNodes register_mlp(Graph& g, const Mlp& mlp, bool trainable = true);

// input must be rank 2 [n x input_dim].  Returns [n x output_dim]; throws
// NumericError if the output contains non-finite values.
Node* mlp_forward(Graph& g, const MlpSpec& spec, const MlpNodes& nodes, Node* input);

// Convenience for inference without touching an existing graph.
Tensor mlp_apply(const Mlp& mlp, const Tensor& input);

}  // namespace banditlab::nd
