#pragma once

#include <vector>

#include "banditlab/agents/agent.hpp"
#include "banditlab/agents/replay.hpp"
#include "banditlab/ndcore/tensor.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::agents {

// One evaluation of a local-uncertainty training objective on a batch,
// exposing the intermediate draws so tests can recompute every term
// independently.
struct LuObjectiveEval {
    std::vector<double> per_record;  // objective contribution per batch row
    double mean = 0.0;
    nd::Tensor z;        // [n x H] latent draws
    nd::Tensor center;   // [n x H] variational center (psi^(0) for the mixture family)
    nd::Tensor sigma;    // [n x H] variational stds
    nd::Tensor psi_all;  // mixture family only: [n*(K+1) x H] candidate centers
};

// Agents whose exploration comes from sampling a per-round latent variable.
// The extra surface lets the harness draw repeated mean-reward samples for
// exploration traces.
class LocalUncertaintyAgent : public Agent {
  public:
    // S independent draws of the decoded mean-reward vector, [S x C].
    virtual nd::Tensor sample_mean_rewards(const nd::Tensor& context, std::size_t S) = 0;

    // Objective evaluation on an arbitrary batch; does not update parameters.
    virtual LuObjectiveEval evaluate_objective(const MaskedBatch& batch,
                                               Rng& rng) const = 0;
};

}  // namespace banditlab::agents
