#pragma once

#include <vector>

#include "banditlab/ndcore/tensor.hpp"

namespace banditlab::nd {

// Adam with bias correction.  Moment buffers are sized lazily on the first
// step and must see the same parameter list (sizes and order) ever after.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step_count = 0;
    std::vector<Tensor> m;  // first moments
    std::vector<Tensor> v;  // second moments
};

// Applies one descent step in place: params[i] -= update(grads[i]).
void adam_step(AdamState& state, const std::vector<Tensor*>& params,
               const std::vector<const Tensor*>& grads);

}  // namespace banditlab::nd
