#include "banditlab/ndcore/adam.hpp"

#include <cmath>

#include "banditlab/errors.hpp"

namespace banditlab::nd {

void adam_step(AdamState& state, const std::vector<Tensor*>& params,
               const std::vector<const Tensor*>& grads) {
    if (params.size() != grads.size()) {
        throw DimensionError("adam_step: params/grads length mismatch");
    }
    if (state.m.empty()) {
        for (const Tensor* p : params) {
            state.m.emplace_back(p->shape);
            state.v.emplace_back(p->shape);
        }
    }
    if (state.m.size() != params.size()) {
        throw DimensionError("adam_step: parameter list changed size");
    }
    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const Tensor& g = *grads[i];
        Tensor& m = state.m[i];
        Tensor& v = state.v[i];
        if (!same_shape(p, g) || !same_shape(p, m)) {
            throw DimensionError("adam_step: shape mismatch in parameter list");
        }
        const std::size_t n = p.numel();
        for (std::size_t k = 0; k < n; ++k) {
            m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
            v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
            const double m_hat = m[k] / bc1;
            const double v_hat = v[k] / bc2;
            p[k] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

}  // namespace banditlab::nd
