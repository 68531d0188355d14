#include "banditlab/agents/uniform_agent.hpp"

#include "banditlab/errors.hpp"

namespace banditlab::agents {

std::size_t argmax_lowest(std::span<const double> values) {
    if (values.empty()) throw DimensionError("argmax_lowest: empty input");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

UniformAgent::UniformAgent(std::size_t context_dim, std::size_t num_actions,
                           std::uint64_t seed)
    : context_dim_(context_dim), num_actions_(num_actions), rng_(seed) {
    if (num_actions == 0) throw ConfigError("UniformAgent: no actions");
}

std::size_t UniformAgent::act(const nd::Tensor& context) {
    if (context.numel() != context_dim_) {
        throw DimensionError("UniformAgent::act: context dimension mismatch");
    }
    return rng_.uniform_int(num_actions_);
}

}  // namespace banditlab::agents
