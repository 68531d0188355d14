#include "banditlab/agents/linfullpost.hpp"

#include "banditlab/errors.hpp"

namespace banditlab::agents {

LinFullPostAgent::LinFullPostAgent(std::size_t context_dim, std::size_t num_actions,
                                   NigPrior prior, std::uint64_t act_seed)
    : context_dim_(context_dim), rng_(act_seed) {
    if (num_actions == 0) throw ConfigError("LinFullPostAgent: no actions");
    posteriors_.reserve(num_actions);
    for (std::size_t a = 0; a < num_actions; ++a) {
        posteriors_.emplace_back(context_dim, prior);
    }
}

std::size_t LinFullPostAgent::act(const nd::Tensor& context) {
    if (context.numel() != context_dim_) {
        throw DimensionError("LinFullPostAgent::act: context dimension mismatch");
    }
    std::vector<double> scores(posteriors_.size());
    for (std::size_t a = 0; a < posteriors_.size(); ++a) {
        const NigPosterior::Draw draw = posteriors_[a].sample(rng_);
        scores[a] = posteriors_[a].score(context, draw.beta);
    }
    return argmax_lowest(scores);
}

void LinFullPostAgent::observe(const nd::Tensor& context, std::size_t action,
                               double reward) {
    if (action >= posteriors_.size()) {
        throw DimensionError("LinFullPostAgent::observe: action out of range");
    }
    posteriors_[action].observe(context, reward);
}

}  // namespace banditlab::agents
