#include "banditlab/agents/replay.hpp"

#include <algorithm>

#include "banditlab/errors.hpp"

namespace banditlab::agents {

ReplayBuffer::ReplayBuffer(std::size_t context_dim, std::size_t num_actions)
    : context_dim_(context_dim), num_actions_(num_actions) {
    if (context_dim == 0 || num_actions == 0) {
        throw ConfigError("ReplayBuffer: zero context_dim or num_actions");
    }
}

void ReplayBuffer::push(const nd::Tensor& context, std::size_t action, double reward) {
    if (context.numel() != context_dim_) {
        throw DimensionError("ReplayBuffer::push: context dimension mismatch");
    }
    if (action >= num_actions_) {
        throw DimensionError("ReplayBuffer::push: action out of range");
    }
    contexts_.insert(contexts_.end(), context.data.begin(), context.data.end());
    actions_.push_back(action);
    rewards_.push_back(reward);
}

nd::Tensor ReplayBuffer::context_at(std::size_t i) const {
    nd::Tensor t({context_dim_});
    std::copy_n(contexts_.begin() + static_cast<std::ptrdiff_t>(i * context_dim_),
                context_dim_, t.data.begin());
    return t;
}

MaskedBatch ReplayBuffer::gather(const std::vector<std::size_t>& rows) const {
    MaskedBatch batch;
    const std::size_t n = rows.size();
    batch.contexts = nd::Tensor({n, context_dim_});
    batch.reward_targets = nd::Tensor({n, num_actions_});
    batch.mask = nd::Tensor({n, num_actions_});
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t src = rows[r];
        std::copy_n(contexts_.begin() + static_cast<std::ptrdiff_t>(src * context_dim_),
                    context_dim_,
                    batch.contexts.data.begin() +
                        static_cast<std::ptrdiff_t>(r * context_dim_));
        batch.reward_targets.at(r, actions_[src]) = rewards_[src];
        batch.mask.at(r, actions_[src]) = 1.0;
    }
    return batch;
}

MaskedBatch ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
    if (size() == 0) throw ConfigError("ReplayBuffer::sample: buffer is empty");
    const std::size_t n = std::min(batch_size, size());
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = rng.uniform_int(size());
    return gather(rows);
}

MaskedBatch ReplayBuffer::all() const {
    if (size() == 0) throw ConfigError("ReplayBuffer::all: buffer is empty");
    std::vector<std::size_t> rows(size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return gather(rows);
}

}  // namespace banditlab::agents
