#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "banditlab/ndcore/tensor.hpp"

namespace banditlab::agents {

class Agent {
  public:
    virtual ~Agent() = default;
    virtual std::size_t act(const nd::Tensor& context) = 0;
    virtual void observe(const nd::Tensor& context, std::size_t action,
                         double reward) = 0;
    virtual const std::string& id() const = 0;
    virtual std::size_t context_dim() const = 0;
    virtual std::size_t num_actions() const = 0;
};

// First index attaining the maximum (deterministic tie-break).
std::size_t argmax_lowest(std::span<const double> values);

}  // namespace banditlab::agents
