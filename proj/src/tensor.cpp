#include "banditlab/ndcore/tensor.hpp"

#include <cmath>
#include <numeric>

#include "banditlab/errors.hpp"

namespace banditlab::nd {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape_in)
    : shape(std::move(shape_in)), data(product(shape), 0.0) {
    if (shape.empty()) {
        throw DimensionError("Tensor: empty shape");
    }
}

Tensor::Tensor(std::vector<std::size_t> shape_in, std::vector<double> data_in)
    : shape(std::move(shape_in)), data(std::move(data_in)) {
    if (shape.empty()) {
        throw DimensionError("Tensor: empty shape");
    }
    if (data.size() != product(shape)) {
        throw DimensionError("Tensor: data size does not match shape");
    }
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::full(std::vector<std::size_t> shape_in, double v) {
    Tensor t(std::move(shape_in));
    t.fill(v);
    return t;
}

std::size_t Tensor::numel() const { return data.size(); }

std::size_t Tensor::rows() const { return rank() == 2 ? shape[0] : 1; }

std::size_t Tensor::cols() const { return rank() == 2 ? shape[1] : shape[0]; }

double& Tensor::at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }

double Tensor::at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

void Tensor::fill(double v) { std::fill(data.begin(), data.end(), v); }

bool same_shape(const Tensor& a, const Tensor& b) { return a.shape == b.shape; }

bool all_finite(const Tensor& t) {
    for (double v : t.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace banditlab::nd
