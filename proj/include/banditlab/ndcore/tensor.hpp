#pragma once

#include <cstddef>
#include <vector>

namespace banditlab::nd {

// Dense row-major tensor of doubles.  Everything in the simulator is rank 1
// or rank 2; the shape vector is kept general so scalars ({1}) and matrices
// ({n, m}) share one type.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape_in);
    Tensor(std::vector<std::size_t> shape_in, std::vector<double> data_in);

    static Tensor scalar(double v);
    static Tensor full(std::vector<std::size_t> shape_in, double v);

    std::size_t numel() const;
    std::size_t rank() const { return shape.size(); }

    // Rank-2 accessors (rank-1 tensors count as a single row).
    std::size_t rows() const;
    std::size_t cols() const;
    double& at(std::size_t r, std::size_t c);
    double at(std::size_t r, std::size_t c) const;

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    void fill(double v);
};

bool same_shape(const Tensor& a, const Tensor& b);
bool all_finite(const Tensor& t);

}  // namespace banditlab::nd
