#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written straight-line from the textbook formulas and
// deliberately avoids calling into the code under test (tensors are reused
// as plain storage only).

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "banditlab/ndcore/tensor.hpp"

namespace oracle {

using banditlab::nd::Tensor;

// Plain-loop MLP forward pass: affine + ReLU hidden layers, affine output,
// optional exp link floored at `floor`.  Also reports the smallest absolute
// hidden pre-activation seen, so callers can reject nets whose ReLU kinks sit
// too close to zero for finite differencing.
inline Tensor mlp_forward(const std::vector<Tensor>& weights,
                          const std::vector<Tensor>& biases, bool exp_link,
                          double floor, const Tensor& input,
                          double* min_abs_preact = nullptr) {
    Tensor h = input;
    double min_pre = 1e300;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const Tensor& w = weights[l];
        const Tensor& b = biases[l];
        const std::size_t rows = h.rows();
        const std::size_t in = w.shape[0];
        const std::size_t out = w.shape[1];
        Tensor next({rows, out});
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < out; ++j) {
                double s = b[j];
                for (std::size_t k = 0; k < in; ++k) {
                    s += h[r * in + k] * w[k * out + j];
                }
                if (l + 1 < weights.size()) {
                    min_pre = std::min(min_pre, std::fabs(s));
                    s = s > 0.0 ? s : 0.0;
                }
                next[r * out + j] = s;
            }
        }
        h = std::move(next);
    }
    if (exp_link) {
        for (double& v : h.data) {
            v = std::exp(v);
            if (v < floor) v = floor;
        }
    }
    if (min_abs_preact) *min_abs_preact = min_pre;
    return h;
}

inline double gauss_logpdf(double x, double mean, double std) {
    const double u = (x - mean) / std;
    return -0.5 * std::log(2.0 * 3.14159265358979323846 * std * std) - 0.5 * u * u;
}

inline double kl_gauss(double m1, double s1, double m2, double s2) {
    return std::log(s2 / s1) + (s1 * s1 + (m1 - m2) * (m1 - m2)) / (2.0 * s2 * s2) - 0.5;
}

// Central finite difference of eval() with respect to *coord.
inline double central_fd(const std::function<double()>& eval, double* coord, double h) {
    const double saved = *coord;
    *coord = saved + h;
    const double f_plus = eval();
    *coord = saved - h;
    const double f_minus = eval();
    *coord = saved;
    return (f_plus - f_minus) / (2.0 * h);
}

inline double rel_err(double a, double b, double floor_scale = 1e-3) {
    double denom = std::max({std::fabs(a), std::fabs(b), floor_scale});
    return std::fabs(a - b) / denom;
}

// Mean and standard error of a sample.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) r.mean += x;
    r.mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
    return r;
}

}  // namespace oracle
