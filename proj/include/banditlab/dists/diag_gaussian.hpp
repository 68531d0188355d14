#pragma once

#include <span>

#include "banditlab/ndcore/graph.hpp"
#include "banditlab/ndcore/tensor.hpp"

namespace banditlab::dists {

// Diagonal Gaussian with per-dimension standard deviations (not variances).
// mean and std share a shape and std must be strictly positive.
struct DiagGaussian {
    nd::Tensor mean;
    nd::Tensor std;
};

void validate(const DiagGaussian& d);

// Elementwise log N(x_i; mean_i, std_i); same shape as x.
nd::Tensor logpdf_terms(const DiagGaussian& d, const nd::Tensor& x);

// Total log density (sum of the elementwise terms).
double logpdf(const DiagGaussian& d, const nd::Tensor& x);

// mean + std * noise, elementwise.
nd::Tensor reparam_sample(const DiagGaussian& d, const nd::Tensor& noise);

// KL(q || p) between diagonal Gaussians of the same shape, summed over
// dimensions.
double kl_diag(const DiagGaussian& q, const DiagGaussian& p);

// log((1/n) * sum_i exp(values_i)), max-stabilized.
double log_mean_exp(std::span<const double> values);

// Graph-side builders.  mean/std may broadcast against x under the graph's
// rules (same shape, row vector, or scalar).
nd::Node* gaussian_logpdf(nd::Graph& g, nd::Node* x, nd::Node* mean, nd::Node* std);
nd::Node* reparam_sample(nd::Graph& g, nd::Node* mean, nd::Node* std,
                         const nd::Tensor& noise);

}  // namespace banditlab::dists
