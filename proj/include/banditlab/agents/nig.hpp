#pragma once

#include <cstddef>
#include <vector>

#include "banditlab/ndcore/tensor.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::agents {

struct NigPrior {
    double a0 = 6.0;
    double b0 = 6.0;
    double lambda = 0.25;  // prior precision scale
};

// Bayesian linear regression y = x~' beta + eps with the conjugate
// Normal-Inverse-Gamma prior: beta | sigma^2 ~ N(0, sigma^2 (lambda I)^-1),
// sigma^2 ~ InvGamma(a0, b0).  An intercept column is appended internally,
// so `dim` is the raw feature size and beta has dim+1 entries (intercept
// last).  Updates are additive sufficient statistics, so the posterior is
// independent of observation order.
class NigPosterior {
  public:
    explicit NigPosterior(std::size_t dim, NigPrior prior = {});

    void observe(const nd::Tensor& x, double y);

    std::size_t count() const { return n_; }
    std::size_t dim() const { return dim_; }
    double a() const;
    double b() const;
    std::vector<double> posterior_mean() const;
    double sigma2_mean() const;  // b/(a-1); requires a > 1

    // Raw sufficient statistics (row-major precision), for verification.
    const std::vector<double>& precision() const { return lambda_; }
    const std::vector<double>& eta() const { return eta_; }

    struct Draw {
        std::vector<double> beta;
        double sigma2 = 0.0;
    };

    // One exact joint draw: sigma^2 = b / Gamma(a), then
    // beta = mu + sigma * U^-1 u with Lambda = U'U and u ~ N(0, I).
    Draw sample(Rng& rng) const;

    // x~' beta for a raw (un-augmented) context.
    double score(const nd::Tensor& x, const std::vector<double>& beta) const;

  private:
    std::size_t dim_;
    std::size_t p_;  // dim + 1
    NigPrior prior_;
    std::size_t n_ = 0;
    std::vector<double> lambda_;  // p x p
    std::vector<double> eta_;     // p
    double sum_yy_ = 0.0;
};

}  // namespace banditlab::agents
