#include "banditlab/agents/nig.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "banditlab/errors.hpp"

namespace banditlab::agents {

namespace {
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
}  // namespace

NigPosterior::NigPosterior(std::size_t dim, NigPrior prior)
    : dim_(dim), p_(dim + 1), prior_(prior) {
    if (dim == 0) throw ConfigError("NigPosterior: zero feature dimension");
    if (!(prior.a0 > 0.0) || !(prior.b0 > 0.0) || !(prior.lambda > 0.0)) {
        throw ConfigError("NigPosterior: prior hyperparameters must be positive");
    }
    lambda_.assign(p_ * p_, 0.0);
    for (std::size_t i = 0; i < p_; ++i) lambda_[i * p_ + i] = prior.lambda;
    eta_.assign(p_, 0.0);
}

void NigPosterior::observe(const nd::Tensor& x, double y) {
    if (x.numel() != dim_) {
        throw DimensionError("NigPosterior::observe: feature dimension mismatch");
    }
    std::vector<double> xt(p_);
    for (std::size_t i = 0; i < dim_; ++i) xt[i] = x[i];
    xt[dim_] = 1.0;  // intercept
    for (std::size_t i = 0; i < p_; ++i) {
        for (std::size_t j = 0; j < p_; ++j) {
            lambda_[i * p_ + j] += xt[i] * xt[j];
        }
        eta_[i] += xt[i] * y;
    }
    sum_yy_ += y * y;
    ++n_;
}

double NigPosterior::a() const {
    return prior_.a0 + 0.5 * static_cast<double>(n_);
}

std::vector<double> NigPosterior::posterior_mean() const {
    Eigen::Map<const Mat> lam(lambda_.data(), static_cast<Eigen::Index>(p_),
                              static_cast<Eigen::Index>(p_));
    Eigen::Map<const Vec> eta(eta_.data(), static_cast<Eigen::Index>(p_));
    Eigen::LLT<Mat> llt(lam);
    if (llt.info() != Eigen::Success) {
        throw NumericError("NigPosterior: precision matrix is not positive definite");
    }
    Vec mu = llt.solve(eta);
    return std::vector<double>(mu.data(), mu.data() + p_);
}

double NigPosterior::b() const {
    std::vector<double> mu = posterior_mean();
    double quad = 0.0;
    for (std::size_t i = 0; i < p_; ++i) quad += mu[i] * eta_[i];
    const double b = prior_.b0 + 0.5 * (sum_yy_ - quad);
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw NumericError("NigPosterior: non-positive posterior scale b");
    }
    return b;
}

double NigPosterior::sigma2_mean() const {
    const double shape = a();
    if (!(shape > 1.0)) {
        throw NumericError("NigPosterior::sigma2_mean: needs a > 1");
    }
    return b() / (shape - 1.0);
}

NigPosterior::Draw NigPosterior::sample(Rng& rng) const {
    Eigen::Map<const Mat> lam(lambda_.data(), static_cast<Eigen::Index>(p_),
                              static_cast<Eigen::Index>(p_));
    Eigen::Map<const Vec> eta(eta_.data(), static_cast<Eigen::Index>(p_));
    Eigen::LLT<Mat> llt(lam);
    if (llt.info() != Eigen::Success) {
        throw NumericError("NigPosterior: precision matrix is not positive definite");
    }
    Vec mu = llt.solve(eta);
    double quad = mu.dot(eta);
    const double b_post = prior_.b0 + 0.5 * (sum_yy_ - quad);
    if (!(b_post > 0.0) || !std::isfinite(b_post)) {
        throw NumericError("NigPosterior: non-positive posterior scale b");
    }

    Draw d;
    // Draw order is pinned for reproducibility: sigma^2 first, then the
    // p normals for beta in index order.
    d.sigma2 = b_post / rng.gamma(a());
    const double sigma = std::sqrt(d.sigma2);
    Vec u(static_cast<Eigen::Index>(p_));
    for (std::size_t i = 0; i < p_; ++i) u[static_cast<Eigen::Index>(i)] = rng.normal();
    // Solve U v = u with Lambda = U'U, giving Cov(v) = Lambda^-1.
    Vec v = llt.matrixU().solve(u);
    d.beta.resize(p_);
    for (std::size_t i = 0; i < p_; ++i) {
        d.beta[i] = mu[static_cast<Eigen::Index>(i)] + sigma * v[static_cast<Eigen::Index>(i)];
    }
    return d;
}

double NigPosterior::score(const nd::Tensor& x, const std::vector<double>& beta) const {
    if (x.numel() != dim_ || beta.size() != p_) {
        throw DimensionError("NigPosterior::score: dimension mismatch");
    }
    double s = beta[dim_];
    for (std::size_t i = 0; i < dim_; ++i) s += x[i] * beta[i];
    return s;
}

}  // namespace banditlab::agents
