#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "banditlab/agents/linfullpost.hpp"
#include "banditlab/agents/nig.hpp"
#include "banditlab/ndcore/tensor.hpp"
#include "banditlab/rng.hpp"
#include "oracles.hpp"

using banditlab::Rng;
using banditlab::agents::LinFullPostAgent;
using banditlab::agents::NigPosterior;
using banditlab::agents::NigPrior;
using banditlab::nd::Tensor;

namespace {

Tensor random_context(std::size_t d, Rng& rng) {
    Tensor x({d});
    for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform(-1.0, 1.0);
    return x;
}

// Dense conjugate-update oracle on the intercept-augmented design matrix.
struct BatchFit {
    Eigen::MatrixXd precision;
    Eigen::VectorXd eta;
    Eigen::VectorXd mean;
    double a = 0.0;
    double b = 0.0;
};

BatchFit batch_fit(const std::vector<Tensor>& xs, const std::vector<double>& ys,
                   const NigPrior& prior) {
    const std::size_t n = xs.size();
    const std::size_t p = xs[0].numel() + 1;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < p; ++j) X(i, j) = xs[i][j];
        X(i, p - 1) = 1.0;
        y(i) = ys[i];
    }
    BatchFit f;
    f.precision = prior.lambda * Eigen::MatrixXd::Identity(p, p) + X.transpose() * X;
    f.eta = X.transpose() * y;
    f.mean = f.precision.ldlt().solve(f.eta);
    f.a = prior.a0 + 0.5 * static_cast<double>(n);
    f.b = prior.b0 + 0.5 * (y.squaredNorm() - f.mean.dot(f.eta));
    return f;
}

}  // namespace

TEST_CASE("nig: with no data, draws reproduce the prior moments") {
    // sigma^2 ~ InvGamma(6, 6): mean 1.2; beta | sigma^2 ~ N(0, sigma^2 / 0.25).
    NigPosterior post(2);
    Rng rng(71);
    std::vector<double> s2s, b0s;
    for (int i = 0; i < 10000; ++i) {
        auto draw = post.sample(rng);
        s2s.push_back(draw.sigma2);
        b0s.push_back(draw.beta[0]);
    }
    auto s2 = oracle::mean_se(s2s);
    CHECK(std::fabs(s2.mean - 1.2) < 3.0 * s2.se);
    auto b0 = oracle::mean_se(b0s);
    CHECK(std::fabs(b0.mean) < 3.0 * b0.se);
}

TEST_CASE("nig: recovers a noiseless 1-d slope within 0.05") {
    NigPosterior post(1);
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        Tensor x = random_context(1, rng);
        post.observe(x, 2.0 * x[0]);
    }
    auto mean = post.posterior_mean();
    CHECK(mean[0] == doctest::Approx(2.0).epsilon(0.025));
    CHECK(std::fabs(mean[1]) < 0.05);  // intercept
}

TEST_CASE("nig: sequential updates match a dense batch solve in any order") {
    const std::size_t d = 3;
    const std::size_t n = 20;
    Rng rng(99);
    std::vector<Tensor> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < n; ++i) {
        Tensor x = random_context(d, rng);
        xs.push_back(x);
        ys.push_back(0.5 * x[0] - 1.5 * x[2] + 0.3 + 0.1 * rng.normal());
    }

    NigPrior prior;
    BatchFit oracle_fit = batch_fit(xs, ys, prior);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int perm = 0; perm < 4; ++perm) {
        NigPosterior post(d, prior);
        for (std::size_t i : order) post.observe(xs[i], ys[i]);

        const std::size_t p = d + 1;
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) {
                CHECK(std::fabs(post.precision()[r * p + c] - oracle_fit.precision(r, c)) <
                      1e-10);
            }
        }
        auto mean = post.posterior_mean();
        for (std::size_t j = 0; j < p; ++j) {
            CHECK(std::fabs(post.eta()[j] - oracle_fit.eta(j)) < 1e-10);
            CHECK(std::fabs(mean[j] - oracle_fit.mean(j)) < 1e-10);
        }
        CHECK(std::fabs(post.a() - oracle_fit.a) < 1e-10);
        CHECK(std::fabs(post.b() - oracle_fit.b) < 1e-10);

        // Reshuffle for the next round.
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[rng.uniform_int(i)]);
        }
    }
}

TEST_CASE("nig: joint draws match posterior moments") {
    const std::size_t d = 2;
    NigPosterior post(d);
    Rng rng(123);
    for (int i = 0; i < 200; ++i) {
        Tensor x = random_context(d, rng);
        post.observe(x, 1.0 - x[0] + 2.0 * x[1] + 0.5 * rng.normal());
    }
    std::vector<std::vector<double>> betas(d + 1);
    std::vector<double> s2s;
    for (int i = 0; i < 10000; ++i) {
        auto draw = post.sample(rng);
        for (std::size_t j = 0; j <= d; ++j) betas[j].push_back(draw.beta[j]);
        s2s.push_back(draw.sigma2);
    }
    auto mean = post.posterior_mean();
    for (std::size_t j = 0; j <= d; ++j) {
        auto m = oracle::mean_se(betas[j]);
        CHECK(std::fabs(m.mean - mean[j]) < 3.0 * m.se);
    }
    auto s2 = oracle::mean_se(s2s);
    CHECK(std::fabs(s2.mean - post.sigma2_mean()) < 3.0 * s2.se);
}

TEST_CASE("nig: a tight posterior degenerates onto its mean") {
    NigPrior prior;
    prior.a0 = 200.0;
    prior.b0 = 1e-8;
    prior.lambda = 1.0;
    NigPosterior post(1, prior);
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        auto draw = post.sample(rng);
        CHECK(draw.sigma2 < 1e-9);
        CHECK(std::fabs(draw.beta[0]) < 1e-4);
        CHECK(std::fabs(draw.beta[1]) < 1e-4);
    }
}

TEST_CASE("linfullpost: exchangeable arms are played uniformly") {
    const std::size_t C = 4;
    LinFullPostAgent agent(2, C, NigPrior{}, 17);
    Rng ctx_rng(18);
    std::vector<std::size_t> counts(C, 0);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        ++counts[agent.act(random_context(2, ctx_rng))];
    }
    const double se = std::sqrt(0.25 * 0.75 / n);
    for (std::size_t a = 0; a < C; ++a) {
        CHECK(std::fabs(counts[a] / static_cast<double>(n) - 0.25) < 3.0 * se);
    }
}

TEST_CASE("linfullpost: a clearly better arm dominates") {
    const std::size_t C = 3;
    LinFullPostAgent agent(2, C, NigPrior{}, 29);
    Rng rng(30);
    for (int i = 0; i < 500; ++i) {
        for (std::size_t a = 0; a < C; ++a) {
            const double base = a == 0 ? 1.0 : 0.0;
            agent.observe(random_context(2, rng), a, base + 0.01 * rng.normal());
        }
    }
    int wins = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        if (agent.act(random_context(2, rng)) == 0) ++wins;
    }
    CHECK(wins >= 990);
}
