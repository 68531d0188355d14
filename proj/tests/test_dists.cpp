#include <algorithm>
#include <cmath>
#include <vector>

#include "banditlab/dists/diag_gaussian.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/ndcore/graph.hpp"
#include "banditlab/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace banditlab;

namespace {

dists::DiagGaussian random_gaussian(Rng& rng, std::size_t dim) {
    nd::Tensor mean({dim});
    nd::Tensor std({dim});
    for (std::size_t i = 0; i < dim; ++i) {
        mean[i] = rng.normal(0.0, 2.0);
        std[i] = std::exp(rng.normal(0.0, 0.5));
    }
    return {std::move(mean), std::move(std)};
}

}  // namespace

TEST_CASE("logpdf matches the textbook formula") {
    // Frozen value: standard normal density at zero.
    dists::DiagGaussian unit{nd::Tensor::scalar(0.0), nd::Tensor::scalar(1.0)};
    CHECK(dists::logpdf(unit, nd::Tensor::scalar(0.0)) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-14));

    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        auto d = random_gaussian(rng, 4);
        nd::Tensor x({4});
        for (double& v : x.data) v = rng.normal(0.0, 3.0);
        double want = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            want += oracle::gauss_logpdf(x[i], d.mean[i], d.std[i]);
        }
        CHECK(dists::logpdf(d, x) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("density integrates to one on a grid") {
    dists::DiagGaussian d{nd::Tensor::scalar(0.3), nd::Tensor::scalar(0.7)};
    const int n = 20001;
    const double lo = 0.3 - 7.0 * 0.7, hi = 0.3 + 7.0 * 0.7;
    const double dx = (hi - lo) / (n - 1);
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + i * dx;
        const double p = std::exp(dists::logpdf(d, nd::Tensor::scalar(x)));
        integral += p * dx * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("reparam_sample is the affine map and matches moments") {
    dists::DiagGaussian d{nd::Tensor({2}, {1.0, -2.0}), nd::Tensor({2}, {0.5, 3.0})};
    nd::Tensor eps({2}, {2.0, -1.0});
    nd::Tensor z = dists::reparam_sample(d, eps);
    CHECK(z.data == std::vector<double>{2.0, -5.0});

    Rng rng(11);
    const int n = 100000;
    std::vector<double> first(n);
    for (int i = 0; i < n; ++i) {
        nd::Tensor noise({2}, {rng.normal(), rng.normal()});
        first[i] = dists::reparam_sample(d, noise)[0];
    }
    auto ms = oracle::mean_se(first);
    CHECK(std::fabs(ms.mean - 1.0) < 3.0 * ms.se);
    double var = 0.0;
    for (double v : first) var += (v - ms.mean) * (v - ms.mean);
    var /= n - 1;
    CHECK(var == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("closed-form KL agrees with Monte Carlo estimates") {
    Rng rng(23);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t dim = 1 + rng.uniform_int(5);
        auto q = random_gaussian(rng, dim);
        auto p = random_gaussian(rng, dim);
        const double closed = dists::kl_diag(q, p);

        // Independent route: sample z ~ q, average log q(z) - log p(z) using
        // the scalar oracle density.
        const int n = 20000;
        std::vector<double> draws(n);
        for (int i = 0; i < n; ++i) {
            double term = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double z = q.mean[k] + q.std[k] * rng.normal();
                term += oracle::gauss_logpdf(z, q.mean[k], q.std[k]) -
                        oracle::gauss_logpdf(z, p.mean[k], p.std[k]);
            }
            draws[i] = term;
        }
        auto ms = oracle::mean_se(draws);
        CHECK(std::fabs(closed - ms.mean) < 3.0 * ms.se);

        // And against the scalar closed form, dimension by dimension.
        double scalar_sum = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            scalar_sum += oracle::kl_gauss(q.mean[k], q.std[k], p.mean[k], p.std[k]);
        }
        CHECK(closed == doctest::Approx(scalar_sum).epsilon(1e-12));
    }
    // KL(q||q) = 0.
    auto q = random_gaussian(rng, 3);
    CHECK(dists::kl_diag(q, q) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("log_mean_exp invariances") {
    Rng rng(31);
    std::vector<double> v(12);
    for (double& x : v) x = rng.normal(0.0, 5.0);
    const double base = dists::log_mean_exp(v);

    std::vector<double> shifted = v;
    for (double& x : shifted) x += 123.0;
    CHECK(dists::log_mean_exp(shifted) == doctest::Approx(base + 123.0).epsilon(1e-12));

    std::vector<double> perm = v;
    std::reverse(perm.begin(), perm.end());
    CHECK(dists::log_mean_exp(perm) == doctest::Approx(base).epsilon(1e-12));

    // Two-point hand value.
    std::vector<double> two{0.0, std::log(4.0)};
    CHECK(dists::log_mean_exp(two) == doctest::Approx(std::log(2.5)).epsilon(1e-14));
}

TEST_CASE("graph gaussian_logpdf matches the plain version and differentiates") {
    Rng rng(57);
    nd::Tensor x({3, 2});
    nd::Tensor mean({3, 2});
    nd::Tensor std_t({3, 2});
    for (double& v : x.data) v = rng.normal();
    for (double& v : mean.data) v = rng.normal();
    for (double& v : std_t.data) v = std::exp(rng.normal(0.0, 0.3));

    auto eval = [&]() {
        nd::Graph g;
        nd::Node* nm = g.leaf(mean, true);
        nd::Node* ns = g.leaf(std_t, true);
        nd::Node* lp = dists::gaussian_logpdf(g, g.leaf(x), nm, ns);
        nd::Node* loss = g.mean_all(lp);
        g.backward(loss);
        return std::tuple{loss->value[0], lp->value, nm->grad, ns->grad};
    };
    auto [loss, terms, gm, gs] = eval();
    (void)loss;

    dists::DiagGaussian d{mean, std_t};
    nd::Tensor want = dists::logpdf_terms(d, x);
    for (std::size_t i = 0; i < want.numel(); ++i) {
        CHECK(terms[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }

    auto value_only = [&]() { return std::get<0>(eval()); };
    for (int probe = 0; probe < 4; ++probe) {
        std::size_t k = rng.uniform_int(mean.numel());
        CHECK(oracle::rel_err(gm[k], oracle::central_fd(value_only, &mean.data[k], 1e-5)) < 1e-5);
        CHECK(oracle::rel_err(gs[k], oracle::central_fd(value_only, &std_t.data[k], 1e-5)) < 1e-5);
    }
}

TEST_CASE("invalid distributions are rejected") {
    dists::DiagGaussian bad{nd::Tensor::scalar(0.0), nd::Tensor::scalar(0.0)};
    CHECK_THROWS_AS(dists::logpdf(bad, nd::Tensor::scalar(0.0)), NumericError);
    dists::DiagGaussian mismatched{nd::Tensor({2}), nd::Tensor({3})};
    CHECK_THROWS_AS(dists::validate(mismatched), DimensionError);
    CHECK_THROWS_AS(dists::log_mean_exp(std::vector<double>{}), DimensionError);
}
