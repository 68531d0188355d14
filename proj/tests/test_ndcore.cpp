#include <cmath>
#include <vector>

#include "banditlab/dists/diag_gaussian.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/ndcore/adam.hpp"
#include "banditlab/ndcore/graph.hpp"
#include "banditlab/ndcore/mlp.hpp"
#include "banditlab/ndcore/tensor.hpp"
#include "banditlab/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace banditlab;

namespace {

// Masked Gaussian log-density of an MLP's outputs: the loss shape used by the
// simulator's training loops.  Rebuilds the graph on every call so it can be
// driven by finite differences.
double mlp_gauss_loss(nd::Mlp& net, nd::Tensor& log_std, const nd::Tensor& x,
                      const nd::Tensor& targets, const nd::Tensor& mask,
                      std::vector<nd::Tensor>* grads_out) {
    nd::Graph g;
    nd::MlpNodes nodes = register_mlp(g, net);
    nd::Node* ls = g.leaf(log_std, true);
    nd::Node* out = mlp_forward(g, net.spec, nodes, g.leaf(x));
    nd::Node* std_node = g.clamp_min(g.exp(ls), nd::kExpLinkFloor);
    nd::Node* lp = dists::gaussian_logpdf(g, g.leaf(targets), out, std_node);
    nd::Node* loss = g.mean_all(g.mul(lp, g.leaf(mask)));
    g.backward(loss);
    if (grads_out) {
        grads_out->clear();
        for (nd::Node* n : nodes.weights) grads_out->push_back(n->grad);
        for (nd::Node* n : nodes.biases) grads_out->push_back(n->grad);
        grads_out->push_back(ls->grad);
    }
    return loss->value[0];
}

}  // namespace

TEST_CASE("tensor shape contract") {
    nd::Tensor t({2, 3});
    CHECK(t.numel() == 6);
    t.at(1, 2) = 5.0;
    CHECK(t.data[5] == 5.0);
    CHECK_THROWS_AS(nd::Tensor({2, 2}, {1.0, 2.0, 3.0}), DimensionError);
}

TEST_CASE("graph ops match hand-computed values") {
    nd::Graph g;

    SUBCASE("matmul") {
        nd::Node* a = g.leaf(nd::Tensor({2, 3}, {1, 2, 3, 4, 5, 6}));
        nd::Node* b = g.leaf(nd::Tensor({3, 2}, {7, 8, 9, 10, 11, 12}));
        nd::Node* c = g.matmul(a, b);
        CHECK(c->value.data == std::vector<double>{58, 64, 139, 154});
    }

    SUBCASE("row-vector and scalar broadcasting") {
        nd::Node* a = g.leaf(nd::Tensor({2, 3}, {1, 2, 3, 4, 5, 6}));
        nd::Node* row = g.leaf(nd::Tensor({3}, {10, 20, 30}));
        nd::Node* s = g.leaf(nd::Tensor::scalar(2.0));
        CHECK(g.add(a, row)->value.data == std::vector<double>{11, 22, 33, 14, 25, 36});
        CHECK(g.mul(a, s)->value.data == std::vector<double>{2, 4, 6, 8, 10, 12});
        CHECK(g.div(a, s)->value.data == std::vector<double>{0.5, 1, 1.5, 2, 2.5, 3});
        nd::Node* bad = g.leaf(nd::Tensor({2}, {1, 2}));
        CHECK_THROWS_AS(g.add(a, bad), DimensionError);
    }

    SUBCASE("row_sums, repeat_rows, take_rows_strided, concat_cols") {
        nd::Node* a = g.leaf(nd::Tensor({2, 2}, {1, 2, 3, 4}));
        CHECK(g.row_sums(a)->value.data == std::vector<double>{3, 7});
        nd::Node* rep = g.repeat_rows(a, 2);
        CHECK(rep->value.shape == std::vector<std::size_t>{4, 2});
        CHECK(rep->value.data == std::vector<double>{1, 2, 1, 2, 3, 4, 3, 4});
        nd::Node* first = g.take_rows_strided(rep, 0, 2);
        CHECK(first->value.data == std::vector<double>{1, 2, 3, 4});
        nd::Node* second = g.take_rows_strided(rep, 1, 2);
        CHECK(second->value.data == std::vector<double>{1, 2, 3, 4});
        nd::Node* cat = g.concat_cols(a, first);
        CHECK(cat->value.data == std::vector<double>{1, 2, 1, 2, 3, 4, 3, 4});
    }

    SUBCASE("log_mean_exp_rows") {
        nd::Node* a = g.leaf(nd::Tensor({1, 2}, {0.0, std::log(4.0)}));
        CHECK(g.log_mean_exp_rows(a)->value[0] ==
              doctest::Approx(std::log(2.5)).epsilon(1e-12));
        // Stability: large shifts do not overflow.
        nd::Node* b = g.leaf(nd::Tensor({1, 2}, {1000.0, 1000.0 + std::log(4.0)}));
        CHECK(g.log_mean_exp_rows(b)->value[0] ==
              doctest::Approx(1000.0 + std::log(2.5)).epsilon(1e-12));
    }
}

TEST_CASE("mlp forward matches the straight-line oracle") {
    Rng rng(41);
    for (int rep = 0; rep < 6; ++rep) {
        const std::size_t d = 2 + rng.uniform_int(4);
        const std::size_t h = 1 + rng.uniform_int(6);
        const std::size_t c = 1 + rng.uniform_int(3);
        nd::MlpSpec spec{{d, h, c},
                         rep % 2 == 0 ? nd::OutputLink::kIdentity : nd::OutputLink::kExp};
        nd::Mlp net(spec);
        net.init(rng);
        nd::Tensor x({3, d});
        for (double& v : x.data) v = rng.normal();
        nd::Tensor got = mlp_apply(net, x);
        nd::Tensor want = oracle::mlp_forward(net.weights, net.biases,
                                              spec.link == nd::OutputLink::kExp,
                                              nd::kExpLinkFloor, x);
        REQUIRE(got.shape == want.shape);
        for (std::size_t i = 0; i < got.numel(); ++i) {
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("autodiff gradients match central finite differences") {
    Rng rng(1234);
    const double h_fd = 1e-5;
    int nets_checked = 0;
    while (nets_checked < 8) {
        const std::size_t d = 2 + rng.uniform_int(3);
        const std::size_t hidden = 3 + rng.uniform_int(5);
        const std::size_t c = 1 + rng.uniform_int(3);
        nd::Mlp net(nd::MlpSpec{{d, hidden, c}, nd::OutputLink::kIdentity});
        net.init(rng);
        nd::Tensor x({4, d});
        for (double& v : x.data) v = rng.normal();
        // Reject draws whose ReLU kinks sit inside the differencing window.
        double min_pre = 0.0;
        oracle::mlp_forward(net.weights, net.biases, false, 0.0, x, &min_pre);
        if (min_pre < 1e-3) continue;
        ++nets_checked;

        nd::Tensor targets({4, c});
        for (double& v : targets.data) v = rng.normal();
        nd::Tensor mask({4, c});
        for (double& v : mask.data) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
        nd::Tensor log_std = nd::Tensor::scalar(rng.normal(0.0, 0.3));

        std::vector<nd::Tensor> grads;
        mlp_gauss_loss(net, log_std, x, targets, mask, &grads);

        std::vector<nd::Tensor*> params;
        net.collect_params(params);
        params.push_back(&log_std);
        REQUIRE(params.size() == grads.size());

        auto eval = [&] { return mlp_gauss_loss(net, log_std, x, targets, mask, nullptr); };
        for (std::size_t p = 0; p < params.size(); ++p) {
            for (int probe = 0; probe < 3; ++probe) {
                const std::size_t k = rng.uniform_int(params[p]->numel());
                const double fd = oracle::central_fd(eval, &params[p]->data[k], h_fd);
                CHECK(oracle::rel_err(grads[p][k], fd) < 1e-5);
            }
        }
    }
}

TEST_CASE("gradients flow through the structural ops") {
    // Composes repeat_rows / take_rows_strided / concat_cols / row_sums /
    // log_mean_exp_rows / clamp_min into one scalar and checks the whole
    // chain against finite differences.
    Rng rng(99);
    nd::Tensor a({3, 2});
    for (double& v : a.data) v = rng.normal();
    nd::Tensor w({4, 3});
    for (double& v : w.data) v = rng.normal();

    auto eval = [&]() {
        nd::Graph g;
        nd::Node* na = g.leaf(a, true);
        nd::Node* nw = g.leaf(w, true);
        nd::Node* rep = g.repeat_rows(na, 3);        // [9 x 2]
        nd::Node* head = g.take_rows_strided(rep, 0, 3);  // [3 x 2]
        nd::Node* cat = g.concat_cols(na, head);     // [3 x 4]
        nd::Node* prod = g.matmul(cat, g.scale(nw, 0.5));  // [3 x 3]
        nd::Node* lme = g.log_mean_exp_rows(prod);   // {3}
        nd::Node* rs = g.row_sums(g.square(g.reshape(lme, {3, 1})));
        nd::Node* loss = g.mean_all(g.clamp_min(g.add_scalar(rs, 1.0), 0.25));
        g.backward(loss);
        return std::tuple{loss->value[0], na->grad, nw->grad};
    };

    auto [base, ga, gw] = eval();
    (void)base;
    auto value_only = [&]() { return std::get<0>(eval()); };
    for (int probe = 0; probe < 6; ++probe) {
        std::size_t ka = rng.uniform_int(a.numel());
        double fd = oracle::central_fd(value_only, &a.data[ka], 1e-5);
        CHECK(oracle::rel_err(ga[ka], fd) < 1e-5);
        std::size_t kw = rng.uniform_int(w.numel());
        fd = oracle::central_fd(value_only, &w.data[kw], 1e-5);
        CHECK(oracle::rel_err(gw[kw], fd) < 1e-5);
    }
}

TEST_CASE("fused log-density ops: values and gradients") {
    Rng rng(4321);
    const std::size_t n = 3, h = 4, reps = 3;
    nd::Tensor z({n, h}), stds({n, h}), centers({n * reps, h}), wout({n, reps});
    for (double& v : z.data) v = rng.normal();
    for (double& v : stds.data) v = 0.5 + rng.uniform();
    for (double& v : centers.data) v = rng.normal();
    for (double& v : wout.data) v = rng.normal();

    SUBCASE("mixture rows equal the scalar density oracle") {
        nd::Graph g;
        nd::Node* comp = g.mixture_row_logpdf(g.leaf(z), g.leaf(centers),
                                              g.leaf(stds), reps);
        REQUIRE(comp->value.shape == std::vector<std::size_t>({n, reps}));
        for (std::size_t i = 0; i < n; ++i) {
            const nd::Tensor zi({h}, {z.data.begin() + static_cast<std::ptrdiff_t>(i * h),
                                      z.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * h)});
            const nd::Tensor si({h}, {stds.data.begin() + static_cast<std::ptrdiff_t>(i * h),
                                      stds.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * h)});
            for (std::size_t k = 0; k < reps; ++k) {
                const std::size_t row = i * reps + k;
                const nd::Tensor ci(
                    {h}, {centers.data.begin() + static_cast<std::ptrdiff_t>(row * h),
                          centers.data.begin() + static_cast<std::ptrdiff_t>((row + 1) * h)});
                const double expect = dists::logpdf(dists::DiagGaussian{ci, si}, zi);
                CHECK(comp->value.at(i, k) == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }

    SUBCASE("mixture gradients match finite differences") {
        auto eval = [&]() {
            nd::Graph g;
            nd::Node* nz = g.leaf(z, true);
            nd::Node* nc = g.leaf(centers, true);
            nd::Node* ns = g.leaf(stds, true);
            nd::Node* comp = g.mixture_row_logpdf(nz, nc, ns, reps);
            nd::Node* loss = g.sum_all(g.mul(comp, g.leaf(wout)));
            g.backward(loss);
            return std::tuple{loss->value[0], nz->grad, nc->grad, ns->grad};
        };
        auto [base, gz, gc, gs] = eval();
        (void)base;
        auto value_only = [&]() { return std::get<0>(eval()); };
        for (int probe = 0; probe < 6; ++probe) {
            const std::size_t kz = rng.uniform_int(z.numel());
            CHECK(oracle::rel_err(gz[kz],
                                  oracle::central_fd(value_only, &z.data[kz], 1e-5)) < 1e-5);
            const std::size_t kc = rng.uniform_int(centers.numel());
            CHECK(oracle::rel_err(gc[kc], oracle::central_fd(value_only, &centers.data[kc],
                                                             1e-5)) < 1e-5);
            const std::size_t ks = rng.uniform_int(stds.numel());
            CHECK(oracle::rel_err(gs[ks], oracle::central_fd(value_only, &stds.data[ks],
                                                             1e-5)) < 1e-5);
        }
    }

    SUBCASE("elementwise density broadcasts mean and std") {
        nd::Tensor x({n, h});
        for (double& v : x.data) v = rng.normal();
        nd::Tensor mean_scalar = nd::Tensor::scalar(rng.normal());
        nd::Tensor std_row({h});
        for (double& v : std_row.data) v = 0.5 + rng.uniform();
        nd::Tensor weights({n, h});
        for (double& v : weights.data) v = rng.normal();

        auto eval = [&]() {
            nd::Graph g;
            nd::Node* nx = g.leaf(x, true);
            nd::Node* nm = g.leaf(mean_scalar, true);
            nd::Node* ns = g.leaf(std_row, true);
            nd::Node* lp = g.gaussian_logpdf(nx, nm, ns);
            nd::Node* loss = g.sum_all(g.mul(lp, g.leaf(weights)));
            g.backward(loss);
            return std::tuple{loss->value[0], nx->grad, nm->grad, ns->grad, lp->value};
        };
        auto [base, gx, gm, gs, lp] = eval();
        (void)base;

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < h; ++j) {
                const double s = std_row[j];
                const double u = (x.at(i, j) - mean_scalar[0]) / s;
                const double expect =
                    -0.5 * std::log(2.0 * 3.14159265358979323846) - std::log(s) -
                    0.5 * u * u;
                CHECK(lp.at(i, j) == doctest::Approx(expect).epsilon(1e-12));
            }

        auto value_only = [&]() { return std::get<0>(eval()); };
        for (int probe = 0; probe < 5; ++probe) {
            const std::size_t kx = rng.uniform_int(x.numel());
            CHECK(oracle::rel_err(gx[kx],
                                  oracle::central_fd(value_only, &x.data[kx], 1e-5)) < 1e-5);
            const std::size_t ks = rng.uniform_int(std_row.numel());
            CHECK(oracle::rel_err(gs[ks], oracle::central_fd(value_only, &std_row.data[ks],
                                                             1e-5)) < 1e-5);
        }
        CHECK(oracle::rel_err(gm[0], oracle::central_fd(value_only, &mean_scalar.data[0],
                                                        1e-5)) < 1e-5);
    }

    SUBCASE("shape guards") {
        nd::Graph g;
        CHECK_THROWS_AS(
            g.mixture_row_logpdf(g.leaf(z), g.leaf(centers), g.leaf(stds), reps + 1),
            DimensionError);
        nd::Tensor bad({n, h + 1});
        CHECK_THROWS_AS(g.mixture_row_logpdf(g.leaf(z), g.leaf(centers), g.leaf(bad), reps),
                        DimensionError);
    }
}

TEST_CASE("subgradients at kinks are zero") {
    nd::Graph g;
    nd::Node* z = g.leaf(nd::Tensor::scalar(0.0), true);
    nd::Node* loss = g.sum_all(g.relu(z));
    g.backward(loss);
    CHECK(z->grad[0] == 0.0);

    nd::Graph g2;
    nd::Node* deep = g2.leaf(nd::Tensor::scalar(std::log(1e-9)), true);
    nd::Node* floored = g2.clamp_min(g2.exp(deep), nd::kExpLinkFloor);
    CHECK(floored->value[0] == nd::kExpLinkFloor);
    g2.backward(g2.sum_all(floored));
    CHECK(deep->grad[0] == 0.0);
}

TEST_CASE("leaves that do not reach the loss keep zero gradients") {
    nd::Graph g;
    nd::Node* used = g.leaf(nd::Tensor({2}, {1.0, 2.0}), true);
    nd::Node* unused = g.leaf(nd::Tensor({3}, {1.0, 1.0, 1.0}), true);
    nd::Node* loss = g.sum_all(g.square(used));
    g.backward(loss);
    CHECK(used->grad.data == std::vector<double>{2.0, 4.0});
    CHECK(unused->grad.data == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("backward misuse is rejected") {
    nd::Graph g;
    nd::Node* a = g.leaf(nd::Tensor({2}, {1.0, 2.0}), true);
    CHECK_THROWS_AS(g.backward(a), DimensionError);  // non-scalar loss

    nd::Graph g2;
    nd::Node* b = g2.leaf(nd::Tensor::scalar(4.0), true);
    nd::Node* loss = g2.sum_all(b);
    g2.backward(loss);
    CHECK_THROWS_AS(g2.backward(loss), NumericError);  // second pass

    nd::Graph g3;
    nd::Node* c = g3.leaf(nd::Tensor::scalar(-1.0), true);
    nd::Node* bad = g3.log(c);  // NaN value
    CHECK_THROWS_AS(g3.backward(bad), NumericError);
}

TEST_CASE("adam first step matches the closed-form update") {
    // With bias correction the first step is exactly
    // p -= lr * g / (|g| + eps), independent of the moment decay rates.
    nd::Tensor p = nd::Tensor::scalar(0.5);
    nd::Tensor g = nd::Tensor::scalar(0.25);
    nd::AdamState st;
    adam_step(st, {&p}, {&g});
    const double expected = 0.5 - 1e-3 * 0.25 / (0.25 + 1e-8);
    CHECK(p[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(st.step_count == 1);
}

TEST_CASE("adam minimizes a quadratic through the graph") {
    nd::Tensor p = nd::Tensor::scalar(2.5);
    nd::AdamState st;
    for (int i = 0; i < 1000; ++i) {
        nd::Graph g;
        nd::Node* np = g.leaf(p, true);
        nd::Node* loss = g.sum_all(g.square(g.add_scalar(np, -3.0)));
        g.backward(loss);
        adam_step(st, {&p}, {&np->grad});
    }
    CHECK(std::fabs(p[0] - 3.0) < 0.05);
}
