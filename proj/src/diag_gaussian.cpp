#include "banditlab/dists/diag_gaussian.hpp"

#include <cmath>
#include <numbers>

#include "banditlab/errors.hpp"

namespace banditlab::dists {

namespace {
constexpr double kHalfLog2Pi = 0.5 * 1.8378770664093454836;  // ln(2*pi)/2
}

void validate(const DiagGaussian& d) {
    if (!nd::same_shape(d.mean, d.std)) {
        throw DimensionError("DiagGaussian: mean/std shape mismatch");
    }
    for (double s : d.std.data) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw NumericError("DiagGaussian: std must be positive and finite");
        }
    }
}

nd::Tensor logpdf_terms(const DiagGaussian& d, const nd::Tensor& x) {
    validate(d);
    if (!nd::same_shape(d.mean, x)) {
        throw DimensionError("logpdf_terms: x shape mismatch");
    }
    nd::Tensor out(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double u = (x[i] - d.mean[i]) / d.std[i];
        out[i] = -kHalfLog2Pi - std::log(d.std[i]) - 0.5 * u * u;
    }
    return out;
}

double logpdf(const DiagGaussian& d, const nd::Tensor& x) {
    nd::Tensor terms = logpdf_terms(d, x);
    double s = 0.0;
    for (double v : terms.data) s += v;
    return s;
}

nd::Tensor reparam_sample(const DiagGaussian& d, const nd::Tensor& noise) {
    validate(d);
    if (!nd::same_shape(d.mean, noise)) {
        throw DimensionError("reparam_sample: noise shape mismatch");
    }
    nd::Tensor out(d.mean.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out[i] = d.mean[i] + d.std[i] * noise[i];
    }
    return out;
}

double kl_diag(const DiagGaussian& q, const DiagGaussian& p) {
    validate(q);
    validate(p);
    if (!nd::same_shape(q.mean, p.mean)) {
        throw DimensionError("kl_diag: distribution shapes differ");
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < q.mean.numel(); ++i) {
        const double r = q.std[i] / p.std[i];
        const double dm = (q.mean[i] - p.mean[i]) / p.std[i];
        kl += std::log(p.std[i] / q.std[i]) + 0.5 * (r * r + dm * dm) - 0.5;
    }
    return kl;
}

double log_mean_exp(std::span<const double> values) {
    if (values.empty()) {
        throw DimensionError("log_mean_exp: empty input");
    }
    double m = values[0];
    for (double v : values) m = std::max(m, v);
    if (!std::isfinite(m)) {
        throw NumericError("log_mean_exp: non-finite input");
    }
    double s = 0.0;
    for (double v : values) s += std::exp(v - m);
    return m + std::log(s / static_cast<double>(values.size()));
}

nd::Node* gaussian_logpdf(nd::Graph& g, nd::Node* x, nd::Node* mean, nd::Node* std) {
    return g.gaussian_logpdf(x, mean, std);
}

nd::Node* reparam_sample(nd::Graph& g, nd::Node* mean, nd::Node* std,
                         const nd::Tensor& noise) {
    nd::Node* eps = g.leaf(noise, false);
    return g.add(mean, g.mul(std, eps));
}

}  // namespace banditlab::dists
