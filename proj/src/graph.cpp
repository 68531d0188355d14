#include "banditlab/ndcore/graph.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "banditlab/errors.hpp"

namespace banditlab::nd {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;

MatMap as_mat(Tensor& t) {
    return MatMap(t.data.data(), static_cast<Eigen::Index>(t.rows()),
                  static_cast<Eigen::Index>(t.cols()));
}

[[noreturn]] void shape_error(const char* op, const Tensor& a) {
    std::string msg = std::string(op) + ": unsupported shape [";
    for (std::size_t i = 0; i < a.shape.size(); ++i) {
        msg += (i ? "," : "") + std::to_string(a.shape[i]);
    }
    throw DimensionError(msg + "]");
}

constexpr double kHalfLog2Pi = 0.5 * 1.8378770664093454836;  // ln(2*pi)/2

}  // namespace

Node* Graph::make(Tensor value, bool requires_grad, std::function<void()> back) {
    nodes_.emplace_back();
    Node& n = nodes_.back();
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    if (requires_grad) {
        n.grad = Tensor(n.value.shape);  // zeros
    }
    n.back = std::move(back);
    return &n;
}

Node* Graph::leaf(Tensor value, bool requires_grad) {
    return make(std::move(value), requires_grad, nullptr);
}

Graph::Bcast Graph::bcast_of(const Node* a, const Node* b, const char* op) const {
    if (same_shape(a->value, b->value)) return Bcast::kSame;
    if (b->value.numel() == 1) return Bcast::kScalar;
    if (a->value.rank() == 2 && b->value.rank() == 1 &&
        b->value.shape[0] == a->value.shape[1]) {
        return Bcast::kRowVec;
    }
    throw DimensionError(std::string(op) + ": incompatible shapes");
}

// Shared skeleton for the four broadcasting binary ops.  fwd(x, y) computes
// the output element; bwd(x, y, out, g) returns the pair (dx, dy) of local
// gradient contributions for one element.
template <class Fwd, class Bwd>
static Node* binary_op(Graph& g, Node* a, Node* b, const char* name, Fwd fwd, Bwd bwd,
                       Graph::Bcast, Tensor, std::function<void()>*) = delete;

Node* Graph::add(Node* a, Node* b) {
    Bcast k = bcast_of(a, b, "add");
    const std::size_t n = a->value.numel();
    const std::size_t c = a->value.cols();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
        out[i] = a->value[i] + b->value[j];
    }
    bool rg = a->requires_grad || b->requires_grad;
    Node* o = make(std::move(out), rg, nullptr);
    if (rg) {
        o->back = [a, b, o, k, n, c] {
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t j = k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
                if (a->requires_grad) a->grad[i] += o->grad[i];
                if (b->requires_grad) b->grad[j] += o->grad[i];
            }
        };
    }
    return o;
}

Node* Graph::sub(Node* a, Node* b) {
    Bcast k = bcast_of(a, b, "sub");
    const std::size_t n = a->value.numel();
    const std::size_t c = a->value.cols();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
        out[i] = a->value[i] - b->value[j];
    }
    bool rg = a->requires_grad || b->requires_grad;
    Node* o = make(std::move(out), rg, nullptr);
    if (rg) {
        o->back = [a, b, o, k, n, c] {
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t j = k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
                if (a->requires_grad) a->grad[i] += o->grad[i];
                if (b->requires_grad) b->grad[j] -= o->grad[i];
            }
        };
    }
    return o;
}

Node* Graph::mul(Node* a, Node* b) {
    Bcast k = bcast_of(a, b, "mul");
    const std::size_t n = a->value.numel();
    const std::size_t c = a->value.cols();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
        out[i] = a->value[i] * b->value[j];
    }
    bool rg = a->requires_grad || b->requires_grad;
    Node* o = make(std::move(out), rg, nullptr);
    if (rg) {
        o->back = [a, b, o, k, n, c] {
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t j = k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
                if (a->requires_grad) a->grad[i] += o->grad[i] * b->value[j];
                if (b->requires_grad) b->grad[j] += o->grad[i] * a->value[i];
            }
        };
    }
    return o;
}

Node* Graph::div(Node* a, Node* b) {
    Bcast k = bcast_of(a, b, "div");
    const std::size_t n = a->value.numel();
    const std::size_t c = a->value.cols();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
        out[i] = a->value[i] / b->value[j];
    }
    bool rg = a->requires_grad || b->requires_grad;
    Node* o = make(std::move(out), rg, nullptr);
    if (rg) {
        o->back = [a, b, o, k, n, c] {
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t j = k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
                double inv = 1.0 / b->value[j];
                if (a->requires_grad) a->grad[i] += o->grad[i] * inv;
                if (b->requires_grad) b->grad[j] -= o->grad[i] * o->value[i] * inv;
            }
        };
    }
    return o;
}

Node* Graph::scale(Node* a, double cst) {
    const std::size_t n = a->value.numel();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) out[i] = a->value[i] * cst;
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, cst, n] {
            for (std::size_t i = 0; i < n; ++i) a->grad[i] += o->grad[i] * cst;
        };
    }
    return o;
}

Node* Graph::add_scalar(Node* a, double cst) {
    const std::size_t n = a->value.numel();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) out[i] = a->value[i] + cst;
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, n] {
            for (std::size_t i = 0; i < n; ++i) a->grad[i] += o->grad[i];
        };
    }
    return o;
}

Node* Graph::matmul(Node* a, Node* b) {
    if (a->value.rank() != 2 || b->value.rank() != 2) {
        throw DimensionError("matmul: both operands must be rank 2");
    }
    if (a->value.shape[1] != b->value.shape[0]) {
        throw DimensionError("matmul: inner dimensions differ");
    }
    Tensor out({a->value.shape[0], b->value.shape[1]});
    as_mat(out).noalias() = as_mat(a->value) * as_mat(b->value);
    bool rg = a->requires_grad || b->requires_grad;
    Node* o = make(std::move(out), rg, nullptr);
    if (rg) {
        o->back = [a, b, o] {
            if (a->requires_grad) {
                as_mat(a->grad).noalias() += as_mat(o->grad) * as_mat(b->value).transpose();
            }
            if (b->requires_grad) {
                as_mat(b->grad).noalias() += as_mat(a->value).transpose() * as_mat(o->grad);
            }
        };
    }
    return o;
}

Node* Graph::relu(Node* a) {
    const std::size_t n = a->value.numel();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) out[i] = a->value[i] > 0.0 ? a->value[i] : 0.0;
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        // Subgradient at 0 is taken as 0.
        o->back = [a, o, n] {
            for (std::size_t i = 0; i < n; ++i) {
                if (a->value[i] > 0.0) a->grad[i] += o->grad[i];
            }
        };
    }
    return o;
}

Node* Graph::exp(Node* a) {
    const std::size_t n = a->value.numel();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a->value[i]);
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, n] {
            for (std::size_t i = 0; i < n; ++i) a->grad[i] += o->grad[i] * o->value[i];
        };
    }
    return o;
}

Node* Graph::log(Node* a) {
    const std::size_t n = a->value.numel();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log(a->value[i]);
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, n] {
            for (std::size_t i = 0; i < n; ++i) a->grad[i] += o->grad[i] / a->value[i];
        };
    }
    return o;
}

Node* Graph::square(Node* a) {
    const std::size_t n = a->value.numel();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) out[i] = a->value[i] * a->value[i];
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, n] {
            for (std::size_t i = 0; i < n; ++i) a->grad[i] += 2.0 * o->grad[i] * a->value[i];
        };
    }
    return o;
}

Node* Graph::clamp_min(Node* a, double floor) {
    const std::size_t n = a->value.numel();
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < n; ++i) out[i] = a->value[i] < floor ? floor : a->value[i];
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, floor, n] {
            for (std::size_t i = 0; i < n; ++i) {
                if (a->value[i] > floor) a->grad[i] += o->grad[i];
            }
        };
    }
    return o;
}

Node* Graph::sum_all(Node* a) {
    const std::size_t n = a->value.numel();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a->value[i];
    Node* o = make(Tensor::scalar(s), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, n] {
            for (std::size_t i = 0; i < n; ++i) a->grad[i] += o->grad[0];
        };
    }
    return o;
}

Node* Graph::mean_all(Node* a) {
    const std::size_t n = a->value.numel();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a->value[i];
    Node* o = make(Tensor::scalar(s / static_cast<double>(n)), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, n] {
            double g = o->grad[0] / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) a->grad[i] += g;
        };
    }
    return o;
}

Node* Graph::row_sums(Node* a) {
    if (a->value.rank() != 2) shape_error("row_sums", a->value);
    const std::size_t r = a->value.shape[0];
    const std::size_t c = a->value.shape[1];
    Tensor out({r});
    for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < c; ++j) s += a->value[i * c + j];
        out[i] = s;
    }
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, r, c] {
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < c; ++j) a->grad[i * c + j] += o->grad[i];
            }
        };
    }
    return o;
}

Node* Graph::concat_cols(Node* a, Node* b) {
    if (a->value.rank() != 2 || b->value.rank() != 2 ||
        a->value.shape[0] != b->value.shape[0]) {
        throw DimensionError("concat_cols: operands must be rank 2 with matching row counts");
    }
    const std::size_t r = a->value.shape[0];
    const std::size_t ca = a->value.shape[1];
    const std::size_t cb = b->value.shape[1];
    Tensor out({r, ca + cb});
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < ca; ++j) out[i * (ca + cb) + j] = a->value[i * ca + j];
        for (std::size_t j = 0; j < cb; ++j) out[i * (ca + cb) + ca + j] = b->value[i * cb + j];
    }
    bool rg = a->requires_grad || b->requires_grad;
    Node* o = make(std::move(out), rg, nullptr);
    if (rg) {
        o->back = [a, b, o, r, ca, cb] {
            for (std::size_t i = 0; i < r; ++i) {
                if (a->requires_grad) {
                    for (std::size_t j = 0; j < ca; ++j) {
                        a->grad[i * ca + j] += o->grad[i * (ca + cb) + j];
                    }
                }
                if (b->requires_grad) {
                    for (std::size_t j = 0; j < cb; ++j) {
                        b->grad[i * cb + j] += o->grad[i * (ca + cb) + ca + j];
                    }
                }
            }
        };
    }
    return o;
}

Node* Graph::repeat_rows(Node* a, std::size_t times) {
    if (a->value.rank() != 2) shape_error("repeat_rows", a->value);
    if (times == 0) throw DimensionError("repeat_rows: times must be >= 1");
    const std::size_t r = a->value.shape[0];
    const std::size_t c = a->value.shape[1];
    Tensor out({r * times, c});
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t t = 0; t < times; ++t) {
            for (std::size_t j = 0; j < c; ++j) {
                out[(i * times + t) * c + j] = a->value[i * c + j];
            }
        }
    }
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, r, c, times] {
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t t = 0; t < times; ++t) {
                    for (std::size_t j = 0; j < c; ++j) {
                        a->grad[i * c + j] += o->grad[(i * times + t) * c + j];
                    }
                }
            }
        };
    }
    return o;
}

Node* Graph::take_rows_strided(Node* a, std::size_t offset, std::size_t stride) {
    if (a->value.rank() != 2) shape_error("take_rows_strided", a->value);
    const std::size_t r = a->value.shape[0];
    const std::size_t c = a->value.shape[1];
    if (stride == 0 || offset >= r) {
        throw DimensionError("take_rows_strided: bad offset/stride");
    }
    const std::size_t count = (r - offset - 1) / stride + 1;
    Tensor out({count, c});
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t src = offset + k * stride;
        for (std::size_t j = 0; j < c; ++j) out[k * c + j] = a->value[src * c + j];
    }
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        o->back = [a, o, c, count, offset, stride] {
            for (std::size_t k = 0; k < count; ++k) {
                const std::size_t src = offset + k * stride;
                for (std::size_t j = 0; j < c; ++j) {
                    a->grad[src * c + j] += o->grad[k * c + j];
                }
            }
        };
    }
    return o;
}

Node* Graph::reshape(Node* a, std::vector<std::size_t> shape) {
    Tensor out(std::move(shape), a->value.data);
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        const std::size_t n = a->value.numel();
        o->back = [a, o, n] {
            for (std::size_t i = 0; i < n; ++i) a->grad[i] += o->grad[i];
        };
    }
    return o;
}

Node* Graph::log_mean_exp_rows(Node* a) {
    if (a->value.rank() != 2) shape_error("log_mean_exp_rows", a->value);
    const std::size_t r = a->value.shape[0];
    const std::size_t c = a->value.shape[1];
    const double log_c = std::log(static_cast<double>(c));
    Tensor out({r});
    for (std::size_t i = 0; i < r; ++i) {
        double m = a->value[i * c];
        for (std::size_t j = 1; j < c; ++j) m = std::max(m, a->value[i * c + j]);
        double s = 0.0;
        for (std::size_t j = 0; j < c; ++j) s += std::exp(a->value[i * c + j] - m);
        out[i] = m + std::log(s) - log_c;
    }
    Node* o = make(std::move(out), a->requires_grad, nullptr);
    if (o->requires_grad) {
        // d out_i / d a_ij = exp(a_ij - out_i) / c, a softmax-weighted spread.
        o->back = [a, o, r, c] {
            const double inv_c = 1.0 / static_cast<double>(c);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < c; ++j) {
                    a->grad[i * c + j] +=
                        o->grad[i] * std::exp(a->value[i * c + j] - o->value[i]) * inv_c;
                }
            }
        };
    }
    return o;
}

Node* Graph::gaussian_logpdf(Node* x, Node* mean, Node* std) {
    const Bcast km = bcast_of(x, mean, "gaussian_logpdf");
    const Bcast ks = bcast_of(x, std, "gaussian_logpdf");
    const std::size_t n = x->value.numel();
    const std::size_t c = x->value.cols();
    const auto at = [c](Bcast k, std::size_t i) {
        return k == Bcast::kSame ? i : (k == Bcast::kRowVec ? i % c : 0);
    };
    Tensor out(x->value.shape);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std->value[at(ks, i)];
        const double u = (x->value[i] - mean->value[at(km, i)]) / s;
        out[i] = -kHalfLog2Pi - std::log(s) - 0.5 * u * u;
    }
    const bool rg = x->requires_grad || mean->requires_grad || std->requires_grad;
    Node* o = make(std::move(out), rg, nullptr);
    if (rg) {
        o->back = [x, mean, std, o, at, km, ks, n] {
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t jm = at(km, i);
                const std::size_t js = at(ks, i);
                const double s = std->value[js];
                const double u = (x->value[i] - mean->value[jm]) / s;
                const double g = o->grad[i];
                if (x->requires_grad) x->grad[i] -= g * u / s;
                if (mean->requires_grad) mean->grad[jm] += g * u / s;
                if (std->requires_grad) std->grad[js] += g * (u * u - 1.0) / s;
            }
        };
    }
    return o;
}

Node* Graph::mixture_row_logpdf(Node* z, Node* centers, Node* stds,
                                std::size_t reps) {
    if (z->value.rank() != 2) shape_error("mixture_row_logpdf", z->value);
    if (!same_shape(z->value, stds->value)) {
        throw DimensionError("mixture_row_logpdf: z/stds shape mismatch");
    }
    const std::size_t n = z->value.shape[0];
    const std::size_t h = z->value.shape[1];
    if (reps == 0 || centers->value.rank() != 2 ||
        centers->value.shape[0] != n * reps || centers->value.shape[1] != h) {
        throw DimensionError("mixture_row_logpdf: centers must be [rows*reps x H]");
    }

    // log s terms are shared by every candidate of a row, so hoist them.
    std::vector<double> row_log_std(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < h; ++j)
            row_log_std[i] += std::log(stds->value[i * h + j]);
    }

    Tensor out({n, reps});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < reps; ++k) {
            const std::size_t crow = (i * reps + k) * h;
            double quad = 0.0;
            for (std::size_t j = 0; j < h; ++j) {
                const double u =
                    (z->value[i * h + j] - centers->value[crow + j]) / stds->value[i * h + j];
                quad += u * u;
            }
            out[i * reps + k] =
                -static_cast<double>(h) * kHalfLog2Pi - row_log_std[i] - 0.5 * quad;
        }
    }

    const bool rg = z->requires_grad || centers->requires_grad || stds->requires_grad;
    Node* o = make(std::move(out), rg, nullptr);
    if (rg) {
        o->back = [z, centers, stds, o, n, h, reps] {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < reps; ++k) {
                    const double g = o->grad[i * reps + k];
                    if (g == 0.0) continue;
                    const std::size_t crow = (i * reps + k) * h;
                    for (std::size_t j = 0; j < h; ++j) {
                        const double s = stds->value[i * h + j];
                        const double u =
                            (z->value[i * h + j] - centers->value[crow + j]) / s;
                        if (z->requires_grad) z->grad[i * h + j] -= g * u / s;
                        if (centers->requires_grad) centers->grad[crow + j] += g * u / s;
                        if (stds->requires_grad)
                            stds->grad[i * h + j] += g * (u * u - 1.0) / s;
                    }
                }
            }
        };
    }
    return o;
}

void Graph::backward(Node* loss) {
    if (backward_done_) {
        throw NumericError("Graph::backward called twice on one graph");
    }
    backward_done_ = true;
    if (loss->value.numel() != 1) {
        throw DimensionError("backward: loss must be scalar");
    }
    if (!all_finite(loss->value)) {
        throw NumericError("backward: loss is not finite");
    }
    if (!loss->requires_grad) return;
    loss->grad[0] = 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        if (it->requires_grad && it->back) it->back();
    }
}

}  // namespace banditlab::nd
