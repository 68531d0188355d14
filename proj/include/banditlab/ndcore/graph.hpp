#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <vector>

#include "banditlab/ndcore/tensor.hpp"

namespace banditlab::nd {

struct Node {
    Tensor value;
    Tensor grad;  // allocated (zeroed) iff requires_grad
    bool requires_grad = false;
    std::function<void()> back;
};

// Reverse-mode autodiff tape.  Ops append nodes in forward order and record a
// closure that accumulates into the parents' grads; backward() replays the
// closures newest-first, which is a valid reverse topological order because a
// node is always created after its parents.  A graph is built fresh for each
// forward/backward pass and then discarded; node pointers stay stable for the
// lifetime of the graph.
//
// Broadcasting in binary elementwise ops is deliberately narrow: the
// right-hand side may be same-shape, a length-C row vector against an [N x C]
// matrix, or a scalar.  Gradients for a broadcast right-hand side are reduced
// by summing over the broadcast dimension(s).
class Graph {
  public:
    Node* leaf(Tensor value, bool requires_grad = false);

    Node* add(Node* a, Node* b);
    Node* sub(Node* a, Node* b);
    Node* mul(Node* a, Node* b);
    Node* div(Node* a, Node* b);
    Node* scale(Node* a, double c);
    Node* add_scalar(Node* a, double c);
    Node* matmul(Node* a, Node* b);
    Node* relu(Node* a);
    Node* exp(Node* a);
    Node* log(Node* a);
    Node* square(Node* a);
    Node* clamp_min(Node* a, double floor);
    Node* sum_all(Node* a);
    Node* mean_all(Node* a);
    Node* row_sums(Node* a);
    Node* concat_cols(Node* a, Node* b);
    Node* repeat_rows(Node* a, std::size_t times);
    Node* take_rows_strided(Node* a, std::size_t offset, std::size_t stride);
    Node* reshape(Node* a, std::vector<std::size_t> shape);
    Node* log_mean_exp_rows(Node* a);

    // Elementwise diagonal-Gaussian log-density of x, fused into one node so
    // hot training paths stay memory-lean.  mean and std broadcast against x
    // under the usual binary-op rules.
    Node* gaussian_logpdf(Node* x, Node* mean, Node* std);

    // Row-summed log-densities of z [n x H] under `reps` candidate centers
    // per row (centers [n*reps x H], row i*reps+k) sharing stds [n x H]:
    // out[i, k] = sum_h logN(z[i,h]; centers[i*reps+k, h], stds[i,h]).
    // Equivalent to repeating z and stds reps times, taking the elementwise
    // log-density against centers, and row-summing, without materializing
    // the repeated tensors.
    Node* mixture_row_logpdf(Node* z, Node* centers, Node* stds, std::size_t reps);

    // Seeds d(loss)/d(loss) = 1 and propagates to every trainable leaf.
    // loss must be a finite scalar; callable once per graph.  Leaves that do
    // not influence the loss keep their zero gradient.
    void backward(Node* loss);

    std::size_t size() const { return nodes_.size(); }

  private:
    enum class Bcast { kSame, kRowVec, kScalar };
    Bcast bcast_of(const Node* a, const Node* b, const char* op) const;
    Node* make(Tensor value, bool requires_grad, std::function<void()> back);

    std::deque<Node> nodes_;
    bool backward_done_ = false;
};

}  // namespace banditlab::nd
