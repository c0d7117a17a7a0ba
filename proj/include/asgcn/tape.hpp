#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "asgcn/matrix.hpp"

namespace asgcn {

class tape;

/// Lightweight handle to a node on a tape. Valid as long as its tape lives.
class tensor {
 public:
  tensor() = default;
  const dense_matrix& value() const;
  /// Gradient of the last backward() target w.r.t. this node. Zero-shaped
  /// until backward has touched the node.
  const dense_matrix& grad() const;
  bool valid() const { return t_ != nullptr; }
  std::size_t index() const { return idx_; }

 private:
  friend class tape;
  tensor(tape* t, std::size_t i) : t_(t), idx_(i) {}
  tape* t_ = nullptr;
  std::size_t idx_ = 0;
};

enum class norm_kind { l2, l1 };

/// Reverse-mode automatic differentiation over dense matrices.
///
/// Nodes are recorded in creation order, which is already a topological
/// order, so backward() is a single reverse sweep. One tape serves one
/// forward/backward pass; tapes are cheap to create per training step.
/// Every op validates operand shapes and rejects non-finite results.
class tape {
 public:
  tape() = default;
  tape(const tape&) = delete;
  tape& operator=(const tape&) = delete;

  /// Leaf that does not receive a gradient (inputs, fixed weights).
  tensor constant(dense_matrix v);
  /// Leaf that accumulates a gradient (trainable parameters).
  tensor param(dense_matrix v);

  // Elementwise; shapes must match exactly.
  tensor add(tensor a, tensor b);
  tensor sub(tensor a, tensor b);
  tensor mul(tensor a, tensor b);
  tensor div(tensor a, tensor b);

  tensor scale(tensor a, double c);
  tensor reciprocal(tensor a);
  tensor relu(tensor a);
  tensor abs(tensor a);

  tensor matmul(tensor a, tensor b);
  tensor transpose(tensor a);
  /// Fixed sparse operand; gradient flows to the dense side only.
  tensor spmm(sparse_matrix s, tensor d);

  tensor softmax_rows(tensor a);
  /// Mean cross-entropy of row-wise softmax(logits) against integer labels.
  /// Returns 1x1. Labels must lie in [0, logits.cols()).
  tensor cross_entropy(tensor logits, std::vector<int> labels);

  /// Per-row norm, n x 1. The l2 backward uses the zero subgradient at 0.
  tensor row_norms(tensor a, norm_kind k);

  tensor gather_rows(tensor a, std::vector<std::size_t> idx);
  /// out[seg[i], :] += a[i, :]; seg values must be < n_segments.
  tensor segment_sum(tensor a, std::vector<std::size_t> seg, std::size_t n_segments);
  /// out[i, :] = c[i, 0] * a[i, :], with c an n x 1 column.
  tensor row_scale(tensor a, tensor c);

  // Broadcast against a 1x1 scalar node.
  tensor mul_scalar(tensor a, tensor s);
  tensor div_scalar(tensor a, tensor s);

  tensor sum(tensor a);   // 1x1
  tensor mean(tensor a);  // 1x1

  /// Weighted gather-scatter over an edge list:
  ///   out[rows[k], :] += vals[k, 0] * h[cols[k], :]
  /// vals is nnz x 1 and may itself require gradient. This is the workhorse
  /// behind sampled propagation, where edge weights are data-dependent.
  tensor edge_aggregate(tensor vals, std::vector<std::uint32_t> rows,
                        std::vector<std::uint32_t> cols, std::size_t n_rows, tensor h);

  /// Accumulate d(target)/d(leaf) into every reachable gradient. target
  /// must be 1x1. Gradients are reset at the start of each call.
  void backward(tensor target);

  std::size_t node_count() const { return nodes_.size(); }

  const dense_matrix& value_of(std::size_t idx) const { return nodes_[idx].value; }
  const dense_matrix& grad_of(std::size_t idx) const;
  bool requires_grad(std::size_t idx) const { return nodes_[idx].requires_grad; }

 private:
  struct node {
    dense_matrix value;
    dense_matrix grad;  // empty until needed
    bool requires_grad = false;
    bool grad_live = false;
    std::function<void(tape&, std::size_t)> back;  // nullptr for leaves
  };

  tensor emplace(dense_matrix value, bool requires_grad,
                 std::function<void(tape&, std::size_t)> back, const char* op);
  dense_matrix& grad_buffer(std::size_t idx);

  std::vector<node> nodes_;
  static const dense_matrix empty_;
};

}  // namespace asgcn
