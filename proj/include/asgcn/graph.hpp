#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asgcn/dataset.hpp"
#include "asgcn/matrix.hpp"
#include "asgcn/rng.hpp"

namespace asgcn {

/// The propagation operator: a symmetric non-negative matrix with strictly
/// positive diagonal mass, plus the per-row quantities the samplers need.
/// p(u|v) = value(v,u) / row_mass(v) is a distribution over each row.
/// Immutable after construction; safe to share across threads.
class normalized_graph {
 public:
  normalized_graph(sparse_matrix adj);

  std::size_t num_nodes() const { return adj_.rows; }
  const sparse_matrix& adjacency() const { return adj_; }

  double row_mass(std::uint32_t v) const { return row_mass_[v]; }
  /// Squared Euclidean norm of row v (equals the column norm by symmetry).
  double row_sq_norm(std::uint32_t v) const { return row_sq_norm_[v]; }
  std::size_t degree(std::uint32_t v) const { return adj_.row_ptr[v + 1] - adj_.row_ptr[v]; }

  std::span<const std::uint32_t> neighbors(std::uint32_t v) const;
  std::span<const double> neighbor_values(std::uint32_t v) const;

  /// value(v,u) with a binary search; 0 when the pair is not adjacent.
  double value(std::uint32_t v, std::uint32_t u) const { return adj_.at(v, u); }
  /// p(u|v); throws dimension_error when either node is out of range.
  double conditional_prob(std::uint32_t v, std::uint32_t u) const;

  /// Index into neighbors(v) drawn proportionally to p(.|v).
  std::uint32_t draw_neighbor(std::uint32_t v, rng& r) const;
  std::uint32_t draw_neighbor_uniform(std::uint32_t v, rng& r) const;

 private:
  sparse_matrix adj_;
  std::vector<double> row_mass_;
  std::vector<double> row_sq_norm_;
  std::vector<double> cum_;  // per-row prefix sums of values, aligned with storage
};

/// Symmetric renormalization with self-loops: with A the binary adjacency
/// and S = A + I, returns D^{-1/2} S D^{-1/2} where D holds S's row sums.
normalized_graph normalize(const raw_dataset& raw);

/// Second-order expansion of the operator: base + base^2. Refuses graphs
/// with more than max_nodes nodes (the product is much denser).
normalized_graph two_hop_graph(const normalized_graph& g, std::size_t max_nodes = 65536);

}  // namespace asgcn
