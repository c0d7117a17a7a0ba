#include "asgcn/graph.hpp"

#include <algorithm>
#include <cmath>

#include "asgcn/errors.hpp"

namespace asgcn {

normalized_graph::normalized_graph(sparse_matrix adj) : adj_(std::move(adj)) {
  if (adj_.rows != adj_.cols) throw validation_error("graph operator must be square");
  adj_.check_invariants();
  const std::size_t n = adj_.rows;
  row_mass_.resize(n);
  row_sq_norm_.resize(n);
  cum_.resize(adj_.nnz());
  for (std::size_t v = 0; v < n; ++v) {
    double mass = 0.0, sq = 0.0;
    for (std::size_t k = adj_.row_ptr[v]; k < adj_.row_ptr[v + 1]; ++k) {
      const double a = adj_.values[k];
      if (a < 0.0) throw validation_error("graph operator has a negative entry");
      mass += a;
      sq += a * a;
      cum_[k] = mass;
    }
    if (mass <= 0.0)
      throw validation_error("node " + std::to_string(v) + " has zero row mass");
    row_mass_[v] = mass;
    row_sq_norm_[v] = sq;
  }
}

std::span<const std::uint32_t> normalized_graph::neighbors(std::uint32_t v) const {
  return {adj_.col_idx.data() + adj_.row_ptr[v], adj_.row_ptr[v + 1] - adj_.row_ptr[v]};
}

std::span<const double> normalized_graph::neighbor_values(std::uint32_t v) const {
  return {adj_.values.data() + adj_.row_ptr[v], adj_.row_ptr[v + 1] - adj_.row_ptr[v]};
}

double normalized_graph::conditional_prob(std::uint32_t v, std::uint32_t u) const {
  if (v >= num_nodes() || u >= num_nodes())
    throw dimension_error("conditional_prob: node out of range");
  return value(v, u) / row_mass_[v];
}

std::uint32_t normalized_graph::draw_neighbor(std::uint32_t v, rng& r) const {
  const std::size_t lo = adj_.row_ptr[v], hi = adj_.row_ptr[v + 1];
  const double x = r.uniform01() * row_mass_[v];
  const auto it = std::upper_bound(cum_.begin() + lo, cum_.begin() + hi, x);
  const std::size_t k = std::min<std::size_t>(it - cum_.begin(), hi - 1);
  return static_cast<std::uint32_t>(k - lo);
}

std::uint32_t normalized_graph::draw_neighbor_uniform(std::uint32_t v, rng& r) const {
  return static_cast<std::uint32_t>(r.below(degree(v)));
}

normalized_graph normalize(const raw_dataset& raw) {
  const std::size_t n = raw.n;
  std::vector<double> deg(n, 1.0);  // self-loop
  for (auto [u, v] : raw.edges) {
    deg[u] += 1.0;
    deg[v] += 1.0;
  }
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> trip;
  trip.reserve(2 * raw.edges.size() + n);
  for (std::uint32_t v = 0; v < n; ++v) trip.emplace_back(v, v, 1.0 / deg[v]);
  for (auto [u, v] : raw.edges) {
    const double w = 1.0 / std::sqrt(deg[u] * deg[v]);
    trip.emplace_back(u, v, w);
    trip.emplace_back(v, u, w);
  }
  return normalized_graph(sparse_matrix::from_coo(n, n, std::move(trip)));
}

normalized_graph two_hop_graph(const normalized_graph& g, std::size_t max_nodes) {
  if (g.num_nodes() > max_nodes)
    throw config_error("two_hop_graph: graph exceeds the configured node cap");
  const sparse_matrix& a = g.adjacency();
  return normalized_graph(sparse_add(a, spgemm(a, a)));
}

}  // namespace asgcn
