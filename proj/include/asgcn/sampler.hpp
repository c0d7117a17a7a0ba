#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "asgcn/graph.hpp"
#include "asgcn/matrix.hpp"
#include "asgcn/rng.hpp"

namespace asgcn {

enum class sampler_kind { full, node_wise, iid, adaptive };
enum class node_wise_mode { uniform, proportional };

const char* to_string(sampler_kind k);
std::optional<sampler_kind> sampler_from_string(const std::string& s);

/// Trainable sampler-side parameters: a linear scoring row applied to raw
/// node features, plus the two scalar attention weights.
struct sampler_params {
  dense_matrix score_weight;  // 1 x D
  double attn_parent_w = 0.0;
  double attn_child_w = 0.0;
};

/// Linear feature score used to rank candidate importance.
double feature_score(const sampler_params& sp, const double* x, std::size_t dim);

/// Non-negative attention weight between two scored nodes:
/// relu(w_parent * score_v + w_child * score_u) / denom.
double attention_value(const sampler_params& sp, double score_v, double score_u, double denom);

/// One sampled propagation step. `out_units` are the nodes whose next-layer
/// activation this step produces; `slots` is the drawn sample below them
/// (with replacement, duplicates kept as distinct slots). `in_units` are the
/// deduplicated compute rows the slots map onto -- except in node-wise
/// middle layers, where every slot is its own compute unit because each
/// carries an estimate from its own private draws.
struct layer_plan {
  sampler_kind kind = sampler_kind::full;

  std::vector<std::uint32_t> out_units;  // node ids, order fixed by the level above
  std::vector<std::uint32_t> slots;      // node ids, size = layer sample size
  std::vector<double> slot_q;            // draw probability recorded exactly as used
  std::vector<std::uint32_t> slot_unit;  // slot -> index into in_units
  std::vector<std::uint32_t> in_units;   // node ids of the lower compute rows

  /// Divisor of the Monte-Carlo mean: the full slot count for layer-wise
  /// strategies, the per-parent draw count for node-wise.
  std::size_t mean_denom = 1;

  // Aggregation support: all (out unit, slot) pairs with a nonzero operator
  // entry (node-wise: only a parent's own slots).
  std::vector<std::uint32_t> edge_row;   // index into out_units
  std::vector<std::uint32_t> edge_slot;  // index into slots
  std::vector<double> edge_p;            // p(slot node | out unit) from the graph
  std::vector<double> edge_a;            // operator entry = p * row_mass(out unit)

  // Layer-wise bookkeeping: the candidate set the draw distribution was
  // defined over, with its accumulated conditional mass (multiplicity-
  // weighted over the conditioning multiset), and the support edges used
  // to rebuild the distribution differentiably.
  std::vector<std::uint32_t> candidates;      // sorted unique node ids
  std::vector<double> candidate_mass;         // sum of p(u|v) over conditioners
  std::vector<std::uint32_t> slot_candidate;  // slot -> index into candidates
  std::vector<std::uint32_t> cand_edge_parent;  // index into conditioning multiset
  std::vector<std::uint32_t> cand_edge_col;     // index into candidates
  std::vector<std::uint32_t> conditioners;      // the conditioning multiset itself
  bool degenerate_fallback = false;  // scores vanished; score-free distribution used

  std::size_t slot_count() const { return slots.size(); }
};

/// Top-down construction: level 0 is the minibatch, each further level is
/// drawn conditioned on the one above it.
struct network_plan {
  std::vector<std::uint32_t> targets;
  std::vector<layer_plan> layers;  // [0] adjacent to the targets, last at the input

  /// Node counts per level, targets first: e.g. {256, 128, 128}.
  std::vector<std::size_t> level_counts() const;
  std::size_t total_slots() const;
};

struct plan_options {
  sampler_kind kind = sampler_kind::adaptive;
  node_wise_mode nw_mode = node_wise_mode::uniform;
  bool attention = false;
  /// Denominator of the attention weights; <= 0 picks the layer sample size.
  double attention_denom = 0.0;
};

/// Count of adaptive draws that had to fall back to the score-free
/// distribution because every candidate score was zero.
struct sampler_stats {
  std::size_t degenerate_fallbacks = 0;
};

layer_plan sample_full_support(const normalized_graph& g, std::span<const std::uint32_t> out_units,
                               std::span<const std::uint32_t> conditioners,
                               const sampler_params* sp, const plan_options& opt);

layer_plan sample_node_wise(const normalized_graph& g, std::span<const std::uint32_t> parents,
                            std::size_t draws_per_parent, node_wise_mode mode, rng& r,
                            const sampler_params* sp, const plan_options& opt,
                            bool dedupe_units);

layer_plan sample_iid_layer(const normalized_graph& g, std::span<const std::uint32_t> out_units,
                            std::span<const std::uint32_t> conditioners, std::size_t n, rng& r,
                            const sampler_params* sp, const plan_options& opt);

layer_plan sample_adaptive_layer(const normalized_graph& g,
                                 std::span<const std::uint32_t> out_units,
                                 std::span<const std::uint32_t> conditioners, std::size_t n,
                                 const sampler_params& sp, const dense_matrix& features, rng& r,
                                 const plan_options& opt, sampler_stats* stats);

/// sizes[l] is the sample size of level l+1 (layer-wise) or the per-parent
/// draw count (node-wise); ignored by the full strategy.
network_plan build_network_plan(const normalized_graph& g,
                                std::vector<std::uint32_t> minibatch, std::size_t depth,
                                std::span<const std::size_t> sizes, const plan_options& opt,
                                const sampler_params& sp, const dense_matrix& features, rng& r,
                                sampler_stats* stats = nullptr);

}  // namespace asgcn
