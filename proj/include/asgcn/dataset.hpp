#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "asgcn/matrix.hpp"

namespace asgcn {

/// A node-classification dataset as it sits on disk: a directory holding
///   edges.tsv     one undirected edge per line, two tab-separated ints
///   features.csv  N rows of D comma-separated reals
///   labels.txt    N integers, one per line
///   splits.json   {"train": [...], "val": [...], "test": [...]} 0-based
struct raw_dataset {
  std::size_t n = 0;
  std::size_t num_classes = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // deduped, u < v
  dense_matrix features;                                       // n x d
  std::vector<int> labels;                                     // size n
  std::vector<std::uint32_t> train_idx, val_idx, test_idx;

  std::size_t feature_dim() const { return features.cols(); }

  /// Throws validation_error on any structural defect (bad endpoint,
  /// overlapping splits, label out of range, count mismatches).
  void validate() const;
};

raw_dataset load_dataset(const std::string& dir);
void save_dataset(const raw_dataset& ds, const std::string& dir);

/// FNV-1a 64 content hash over the four dataset files, for run manifests.
std::string dataset_content_hash(const std::string& dir);

}  // namespace asgcn
