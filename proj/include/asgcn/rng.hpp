#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace asgcn {

/// mt19937_64 wrapper with project-owned uniform mapping so that draws are
/// bit-identical across platforms (std::uniform_real_distribution is not).
class rng {
 public:
  explicit rng(std::uint64_t seed);

  std::uint64_t next() { return gen_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n);
  /// Normal(0,1) via Box-Muller on our own uniforms.
  double normal();

  /// Independent stream derived from this rng's seed and a stream id.
  rng child(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// Walker/Vose alias table for O(1) draws from a fixed discrete
/// distribution. Weights need not be normalized; they must be
/// non-negative with a positive sum.
class alias_table {
 public:
  explicit alias_table(const std::vector<double>& weights);

  std::size_t sample(rng& r) const;
  std::size_t size() const { return prob_.size(); }
  /// Normalized probability of outcome i, exactly as used for drawing.
  double probability(std::size_t i) const { return norm_[i]; }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
  std::vector<double> norm_;
};

}  // namespace asgcn
