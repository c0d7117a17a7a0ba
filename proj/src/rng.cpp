#include "asgcn/rng.hpp"

#include <cmath>
#include <queue>

#include "asgcn/errors.hpp"

namespace asgcn {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

rng::rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

std::size_t rng::below(std::size_t n) {
  if (n == 0) throw dimension_error("rng::below: n must be positive");
  // rejection sampling to avoid modulo bias
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

double rng::normal() {
  double u1 = uniform01();
  while (u1 == 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

rng rng::child(std::uint64_t stream) const {
  return rng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

alias_table::alias_table(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw validation_error("alias_table: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw validation_error("alias_table: negative or NaN weight");
    total += w;
  }
  if (total <= 0.0) throw validation_error("alias_table: weights sum to zero");
  norm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) norm_[i] = weights[i] / total;

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::queue<std::size_t> small, large;
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = norm_[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.front();
    const std::size_t l = large.front();
    small.pop();
    large.pop();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    (scaled[l] < 1.0 ? small : large).push(l);
  }
  while (!large.empty()) {
    prob_[large.front()] = 1.0;
    alias_[large.front()] = large.front();
    large.pop();
  }
  while (!small.empty()) {  // fp leftovers
    prob_[small.front()] = 1.0;
    alias_[small.front()] = small.front();
    small.pop();
  }
}

std::size_t alias_table::sample(rng& r) const {
  const std::size_t i = r.below(prob_.size());
  return r.uniform01() < prob_[i] ? i : alias_[i];
}

}  // namespace asgcn
