#pragma once

#include <cstddef>
#include <vector>

#include "asgcn/matrix.hpp"

namespace asgcn {

struct adam_config {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // added to the gradient as decay * param
};

/// Adam with bias correction. Moment buffers are created lazily on the
/// first step and must keep their shapes afterwards.
class adam_optimizer {
 public:
  explicit adam_optimizer(adam_config cfg) : cfg_(cfg) {}

  /// One update over all parameters. params and grads are parallel lists;
  /// a null grad entry leaves that parameter untouched (still decayed if
  /// weight_decay > 0 would apply -- we treat missing grad as zero).
  void step(const std::vector<dense_matrix*>& params,
            const std::vector<const dense_matrix*>& grads);

  std::size_t step_count() const { return t_; }
  const adam_config& config() const { return cfg_; }

 private:
  adam_config cfg_;
  std::vector<dense_matrix> m_;
  std::vector<dense_matrix> v_;
  std::size_t t_ = 0;
};

}  // namespace asgcn
