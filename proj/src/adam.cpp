#include "asgcn/adam.hpp"

#include <cmath>

#include "asgcn/errors.hpp"

namespace asgcn {

void adam_optimizer::step(const std::vector<dense_matrix*>& params,
                          const std::vector<const dense_matrix*>& grads) {
  if (params.size() != grads.size()) throw dimension_error("adam: param/grad count mismatch");
  if (m_.empty()) {
    for (const auto* p : params) {
      m_.emplace_back(p->rows(), p->cols());
      v_.emplace_back(p->rows(), p->cols());
    }
  }
  if (m_.size() != params.size()) throw dimension_error("adam: parameter set changed");
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    dense_matrix& p = *params[k];
    if (!p.same_shape(m_[k])) throw dimension_error("adam: parameter shape changed");
    const dense_matrix* g = grads[k];
    if (g && !g->same_shape(p)) throw dimension_error("adam: grad shape mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = (g && g->size() ? g->data()[i] : 0.0) + cfg_.weight_decay * p.data()[i];
      double& mi = m_[k].data()[i];
      double& vi = v_[k].data()[i];
      mi = cfg_.beta1 * mi + (1.0 - cfg_.beta1) * gi;
      vi = cfg_.beta2 * vi + (1.0 - cfg_.beta2) * gi * gi;
      const double mhat = mi / bc1;
      const double vhat = vi / bc2;
      p.data()[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
    if (!p.all_finite()) throw numeric_error("adam: parameter became non-finite");
  }
}

}  // namespace asgcn
