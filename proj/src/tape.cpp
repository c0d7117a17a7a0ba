#include "asgcn/tape.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "asgcn/errors.hpp"

namespace asgcn {

namespace {

using emap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ecmap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

ecmap cm(const dense_matrix& m) {
  return ecmap(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}
emap mm(dense_matrix& m) {
  return emap(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

void check_finite(const dense_matrix& m, const char* op) {
  if (!m.all_finite()) throw numeric_error(std::string(op) + ": non-finite result");
}

}  // namespace

const dense_matrix tape::empty_{};

const dense_matrix& tensor::value() const { return t_->value_of(idx_); }
const dense_matrix& tensor::grad() const { return t_->grad_of(idx_); }

const dense_matrix& tape::grad_of(std::size_t idx) const {
  return nodes_[idx].grad_live ? nodes_[idx].grad : empty_;
}

tensor tape::emplace(dense_matrix value, bool requires_grad,
                     std::function<void(tape&, std::size_t)> back, const char* op) {
  check_finite(value, op);
  nodes_.push_back(node{std::move(value), {}, requires_grad, false, std::move(back)});
  return tensor(this, nodes_.size() - 1);
}

dense_matrix& tape::grad_buffer(std::size_t idx) {
  node& n = nodes_[idx];
  if (!n.grad_live) {
    if (!n.grad.same_shape(n.value)) n.grad = dense_matrix(n.value.rows(), n.value.cols());
    n.grad_live = true;
  }
  return n.grad;
}

tensor tape::constant(dense_matrix v) { return emplace(std::move(v), false, nullptr, "constant"); }

tensor tape::param(dense_matrix v) { return emplace(std::move(v), true, nullptr, "param"); }

tensor tape::add(tensor a, tensor b) {
  const auto& av = value_of(a.idx_);
  const auto& bv = value_of(b.idx_);
  if (!av.same_shape(bv)) throw dimension_error("add: shape mismatch");
  dense_matrix out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += bv.data()[i];
  std::size_t ia = a.idx_, ib = b.idx_;
  return emplace(std::move(out), requires_grad(ia) || requires_grad(ib),
                 [ia, ib](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   for (std::size_t p : {ia, ib}) {
                     if (!t.requires_grad(p)) continue;
                     auto& pg = t.grad_buffer(p);
                     for (std::size_t i = 0; i < g.size(); ++i) pg.data()[i] += g.data()[i];
                   }
                 },
                 "add");
}

tensor tape::sub(tensor a, tensor b) {
  const auto& av = value_of(a.idx_);
  const auto& bv = value_of(b.idx_);
  if (!av.same_shape(bv)) throw dimension_error("sub: shape mismatch");
  dense_matrix out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= bv.data()[i];
  std::size_t ia = a.idx_, ib = b.idx_;
  return emplace(std::move(out), requires_grad(ia) || requires_grad(ib),
                 [ia, ib](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   if (t.requires_grad(ia)) {
                     auto& pg = t.grad_buffer(ia);
                     for (std::size_t i = 0; i < g.size(); ++i) pg.data()[i] += g.data()[i];
                   }
                   if (t.requires_grad(ib)) {
                     auto& pg = t.grad_buffer(ib);
                     for (std::size_t i = 0; i < g.size(); ++i) pg.data()[i] -= g.data()[i];
                   }
                 },
                 "sub");
}

tensor tape::mul(tensor a, tensor b) {
  const auto& av = value_of(a.idx_);
  const auto& bv = value_of(b.idx_);
  if (!av.same_shape(bv)) throw dimension_error("mul: shape mismatch");
  dense_matrix out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= bv.data()[i];
  std::size_t ia = a.idx_, ib = b.idx_;
  return emplace(std::move(out), requires_grad(ia) || requires_grad(ib),
                 [ia, ib](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   const auto& av2 = t.value_of(ia);
                   const auto& bv2 = t.value_of(ib);
                   if (t.requires_grad(ia)) {
                     auto& pg = t.grad_buffer(ia);
                     for (std::size_t i = 0; i < g.size(); ++i)
                       pg.data()[i] += g.data()[i] * bv2.data()[i];
                   }
                   if (t.requires_grad(ib)) {
                     auto& pg = t.grad_buffer(ib);
                     for (std::size_t i = 0; i < g.size(); ++i)
                       pg.data()[i] += g.data()[i] * av2.data()[i];
                   }
                 },
                 "mul");
}

tensor tape::div(tensor a, tensor b) {
  const auto& av = value_of(a.idx_);
  const auto& bv = value_of(b.idx_);
  if (!av.same_shape(bv)) throw dimension_error("div: shape mismatch");
  dense_matrix out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] /= bv.data()[i];
  std::size_t ia = a.idx_, ib = b.idx_;
  return emplace(std::move(out), requires_grad(ia) || requires_grad(ib),
                 [ia, ib](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   const auto& av2 = t.value_of(ia);
                   const auto& bv2 = t.value_of(ib);
                   if (t.requires_grad(ia)) {
                     auto& pg = t.grad_buffer(ia);
                     for (std::size_t i = 0; i < g.size(); ++i)
                       pg.data()[i] += g.data()[i] / bv2.data()[i];
                   }
                   if (t.requires_grad(ib)) {
                     auto& pg = t.grad_buffer(ib);
                     for (std::size_t i = 0; i < g.size(); ++i) {
                       const double d = bv2.data()[i];
                       pg.data()[i] -= g.data()[i] * av2.data()[i] / (d * d);
                     }
                   }
                 },
                 "div");
}

tensor tape::scale(tensor a, double c) {
  dense_matrix out = value_of(a.idx_);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= c;
  std::size_t ia = a.idx_;
  return emplace(std::move(out), requires_grad(ia),
                 [ia, c](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < g.size(); ++i) pg.data()[i] += c * g.data()[i];
                 },
                 "scale");
}

tensor tape::reciprocal(tensor a) {
  dense_matrix out = value_of(a.idx_);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = 1.0 / out.data()[i];
  std::size_t ia = a.idx_;
  return emplace(std::move(out), requires_grad(ia),
                 [ia](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   const auto& ov = t.nodes_[self].value;
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < g.size(); ++i)
                     pg.data()[i] -= g.data()[i] * ov.data()[i] * ov.data()[i];
                 },
                 "reciprocal");
}

tensor tape::relu(tensor a) {
  dense_matrix out = value_of(a.idx_);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::max(0.0, out.data()[i]);
  std::size_t ia = a.idx_;
  return emplace(std::move(out), requires_grad(ia),
                 [ia](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   const auto& av = t.value_of(ia);
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < g.size(); ++i)
                     if (av.data()[i] > 0.0) pg.data()[i] += g.data()[i];
                 },
                 "relu");
}

tensor tape::abs(tensor a) {
  dense_matrix out = value_of(a.idx_);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::fabs(out.data()[i]);
  std::size_t ia = a.idx_;
  return emplace(std::move(out), requires_grad(ia),
                 [ia](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   const auto& av = t.value_of(ia);
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < g.size(); ++i) {
                     const double x = av.data()[i];
                     if (x > 0.0)
                       pg.data()[i] += g.data()[i];
                     else if (x < 0.0)
                       pg.data()[i] -= g.data()[i];
                   }
                 },
                 "abs");
}

tensor tape::matmul(tensor a, tensor b) {
  const auto& av = value_of(a.idx_);
  const auto& bv = value_of(b.idx_);
  dense_matrix out = asgcn::matmul(av, bv);
  std::size_t ia = a.idx_, ib = b.idx_;
  return emplace(std::move(out), requires_grad(ia) || requires_grad(ib),
                 [ia, ib](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   const auto& av2 = t.value_of(ia);
                   const auto& bv2 = t.value_of(ib);
                   if (t.requires_grad(ia)) {
                     auto& pg = t.grad_buffer(ia);
                     mm(pg).noalias() += cm(g) * cm(bv2).transpose();
                   }
                   if (t.requires_grad(ib)) {
                     auto& pg = t.grad_buffer(ib);
                     mm(pg).noalias() += cm(av2).transpose() * cm(g);
                   }
                 },
                 "matmul");
}

tensor tape::transpose(tensor a) {
  dense_matrix out = asgcn::transpose(value_of(a.idx_));
  std::size_t ia = a.idx_;
  return emplace(std::move(out), requires_grad(ia),
                 [ia](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < g.rows(); ++i)
                     for (std::size_t j = 0; j < g.cols(); ++j) pg(j, i) += g(i, j);
                 },
                 "transpose");
}

tensor tape::spmm(sparse_matrix s, tensor d) {
  const auto& dv = value_of(d.idx_);
  dense_matrix out = asgcn::spmm(s, dv);
  std::size_t id = d.idx_;
  auto sp = std::make_shared<sparse_matrix>(std::move(s));
  return emplace(std::move(out), requires_grad(id),
                 [id, sp](tape& t, std::size_t self) {
                   if (!t.requires_grad(id)) return;
                   const auto& g = t.nodes_[self].grad;
                   auto& pg = t.grad_buffer(id);
                   const std::size_t c = g.cols();
                   for (std::size_t r = 0; r < sp->rows; ++r) {
                     const double* grow = g.row(r);
                     for (std::size_t k = sp->row_ptr[r]; k < sp->row_ptr[r + 1]; ++k) {
                       double* prow = pg.row(sp->col_idx[k]);
                       const double v = sp->values[k];
                       for (std::size_t j = 0; j < c; ++j) prow[j] += v * grow[j];
                     }
                   }
                 },
                 "spmm");
}

tensor tape::softmax_rows(tensor a) {
  const auto& av = value_of(a.idx_);
  dense_matrix out(av.rows(), av.cols());
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double mx = av(i, 0);
    for (std::size_t j = 1; j < av.cols(); ++j) mx = std::max(mx, av(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < av.cols(); ++j) {
      out(i, j) = std::exp(av(i, j) - mx);
      z += out(i, j);
    }
    for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) /= z;
  }
  std::size_t ia = a.idx_;
  return emplace(std::move(out), requires_grad(ia),
                 [ia](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   const auto& s = t.nodes_[self].value;
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < g.rows(); ++i) {
                     double dot = 0.0;
                     for (std::size_t j = 0; j < g.cols(); ++j) dot += g(i, j) * s(i, j);
                     for (std::size_t j = 0; j < g.cols(); ++j)
                       pg(i, j) += s(i, j) * (g(i, j) - dot);
                   }
                 },
                 "softmax_rows");
}

tensor tape::cross_entropy(tensor logits, std::vector<int> labels) {
  const auto& lv = value_of(logits.idx_);
  if (labels.size() != lv.rows()) throw dimension_error("cross_entropy: label count mismatch");
  for (int y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= lv.cols())
      throw validation_error("cross_entropy: label out of range");
  const std::size_t n = lv.rows();
  dense_matrix out(1, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mx = lv(i, 0);
    for (std::size_t j = 1; j < lv.cols(); ++j) mx = std::max(mx, lv(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < lv.cols(); ++j) z += std::exp(lv(i, j) - mx);
    total += (mx + std::log(z)) - lv(i, static_cast<std::size_t>(labels[i]));
  }
  out(0, 0) = total / static_cast<double>(n);
  std::size_t il = logits.idx_;
  auto lab = std::make_shared<std::vector<int>>(std::move(labels));
  return emplace(std::move(out), requires_grad(il),
                 [il, lab](tape& t, std::size_t self) {
                   if (!t.requires_grad(il)) return;
                   const double g = t.nodes_[self].grad(0, 0);
                   const auto& lv2 = t.value_of(il);
                   auto& pg = t.grad_buffer(il);
                   const double inv_n = 1.0 / static_cast<double>(lv2.rows());
                   for (std::size_t i = 0; i < lv2.rows(); ++i) {
                     double mx = lv2(i, 0);
                     for (std::size_t j = 1; j < lv2.cols(); ++j) mx = std::max(mx, lv2(i, j));
                     double z = 0.0;
                     for (std::size_t j = 0; j < lv2.cols(); ++j) z += std::exp(lv2(i, j) - mx);
                     for (std::size_t j = 0; j < lv2.cols(); ++j) {
                       double p = std::exp(lv2(i, j) - mx) / z;
                       double d = p - (static_cast<std::size_t>((*lab)[i]) == j ? 1.0 : 0.0);
                       pg(i, j) += g * inv_n * d;
                     }
                   }
                 },
                 "cross_entropy");
}

tensor tape::row_norms(tensor a, norm_kind k) {
  const auto& av = value_of(a.idx_);
  dense_matrix out(av.rows(), 1);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < av.cols(); ++j) {
      const double x = av(i, j);
      acc += (k == norm_kind::l2) ? x * x : std::fabs(x);
    }
    out(i, 0) = (k == norm_kind::l2) ? std::sqrt(acc) : acc;
  }
  std::size_t ia = a.idx_;
  return emplace(std::move(out), requires_grad(ia),
                 [ia, k](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   const auto& nv = t.nodes_[self].value;
                   const auto& av2 = t.value_of(ia);
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < av2.rows(); ++i) {
                     const double gi = g(i, 0);
                     if (k == norm_kind::l2) {
                       const double ni = nv(i, 0);
                       if (ni == 0.0) continue;
                       for (std::size_t j = 0; j < av2.cols(); ++j)
                         pg(i, j) += gi * av2(i, j) / ni;
                     } else {
                       for (std::size_t j = 0; j < av2.cols(); ++j) {
                         const double x = av2(i, j);
                         if (x > 0.0)
                           pg(i, j) += gi;
                         else if (x < 0.0)
                           pg(i, j) -= gi;
                       }
                     }
                   }
                 },
                 "row_norms");
}

tensor tape::gather_rows(tensor a, std::vector<std::size_t> idx) {
  const auto& av = value_of(a.idx_);
  for (std::size_t i : idx)
    if (i >= av.rows()) throw dimension_error("gather_rows: index out of range");
  dense_matrix out(idx.size(), av.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy(av.row(idx[i]), av.row(idx[i]) + av.cols(), out.row(i));
  std::size_t ia = a.idx_;
  auto ix = std::make_shared<std::vector<std::size_t>>(std::move(idx));
  return emplace(std::move(out), requires_grad(ia),
                 [ia, ix](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < ix->size(); ++i) {
                     double* prow = pg.row((*ix)[i]);
                     const double* grow = g.row(i);
                     for (std::size_t j = 0; j < g.cols(); ++j) prow[j] += grow[j];
                   }
                 },
                 "gather_rows");
}

tensor tape::segment_sum(tensor a, std::vector<std::size_t> seg, std::size_t n_segments) {
  const auto& av = value_of(a.idx_);
  if (seg.size() != av.rows()) throw dimension_error("segment_sum: segment count mismatch");
  for (std::size_t s : seg)
    if (s >= n_segments) throw dimension_error("segment_sum: segment id out of range");
  dense_matrix out(n_segments, av.cols());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    double* orow = out.row(seg[i]);
    const double* arow = av.row(i);
    for (std::size_t j = 0; j < av.cols(); ++j) orow[j] += arow[j];
  }
  std::size_t ia = a.idx_;
  auto sg = std::make_shared<std::vector<std::size_t>>(std::move(seg));
  return emplace(std::move(out), requires_grad(ia),
                 [ia, sg](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const auto& g = t.nodes_[self].grad;
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < sg->size(); ++i) {
                     const double* grow = g.row((*sg)[i]);
                     double* prow = pg.row(i);
                     for (std::size_t j = 0; j < g.cols(); ++j) prow[j] += grow[j];
                   }
                 },
                 "segment_sum");
}

tensor tape::row_scale(tensor a, tensor c) {
  const auto& av = value_of(a.idx_);
  const auto& cv = value_of(c.idx_);
  if (cv.cols() != 1 || cv.rows() != av.rows()) throw dimension_error("row_scale: scale must be n x 1");
  dense_matrix out = av;
  for (std::size_t i = 0; i < av.rows(); ++i) {
    const double s = cv(i, 0);
    double* orow = out.row(i);
    for (std::size_t j = 0; j < av.cols(); ++j) orow[j] *= s;
  }
  std::size_t ia = a.idx_, ic = c.idx_;
  return emplace(std::move(out), requires_grad(ia) || requires_grad(ic),
                 [ia, ic](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   const auto& av2 = t.value_of(ia);
                   const auto& cv2 = t.value_of(ic);
                   if (t.requires_grad(ia)) {
                     auto& pg = t.grad_buffer(ia);
                     for (std::size_t i = 0; i < g.rows(); ++i) {
                       const double s = cv2(i, 0);
                       for (std::size_t j = 0; j < g.cols(); ++j) pg(i, j) += s * g(i, j);
                     }
                   }
                   if (t.requires_grad(ic)) {
                     auto& pg = t.grad_buffer(ic);
                     for (std::size_t i = 0; i < g.rows(); ++i) {
                       double dot = 0.0;
                       for (std::size_t j = 0; j < g.cols(); ++j) dot += g(i, j) * av2(i, j);
                       pg(i, 0) += dot;
                     }
                   }
                 },
                 "row_scale");
}

tensor tape::mul_scalar(tensor a, tensor s) {
  const auto& sv = value_of(s.idx_);
  if (sv.rows() != 1 || sv.cols() != 1) throw dimension_error("mul_scalar: scalar must be 1x1");
  const auto& av = value_of(a.idx_);
  dense_matrix out = av;
  const double c = sv(0, 0);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= c;
  std::size_t ia = a.idx_, is = s.idx_;
  return emplace(std::move(out), requires_grad(ia) || requires_grad(is),
                 [ia, is](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   const auto& av2 = t.value_of(ia);
                   const double c2 = t.value_of(is)(0, 0);
                   if (t.requires_grad(ia)) {
                     auto& pg = t.grad_buffer(ia);
                     for (std::size_t i = 0; i < g.size(); ++i) pg.data()[i] += c2 * g.data()[i];
                   }
                   if (t.requires_grad(is)) {
                     auto& pg = t.grad_buffer(is);
                     double dot = 0.0;
                     for (std::size_t i = 0; i < g.size(); ++i) dot += g.data()[i] * av2.data()[i];
                     pg(0, 0) += dot;
                   }
                 },
                 "mul_scalar");
}

tensor tape::div_scalar(tensor a, tensor s) {
  const auto& sv = value_of(s.idx_);
  if (sv.rows() != 1 || sv.cols() != 1) throw dimension_error("div_scalar: scalar must be 1x1");
  const auto& av = value_of(a.idx_);
  dense_matrix out = av;
  const double c = sv(0, 0);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] /= c;
  std::size_t ia = a.idx_, is = s.idx_;
  return emplace(std::move(out), requires_grad(ia) || requires_grad(is),
                 [ia, is](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   const auto& av2 = t.value_of(ia);
                   const double c2 = t.value_of(is)(0, 0);
                   if (t.requires_grad(ia)) {
                     auto& pg = t.grad_buffer(ia);
                     for (std::size_t i = 0; i < g.size(); ++i) pg.data()[i] += g.data()[i] / c2;
                   }
                   if (t.requires_grad(is)) {
                     auto& pg = t.grad_buffer(is);
                     double dot = 0.0;
                     for (std::size_t i = 0; i < g.size(); ++i) dot += g.data()[i] * av2.data()[i];
                     pg(0, 0) -= dot / (c2 * c2);
                   }
                 },
                 "div_scalar");
}

tensor tape::sum(tensor a) {
  const auto& av = value_of(a.idx_);
  dense_matrix out(1, 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += av.data()[i];
  out(0, 0) = acc;
  std::size_t ia = a.idx_;
  return emplace(std::move(out), requires_grad(ia),
                 [ia](tape& t, std::size_t self) {
                   if (!t.requires_grad(ia)) return;
                   const double g = t.nodes_[self].grad(0, 0);
                   auto& pg = t.grad_buffer(ia);
                   for (std::size_t i = 0; i < pg.size(); ++i) pg.data()[i] += g;
                 },
                 "sum");
}

tensor tape::mean(tensor a) {
  const auto& av = value_of(a.idx_);
  if (av.size() == 0) throw dimension_error("mean: empty input");
  return scale(sum(a), 1.0 / static_cast<double>(av.size()));
}

tensor tape::edge_aggregate(tensor vals, std::vector<std::uint32_t> rows,
                            std::vector<std::uint32_t> cols, std::size_t n_rows, tensor h) {
  const auto& vv = value_of(vals.idx_);
  const auto& hv = value_of(h.idx_);
  if (vv.cols() != 1 || vv.rows() != rows.size() || rows.size() != cols.size())
    throw dimension_error("edge_aggregate: edge list shape mismatch");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= n_rows || cols[k] >= hv.rows())
      throw dimension_error("edge_aggregate: edge index out of range");
  }
  dense_matrix out(n_rows, hv.cols());
  const std::size_t c = hv.cols();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double* orow = out.row(rows[k]);
    const double* hrow = hv.row(cols[k]);
    const double w = vv(k, 0);
    for (std::size_t j = 0; j < c; ++j) orow[j] += w * hrow[j];
  }
  std::size_t iv = vals.idx_, ih = h.idx_;
  auto rs = std::make_shared<std::vector<std::uint32_t>>(std::move(rows));
  auto cs = std::make_shared<std::vector<std::uint32_t>>(std::move(cols));
  return emplace(std::move(out), requires_grad(iv) || requires_grad(ih),
                 [iv, ih, rs, cs](tape& t, std::size_t self) {
                   const auto& g = t.nodes_[self].grad;
                   const auto& vv2 = t.value_of(iv);
                   const auto& hv2 = t.value_of(ih);
                   const std::size_t c2 = hv2.cols();
                   if (t.requires_grad(iv)) {
                     auto& pg = t.grad_buffer(iv);
                     for (std::size_t k = 0; k < rs->size(); ++k) {
                       const double* grow = g.row((*rs)[k]);
                       const double* hrow = hv2.row((*cs)[k]);
                       double dot = 0.0;
                       for (std::size_t j = 0; j < c2; ++j) dot += grow[j] * hrow[j];
                       pg(k, 0) += dot;
                     }
                   }
                   if (t.requires_grad(ih)) {
                     auto& pg = t.grad_buffer(ih);
                     for (std::size_t k = 0; k < rs->size(); ++k) {
                       const double* grow = g.row((*rs)[k]);
                       double* prow = pg.row((*cs)[k]);
                       const double w = vv2(k, 0);
                       for (std::size_t j = 0; j < c2; ++j) prow[j] += w * grow[j];
                     }
                   }
                 },
                 "edge_aggregate");
}

void tape::backward(tensor target) {
  const auto& tv = value_of(target.idx_);
  if (tv.rows() != 1 || tv.cols() != 1) throw dimension_error("backward: target must be 1x1");
  for (auto& n : nodes_) {
    if (n.grad_live) {
      for (std::size_t i = 0; i < n.grad.size(); ++i) n.grad.data()[i] = 0.0;
      n.grad_live = false;
    }
  }
  grad_buffer(target.idx_)(0, 0) = 1.0;
  for (std::size_t i = target.idx_ + 1; i-- > 0;) {
    node& n = nodes_[i];
    if (!n.grad_live || !n.back || !n.requires_grad) continue;
    n.back(*this, i);
  }
}

}  // namespace asgcn
