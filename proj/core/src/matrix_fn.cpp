#include "repstab/matrix_fn.hpp"

#include <algorithm>
#include <string>

#include "repstab/error.hpp"
#include "repstab/linalg.hpp"

namespace repstab {

MatrixFn::MatrixFn(GroupPtr group, std::size_t n, std::vector<CMatrix> values)
    : group_(std::move(group)), n_(n), values_(std::move(values)) {
  if (!group_) throw InvalidArgument("MatrixFn: null group");
  if (n_ == 0) throw InvalidArgument("MatrixFn: dimension must be positive");
  if (values_.size() != group_->order()) {
    throw InvalidArgument("MatrixFn: " + std::to_string(values_.size()) +
                          " values for a group of order " + std::to_string(group_->order()));
  }
  for (const auto& v : values_) {
    if (v.rows() != n_ || v.cols() != n_) {
      throw InvalidArgument("MatrixFn: value of shape " + std::to_string(v.rows()) + "x" +
                            std::to_string(v.cols()) + ", expected " + std::to_string(n_) +
                            "x" + std::to_string(n_));
    }
    if (!v.all_finite()) throw InvalidArgument("MatrixFn: non-finite entry");
  }
}

MatrixFn MatrixFn::zero(GroupPtr group, std::size_t n) {
  const std::size_t order = group->order();
  return MatrixFn(std::move(group), n, std::vector<CMatrix>(order, CMatrix(n, n)));
}

MatrixFn MatrixFn::constant(GroupPtr group, const CMatrix& value) {
  const std::size_t order = group->order();
  return MatrixFn(std::move(group), value.rows(), std::vector<CMatrix>(order, value));
}

double MatrixFn::max_op_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, op_norm(v));
  return m;
}

double MatrixFn::max_unitarity_residual() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, partial_unitary_residual(v));
  return m;
}

MatrixFn& MatrixFn::operator+=(const MatrixFn& o) {
  require_compatible(*this, o, "MatrixFn::operator+");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

MatrixFn& MatrixFn::operator-=(const MatrixFn& o) {
  require_compatible(*this, o, "MatrixFn::operator-");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

MatrixFn& MatrixFn::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}

bool same_group(const FiniteGroup& a, const FiniteGroup& b) {
  return &a == &b || a.same_table(b);
}

void require_compatible(const MatrixFn& f, const MatrixFn& g, const char* what) {
  if (!same_group(f.group(), g.group())) {
    throw InvalidArgument(std::string(what) + ": functions live on different groups");
  }
  if (f.n() != g.n()) {
    throw InvalidArgument(std::string(what) + ": dimensions " + std::to_string(f.n()) + " and " +
                          std::to_string(g.n()) + " differ");
  }
}

MatrixFn sandwich(const CMatrix& a, const MatrixFn& f, const CMatrix& b) {
  std::vector<CMatrix> out;
  out.reserve(f.size());
  for (const auto& v : f.values()) out.push_back(a * v * b);
  return MatrixFn(f.group_ptr(), a.rows(), std::move(out));
}

double max_homomorphism_residual(const MatrixFn& f) {
  const auto& g = f.group();
  const auto order = static_cast<Element>(g.order());
  double m = 0.0;
  for (Element x = 0; x < order; ++x) {
    for (Element y = 0; y < order; ++y) {
      m = std::max(m, max_abs_diff(f(x) * f(y), f(g.mul(x, y))));
    }
  }
  return m;
}

}  // namespace repstab
