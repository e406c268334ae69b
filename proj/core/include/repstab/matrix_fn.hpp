#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "repstab/cmatrix.hpp"
#include "repstab/group.hpp"

namespace repstab {

/// A function from a finite group to n x n complex matrices, stored as one
/// matrix per element index. Representations, approximate representations
/// and the functions fed to the inverse theorem all use this type.
class MatrixFn {
 public:
  MatrixFn() = default;
  MatrixFn(GroupPtr group, std::size_t n, std::vector<CMatrix> values);

  static MatrixFn zero(GroupPtr group, std::size_t n);
  static MatrixFn constant(GroupPtr group, const CMatrix& value);

  const FiniteGroup& group() const { return *group_; }
  const GroupPtr& group_ptr() const noexcept { return group_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return values_.size(); }

  const CMatrix& operator()(Element x) const { return values_[x]; }
  CMatrix& operator()(Element x) { return values_[x]; }
  std::span<const CMatrix> values() const noexcept { return values_; }

  /// max_x ||f(x)||_op.
  double max_op_norm() const;
  /// max_x of the largest deviation of f(x) from unitarity, entrywise.
  double max_unitarity_residual() const;

  MatrixFn& operator+=(const MatrixFn& o);
  MatrixFn& operator-=(const MatrixFn& o);
  MatrixFn& operator*=(Complex s);
  friend MatrixFn operator+(MatrixFn a, const MatrixFn& b) { return a += b; }
  friend MatrixFn operator-(MatrixFn a, const MatrixFn& b) { return a -= b; }
  friend MatrixFn operator*(MatrixFn a, Complex s) { return a *= s; }
  friend MatrixFn operator*(Complex s, MatrixFn a) { return a *= s; }

 private:
  GroupPtr group_;
  std::size_t n_ = 0;
  std::vector<CMatrix> values_;
};

bool same_group(const FiniteGroup& a, const FiniteGroup& b);
/// Throws InvalidArgument unless f and g live on the same group and have
/// the same dimension.
void require_compatible(const MatrixFn& f, const MatrixFn& g, const char* what);

/// x -> A f(x) B.
MatrixFn sandwich(const CMatrix& a, const MatrixFn& f, const CMatrix& b);

/// max_{x,y} of the multiplicative residual max-abs(f(x) f(y) - f(xy)).
double max_homomorphism_residual(const MatrixFn& f);

}  // namespace repstab
