#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace repstab {

using Complex = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dense row-major complex matrix with value semantics.
class CMatrix {
 public:
  CMatrix() = default;
  /// Zero matrix.
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> d);
  static CMatrix diagonal(std::span<const Complex> d);
  /// Column vector from a span.
  static CMatrix column(std::span<const Complex> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> entries() noexcept { return data_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  /// Entrywise complex conjugate.
  CMatrix conj() const;
  Complex trace() const;
  bool all_finite() const;

  /// Copy of the `nrows` x `ncols` block starting at (r0, c0).
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);
  /// Columns [first, first + count).
  CMatrix columns(std::size_t first, std::size_t count) const {
    return block(0, first, rows_, count);
  }

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);
  CMatrix& operator/=(Complex s) { return *this *= (Complex(1.0) / s); }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator/(CMatrix a, Complex s) { return a /= s; }
  friend CMatrix operator-(CMatrix a) { return a *= Complex(-1.0); }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// a * b^*, without forming the adjoint.
CMatrix mul_adjoint(const CMatrix& a, const CMatrix& b);
/// a^* * b, without forming the adjoint.
CMatrix adjoint_mul(const CMatrix& a, const CMatrix& b);

/// Matrix inner product <A, B> = tr(A B^*).
Complex inner(const CMatrix& a, const CMatrix& b);
/// Frobenius norm; equals the Schatten 2-norm.
double hs_norm(const CMatrix& a);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

CMatrix kron(const CMatrix& a, const CMatrix& b);
/// (A | B) side by side; row counts must agree.
CMatrix hstack(std::span<const CMatrix> blocks);
/// A_1 (+) ... (+) A_k.
CMatrix block_diag(std::span<const CMatrix> blocks);

/// Treats `m` (n*d square) as an n x n grid of d x d blocks and replaces each
/// block by its trace.
CMatrix partial_trace_blocks(const CMatrix& m, std::size_t n, std::size_t d);
/// Left-multiplies every d x d block of `m` by `r`; equals (I_n (x) R) M.
CMatrix block_scalar_mul(const CMatrix& r, const CMatrix& m);

/// Row-major reshape of a length rows*cols vector.
CMatrix reshape(std::span<const Complex> v, std::size_t rows, std::size_t cols);

}  // namespace repstab
