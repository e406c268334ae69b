#include "repstab/cmatrix.hpp"

#include <algorithm>
#include <cmath>

#include "repstab/error.hpp"

namespace repstab {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                          "x" + std::to_string(b.cols()));
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw InvalidArgument("CMatrix: entry count " + std::to_string(data_.size()) +
                          " does not match shape " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::column(std::span<const Complex> v) {
  return CMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
}

CMatrix CMatrix::adjoint() const {
  CMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  }
  return t;
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

CMatrix CMatrix::conj() const {
  CMatrix t = *this;
  for (auto& z : t.data_) z = std::conj(z);
  return t;
}

Complex CMatrix::trace() const {
  Complex s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
  if (r0 + nrows > rows_ || c0 + ncols > cols_) throw InvalidArgument("CMatrix::block out of range");
  CMatrix b(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw InvalidArgument("CMatrix::set_block out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidArgument("matrix product: inner dimensions " + std::to_string(a.cols()) +
                          " and " + std::to_string(b.rows()) + " differ");
  }
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      const Complex* brow = &b.entries()[k * b.cols()];
      Complex* crow = &c.entries()[i * c.cols()];
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

CMatrix mul_adjoint(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.cols()) throw InvalidArgument("mul_adjoint: column counts differ");
  CMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * std::conj(b(j, k));
      c(i, j) = s;
    }
  }
  return c;
}

CMatrix adjoint_mul(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidArgument("adjoint_mul: row counts differ");
  CMatrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Complex aki = std::conj(a(k, i));
      if (aki == Complex(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  }
  return c;
}

Complex inner(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "inner");
  Complex s = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) s += ea[k] * std::conj(eb[k]);
  return s;
}

double hs_norm(const CMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  }
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t s = 0; s < b.cols(); ++s) {
          k(i * b.rows() + r, j * b.cols() + s) = aij * b(r, s);
        }
      }
    }
  }
  return k;
}

CMatrix hstack(std::span<const CMatrix> blocks) {
  if (blocks.empty()) return {};
  std::size_t cols = 0;
  const std::size_t rows = blocks.front().rows();
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw InvalidArgument("hstack: row counts differ");
    cols += b.cols();
  }
  CMatrix out(rows, cols);
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    out.set_block(0, c0, b);
    c0 += b.cols();
  }
  return out;
}

CMatrix block_diag(std::span<const CMatrix> blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMatrix out(rows, cols);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    out.set_block(r0, c0, b);
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

CMatrix partial_trace_blocks(const CMatrix& m, std::size_t n, std::size_t d) {
  if (m.rows() != n * d || m.cols() != n * d) {
    throw InvalidArgument("partial_trace_blocks: matrix is not (n*d) x (n*d)");
  }
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t r = 0; r < d; ++r) s += m(i * d + r, j * d + r);
      out(i, j) = s;
    }
  }
  return out;
}

CMatrix block_scalar_mul(const CMatrix& r, const CMatrix& m) {
  const std::size_t d = r.rows();
  if (!r.is_square() || d == 0 || m.rows() % d != 0) {
    throw InvalidArgument("block_scalar_mul: block size does not divide the matrix");
  }
  const std::size_t n = m.rows() / d;
  CMatrix out(m.rows(), m.cols());
  for (std::size_t bi = 0; bi < n; ++bi) {
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        const Complex rab = r(a, b);
        if (rab == Complex(0.0)) continue;
        for (std::size_t col = 0; col < m.cols(); ++col) {
          out(bi * d + a, col) += rab * m(bi * d + b, col);
        }
      }
    }
  }
  return out;
}

CMatrix reshape(std::span<const Complex> v, std::size_t rows, std::size_t cols) {
  return CMatrix(rows, cols, std::vector<Complex>(v.begin(), v.end()));
}

}  // namespace repstab
