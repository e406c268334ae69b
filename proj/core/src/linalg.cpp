#include "repstab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "repstab/error.hpp"

namespace repstab {

namespace {

constexpr double kJacobiTol = 1e-13;
constexpr double kPhaseTol = 1e-10;
constexpr double kZeroColumn = 1e-15;

double column_norm2(const CMatrix& a, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
  return s;
}

// Applies the plane rotation [c, s e^{i phi}; -s e^{-i phi}, c] to columns
// (i, j) of m.
void rotate_columns(CMatrix& m, std::size_t i, std::size_t j, double c, double s, Complex ph) {
  const Complex sp = s * ph;
  const Complex sm = s * std::conj(ph);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Complex a = m(k, i);
    const Complex b = m(k, j);
    m(k, i) = c * a - sm * b;
    m(k, j) = sp * a + c * b;
  }
}

// Makes the first non-negligible entry of column k of `lead` real and
// non-negative, applying the same phase to column k of `follow`.
void fix_phase(CMatrix& lead, CMatrix* follow, std::size_t k) {
  for (std::size_t i = 0; i < lead.rows(); ++i) {
    const double mag = std::abs(lead(i, k));
    if (mag > kPhaseTol) {
      const Complex ph = std::conj(lead(i, k)) / mag;
      for (std::size_t r = 0; r < lead.rows(); ++r) lead(r, k) *= ph;
      if (follow != nullptr) {
        for (std::size_t r = 0; r < follow->rows(); ++r) (*follow)(r, k) *= ph;
      }
      lead(i, k) = mag;
      return;
    }
  }
}

// Orthonormalizes column k of q against columns [0, k) (two passes of
// modified Gram-Schmidt). Returns the norm before the final normalization.
double orthonormalize_column(CMatrix& q, std::size_t k) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex dot = 0.0;
      for (std::size_t r = 0; r < q.rows(); ++r) dot += std::conj(q(r, j)) * q(r, k);
      for (std::size_t r = 0; r < q.rows(); ++r) q(r, k) -= dot * q(r, j);
    }
  }
  const double nrm = std::sqrt(column_norm2(q, k));
  if (nrm > 0.0) {
    for (std::size_t r = 0; r < q.rows(); ++r) q(r, k) /= nrm;
  }
  return nrm;
}

// Replaces column k by the standard basis vector with the largest component
// orthogonal to columns [0, k).
void complete_column(CMatrix& q, std::size_t k) {
  std::size_t best = 0;
  double best_res = -1.0;
  for (std::size_t e = 0; e < q.rows(); ++e) {
    double proj = 0.0;
    for (std::size_t j = 0; j < k; ++j) proj += std::norm(q(e, j));
    const double res = 1.0 - proj;
    if (res > best_res + 1e-12) {
      best_res = res;
      best = e;
    }
  }
  for (std::size_t r = 0; r < q.rows(); ++r) q(r, k) = (r == best) ? 1.0 : 0.0;
  orthonormalize_column(q, k);
}

// One-sided Jacobi on a tall (rows >= cols) matrix. On return `work` holds
// A V with mutually orthogonal columns and `v` the accumulated rotations.
void hestenes(CMatrix& work, CMatrix* v) {
  const std::size_t n = work.cols();
  const std::size_t cap = 100 * std::max(work.rows(), work.cols());
  std::vector<double> norms(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    norms[j] = column_norm2(work, j);
    total += norms[j];
  }
  // Columns at rounding level of the whole matrix count as zero.
  const double floor = kZeroColumn * kZeroColumn * total;
  for (std::size_t sweep = 0; sweep < cap; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = norms[i];
        const double beta = norms[j];
        if (alpha <= floor || beta <= floor) continue;
        Complex gamma = 0.0;
        for (std::size_t r = 0; r < work.rows(); ++r) gamma += std::conj(work(r, i)) * work(r, j);
        const double g = std::abs(gamma);
        if (g <= kJacobiTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex ph = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate_columns(work, i, j, c, s, ph);
        if (v != nullptr) rotate_columns(*v, i, j, c, s, ph);
        norms[i] = column_norm2(work, i);
        norms[j] = column_norm2(work, j);
      }
    }
    if (!rotated) return;
  }
  throw ConvergenceError("svd: one-sided Jacobi did not converge within " + std::to_string(cap) +
                         " sweeps");
}

SVDResult svd_tall(const CMatrix& a) {
  const std::size_t n = a.cols();
  CMatrix work = a;
  CMatrix v = CMatrix::identity(n);
  hestenes(work, &v);

  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = std::sqrt(column_norm2(work, j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  SVDResult out{CMatrix(a.rows(), n), std::vector<double>(n), CMatrix(n, n)};
  const double smax = n > 0 ? sig[order[0]] : 0.0;
  const double zero_tol = smax * 1e-14 * static_cast<double>(std::max<std::size_t>(a.rows(), 1));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.singulars[k] = sig[src];
    for (std::size_t r = 0; r < n; ++r) out.right(r, k) = v(r, src);
    if (sig[src] > zero_tol && sig[src] > 0.0) {
      for (std::size_t r = 0; r < a.rows(); ++r) out.left(r, k) = work(r, src) / sig[src];
      if (orthonormalize_column(out.left, k) < 0.5) complete_column(out.left, k);
    } else {
      complete_column(out.left, k);
    }
  }
  return out;
}

}  // namespace

SVDResult svd(const CMatrix& a) {
  if (!a.all_finite()) throw InvalidArgument("svd: matrix has non-finite entries");
  SVDResult out;
  if (a.rows() >= a.cols()) {
    out = svd_tall(a);
  } else {
    SVDResult t = svd_tall(a.adjoint());
    out.left = std::move(t.right);
    out.right = std::move(t.left);
    out.singulars = std::move(t.singulars);
  }
  for (std::size_t k = 0; k < out.singulars.size(); ++k) fix_phase(out.left, &out.right, k);
  return out;
}

std::vector<double> singular_values(const CMatrix& a) {
  if (!a.all_finite()) throw InvalidArgument("singular_values: matrix has non-finite entries");
  CMatrix work = a.rows() >= a.cols() ? a : a.adjoint();
  hestenes(work, nullptr);
  std::vector<double> sig(work.cols());
  for (std::size_t j = 0; j < work.cols(); ++j) sig[j] = std::sqrt(column_norm2(work, j));
  std::sort(sig.begin(), sig.end(), std::greater<>());
  return sig;
}

HermEig herm_eig(const CMatrix& h) {
  if (!h.is_square()) throw InvalidArgument("herm_eig: matrix is not square");
  if (!h.all_finite()) throw InvalidArgument("herm_eig: matrix has non-finite entries");
  const std::size_t n = h.rows();
  const double fro = hs_norm(h);
  const double asym = hs_norm(h - h.adjoint());
  if (asym > 1e-10 * std::max(fro, 1e-300) && asym > 0.0) {
    throw InvalidArgument("herm_eig: matrix is not Hermitian (||H - H*||_HS = " +
                          std::to_string(asym) + ")");
  }
  CMatrix a = (h + h.adjoint()) * Complex(0.5);
  CMatrix v = CMatrix::identity(n);

  const std::size_t cap = 100 * std::max<std::size_t>(n, 1);
  bool converged = false;
  for (std::size_t sweep = 0; sweep < cap && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += std::norm(a(i, j));
    }
    if (std::sqrt(off) <= kJacobiTol * 1e-1 * fro || off == 0.0) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double g = std::abs(b);
        if (g == 0.0 || g <= 1e-18 * fro) continue;
        const Complex ph = b / g;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate_columns(a, p, q, c, s, ph);
        // Rows: A <- G^* A.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex x = a(p, k);
          const Complex y = a(q, k);
          a(p, k) = c * x - s * ph * y;
          a(q, k) = s * std::conj(ph) * x + c * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, c, s, ph);
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("herm_eig: Jacobi did not converge within " + std::to_string(cap) +
                           " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermEig out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    fix_phase(out.vectors, nullptr, k);
  }
  return out;
}

double schatten_norm(const CMatrix& a, double p, bool normalized) {
  if (!(p >= 1.0)) throw InvalidArgument("schatten_norm: p must be >= 1, got " + std::to_string(p));
  const std::vector<double> sig = singular_values(a);
  if (std::isinf(p)) return sig.empty() ? 0.0 : sig.front();
  double s = 0.0;
  if (p == 2.0) {
    s = std::pow(hs_norm(a), 2.0);
  } else {
    for (double x : sig) s += std::pow(x, p);
  }
  if (normalized) {
    if (a.rows() == 0) throw InvalidArgument("schatten_norm: normalized norm of an empty matrix");
    s /= static_cast<double>(a.rows());
  }
  return std::pow(s, 1.0 / p);
}

double op_norm(const CMatrix& a) { return schatten_norm(a, kInfinity); }

double nuclear_norm(const CMatrix& a) {
  const std::vector<double> sig = singular_values(a);
  return std::accumulate(sig.begin(), sig.end(), 0.0);
}

double box_norm4(const CMatrix& a) {
  const double h = hs_norm(mul_adjoint(a, a));
  return h * h;
}

InequalitySides nuclear_op_duality_check(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("nuclear_op_duality_check: shape mismatch");
  }
  return {std::abs(inner(a, b)), op_norm(a) * nuclear_norm(b)};
}

CMatrix polar_partial_unitary(const CMatrix& a) {
  const SVDResult s = svd(a);
  return mul_adjoint(s.left, s.right);
}

bool is_partial_unitary(const CMatrix& a, double tol) {
  const std::vector<double> sig = singular_values(a);
  return std::all_of(sig.begin(), sig.end(), [tol](double x) { return std::abs(x - 1.0) <= tol; });
}

SoftThresholdSplit soft_threshold_split(const CMatrix& a, double c, std::size_t m) {
  if (!(c > 0.0)) throw InvalidArgument("soft_threshold_split: C must be positive");
  if (m == 0) throw InvalidArgument("soft_threshold_split: m must be positive");
  const double hs2 = std::pow(hs_norm(a), 2.0);
  const double md = static_cast<double>(m);
  if (hs2 > md * (1.0 + 1e-12)) {
    throw PreconditionError("soft_threshold_split: ||A||_HS^2 exceeds m", hs2, md);
  }
  const double thr = c / 2.0;
  const SVDResult s = svd(a);
  const std::size_t k = s.singulars.size();
  std::vector<double> lo(k), hi(k);
  double op_clip = 0.0;
  double nuc_excess = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    lo[i] = std::min(s.singulars[i], thr);
    hi[i] = std::max(s.singulars[i] - thr, 0.0);
    op_clip = std::max(op_clip, lo[i]);
    nuc_excess += hi[i];
  }
  SoftThresholdSplit out;
  out.clipped = mul_adjoint(s.left * CMatrix::diagonal(std::span<const double>(lo)), s.right);
  out.excess = mul_adjoint(s.left * CMatrix::diagonal(std::span<const double>(hi)), s.right);
  out.threshold = thr;
  out.bound = op_clip / c + c * nuc_excess / md;
  return out;
}

CMatrix complete_to_unitary(const CMatrix& q) {
  const std::size_t n = q.rows();
  const std::size_t m = q.cols();
  if (m > n) throw InvalidArgument("complete_to_unitary: more columns than rows");
  CMatrix out(n, n);
  out.set_block(0, 0, q);
  for (std::size_t k = m; k < n; ++k) complete_column(out, k);
  return out;
}

CMatrix expm_i_hermitian(const CMatrix& h, double s) {
  const HermEig e = herm_eig(h);
  std::vector<Complex> d(e.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::polar(1.0, s * e.values[i]);
  return mul_adjoint(e.vectors * CMatrix::diagonal(std::span<const Complex>(d)), e.vectors);
}

double partial_unitary_residual(const CMatrix& a) {
  if (a.rows() >= a.cols()) return max_abs_diff(adjoint_mul(a, a), CMatrix::identity(a.cols()));
  return max_abs_diff(mul_adjoint(a, a), CMatrix::identity(a.rows()));
}

}  // namespace repstab
