#pragma once

#include <cstddef>
#include <vector>

#include "repstab/cmatrix.hpp"

namespace repstab {

/// Thin singular value decomposition A = left * diag(singulars) * right^*.
///
/// For an r x c input with k = min(r, c): `left` is r x k and `right` is
/// c x k, both with orthonormal columns (columns belonging to zero singular
/// values are completed to an orthonormal set). `singulars` is descending.
/// The first non-negligible entry of each left singular vector is real and
/// non-negative.
struct SVDResult {
  CMatrix left;
  std::vector<double> singulars;
  CMatrix right;
};

/// One-sided Jacobi SVD with a deterministic cyclic sweep order.
/// Throws ConvergenceError after 100 * max(rows, cols) sweeps.
SVDResult svd(const CMatrix& a);
std::vector<double> singular_values(const CMatrix& a);

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
struct HermEig {
  std::vector<double> values;
  CMatrix vectors;
};

/// Cyclic Jacobi eigensolver. Throws InvalidArgument when `h` is not
/// Hermitian within 1e-10 (relative to its Frobenius norm).
HermEig herm_eig(const CMatrix& h);

/// Schatten p-norm (sum lambda_i^p)^(1/p) for p in [1, inf]. When
/// `normalized` is set the result is divided by rows^(1/p).
double schatten_norm(const CMatrix& a, double p, bool normalized = false);
/// The normalized Schatten norm ||A||'_p.
inline double normalized_norm(const CMatrix& a, double p) { return schatten_norm(a, p, true); }
double op_norm(const CMatrix& a);
double nuclear_norm(const CMatrix& a);
/// ||A||_box^4 = tr(A A^* A A^*) = sum lambda_i^4.
double box_norm4(const CMatrix& a);

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// |tr(A B^*)| and ||A||_op * ||B||_nuc.
InequalitySides nuclear_op_duality_check(const CMatrix& a, const CMatrix& b);

/// Replaces every one of the min(rows, cols) singular values by 1. The
/// result W is the partial unitary maximizing Re tr(A W^*), with value
/// ||A||_nuc.
CMatrix polar_partial_unitary(const CMatrix& a);

/// True iff every one of the min(rows, cols) singular values is within tol
/// of 1.
bool is_partial_unitary(const CMatrix& a, double tol);

/// Splits A = clipped + excess by clipping singular values at s = C/2.
struct SoftThresholdSplit {
  CMatrix clipped;
  CMatrix excess;
  double threshold = 0.0;
  /// C^{-1} ||clipped||_op + C m^{-1} ||excess||_nuc.
  double bound = 0.0;
};

/// Constructive splitting of a matrix with ||A||_HS^2 <= m into an
/// operator-norm-small part and a nuclear-norm-small part whose weighted sum
/// is at most 1. Throws PreconditionError when ||A||_HS^2 > m.
SoftThresholdSplit soft_threshold_split(const CMatrix& a, double c, std::size_t m);

/// Extends an n x m matrix with orthonormal columns (m <= n) to an n x n
/// unitary whose first m columns are the input.
CMatrix complete_to_unitary(const CMatrix& q);

/// exp(i * s * H) for Hermitian H, computed through the eigendecomposition so
/// the result is unitary to working precision.
CMatrix expm_i_hermitian(const CMatrix& h, double s);

/// max |(A^*A - I)_{ij}| or max |(AA^* - I)_{ij}|, whichever side is square
/// identity for a partial unitary of that shape.
double partial_unitary_residual(const CMatrix& a);

}  // namespace repstab
