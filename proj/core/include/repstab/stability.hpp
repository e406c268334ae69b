#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "repstab/cmatrix.hpp"
#include "repstab/inverse.hpp"
#include "repstab/irreps.hpp"
#include "repstab/linalg.hpp"
#include "repstab/matrix_fn.hpp"

namespace repstab {

enum class Flavor { kMultiplicative, kAffine };

const char* to_string(Flavor flavor);

/// Entrywise tolerance for "unitary-valued".
inline constexpr double kUnitaryTolerance = 1e-8;

/// C_p = (2^{5-p} + 2^{2-p})^{1/p}.
double c_p(double p);
/// 1 + 3 * 2^{3/p - 1} + 2 C_p. Also D_p of the multiplicative bound.
double affine_constant(double p);
/// 1 + 2 D_p + 8^{1/p}.
double multiplicative_constant(double p);

/// Throws InvalidArgument for p < 1 and PreconditionError for p > 2, where
/// only eps^{2/p}-type bounds are available and stabilization is refused.
void require_stability_exponent(double p);

/// Exact maximum of ||f(x)f(y) - f(xy)||'_p over all pairs (multiplicative)
/// or of ||f(x)f(y)^* f(z)f(w)^* - I||'_p over all quadruples with
/// x y^{-1} z w^{-1} = e (affine). Requires unitary values, or op norm at
/// most 1 when `relaxed` is set.
double defect(const MatrixFn& f, Flavor flavor, double p, bool relaxed = false);

/// A function together with its measured defect.
struct ApproxRep {
  MatrixFn f;
  Flavor flavor = Flavor::kMultiplicative;
  double p = 2.0;
  double epsilon = 0.0;
  bool relaxed = false;

  static ApproxRep measure(MatrixFn f, Flavor flavor, double p, bool relaxed = false);
};

/// Re tr'(A) and 1 - 2^{1-p} (||A - I||'_p)^p for unitary A.
InequalitySides distance_from_identity_bound(const CMatrix& a, double p);

struct AverageResult {
  InverseResult inverse;
  /// x -> W V P(x) U^*, with W the polar unitary of E_x f(x) U P(x)^* V^*.
  PartialAffineRep rep;
  CMatrix w;
  double epsilon = 0.0;
  double c = 0.0;
  double residual = 0.0;  // ||E_x f(x) rep(x)^* - I||'_p
  double bound = 0.0;     // C_p eps
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool m_in_window = false;
};

/// Averaging step for an affine eps-representation with 2^{1-p} eps^p < 1/4.
/// `epsilon` is the measured affine defect; it is computed when absent.
AverageResult average_stability(const MatrixFn& f, IrrepTablePtr table, double p,
                                 std::optional<double> epsilon = std::nullopt);

struct AlignResult {
  CMatrix w;              // polar unitary of f(e)^* sigma(e)
  PartialAffineRep rep;   // x -> sigma(x) W^*
  double epsilon = 0.0;
  double eta = 0.0;       // ||I - E_x f(x) sigma(x)^*||'_p
  double delta = 0.0;     // (|m - n| / n)^{1/p}
  double gamma = 0.0;
  std::vector<double> distances;
  double max_distance = 0.0;
};

/// Rotates sigma so that it approximates f pointwise. `epsilon` is the
/// affine defect of f; when `eta_limit` is set, throws PreconditionError if
/// the measured eta exceeds it.
AlignResult align(const MatrixFn& f, const PartialAffineRep& sigma, double p, double epsilon,
                  std::optional<double> eta_limit = std::nullopt);

/// One asserted inequality: measured <= bound.
struct BoundCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool passed = false;
};

BoundCheck make_check(std::string name, double measured, double bound, double slack = 1e-9);

struct StabilityReport {
  Flavor flavor = Flavor::kMultiplicative;
  double p = 2.0;
  double epsilon = 0.0;         // defect of the input in the report's flavor
  double affine_epsilon = 0.0;  // affine defect used for the averaging step
  std::size_t n = 0;
  std::size_t m = 0;
  PartialAffineRep rep;         // U = V for multiplicative reports
  std::vector<double> per_element;
  double max_distance = 0.0;
  double bound_constant = 0.0;
  double bound = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool window_applicable = true;
  bool m_in_window = false;
  bool preconditions_met = true;
  bool relaxed = false;
  double c = 0.0;
  double c_p = 0.0;
  double residual = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  std::vector<BoundCheck> checks;
  std::vector<std::string> notes;
  bool passed = false;
};

struct StabilizeOptions {
  /// Accept op-norm <= 1 values; unitarize before stabilizing.
  bool relaxed = false;
  /// Run even when the defect exceeds the theorem's range. Bounds are still
  /// evaluated, the window is marked not applicable and c falls back to the
  /// measured U^2 norm.
  bool force = false;
};

/// Affine eps-representation with eps <= 1/4 -> partial affine
/// representation within affine_constant(p) * eps.
StabilityReport stabilize_affine(const MatrixFn& f, IrrepTablePtr table, double p,
                                 const StabilizeOptions& options = {});

/// Multiplicative eps-representation with eps <= 1/16 -> partial
/// representation within multiplicative_constant(p) * eps.
StabilityReport stabilize(const MatrixFn& f, IrrepTablePtr table, double p,
                          const StabilizeOptions& options = {});

struct PartialRepResult {
  PartialAffineRep rep;       // x -> V P(x) V^*
  double max_distance = 0.0;  // max_x ||rep(x) - sigma(x) sigma(e)^*||'_p
  double bound = 0.0;         // 0 if m <= n, ((m - n)/n)^{1/p} otherwise
};

PartialRepResult affine_to_multiplicative(const PartialAffineRep& sigma, double p);

struct EmbedResult {
  MatrixFn fn;                // dimension max(n, m)
  double max_distance = 0.0;  // to rho (m <= n) or to rho (+) I_{m-n} (m > n)
  double bound = 0.0;
  bool multiplicative = false;
};

/// Completes a partial (affine) representation to a genuine affine
/// representation of dimension max(n, m); multiplicative when U = V.
EmbedResult embed_same_dimension(const PartialAffineRep& rho, double p);

struct UnitarizeResult {
  MatrixFn g;
  double epsilon = 0.0;         // multiplicative defect of f
  std::vector<double> distances;
  double max_distance = 0.0;
  double distance_bound = 0.0;  // 2 eps
  double g_defect = 0.0;
  double g_defect_bound = 0.0;  // eps + 3 (2 eps)
};

/// g(x) = polar(f(x)) for f with f(e) unitary and op norm at most 1.
UnitarizeResult unitarize(const MatrixFn& f, double p);

/// lambda_k(A) >= lambda_k(B) - 1e-10 for all k, given A - B positive
/// semidefinite (PreconditionError otherwise).
bool weyl_monotonicity_check(const CMatrix& a, const CMatrix& b);

/// ||A - polar(A)||'_p and ||AB - I||'_p for op norms at most 1.
InequalitySides lidskii_nearest_check(const CMatrix& a, const CMatrix& b, double p);

/// ||V U^* - W||'_p with W = polar(V U^*), and (|m - n| / n)^{1/p}.
InequalitySides almost_unitary_check(const CMatrix& u, const CMatrix& v, double p);

/// ||B A C^*||_p and ||A||_p ||B||_op ||C||_op.
InequalitySides small_op_product_check(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                                       double p);

/// max over quadruples of ||rho(x) rho(y)^* rho(z) - rho(w)||'_p, and
/// eta = 0 (m <= n) or 2 ((m - n)/n)^{1/p} (m > n).
InequalitySides flexible_partial_rep_check(const PartialAffineRep& rho, double p);

}  // namespace repstab
