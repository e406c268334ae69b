#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "repstab/cmatrix.hpp"
#include "repstab/irreps.hpp"
#include "repstab/matrix_fn.hpp"

namespace repstab {

/// tau(c) = max{(c/2)^{1/2}, (c/(2-c))^2} for 0 < c <= 1.
double tau(double c);

/// The index set {i : a_i >= c/2}. Requires sum w_i a_i = n (within 1e-6)
/// and sum w_i a_i^2 >= c n; throws PreconditionError otherwise.
std::vector<std::size_t> threshold_select(const std::vector<double>& values,
                                          const std::vector<std::size_t>& weights,
                                          std::size_t n, double c);

/// One selected singular value of \hat f(rho).
struct Candidate {
  std::size_t irrep = 0;  // index into the irrep table
  std::size_t dim = 0;    // n_rho
  double lambda = 0.0;
  /// n x n_rho, with ||U||_HS^2 = ||V||_HS^2 = n_rho and
  /// E_x f(x) U rho(x)^* = lambda V.
  CMatrix u;
  CMatrix v;
};

struct SpectralSelection {
  IrrepTablePtr table;
  double c = 0.0;
  double cutoff = 0.0;  // (c/2)^{1/2}
  std::vector<Candidate> entries;
  /// Indices of `entries` grouped by irrep, in table order.
  std::vector<std::vector<std::size_t>> classes;

  /// sum_i n_{rho_i}; the dimension of the assembled representation.
  std::size_t total_dim() const;
  /// sum_i n_{rho_i} lambda_i.
  double weighted_sum() const;
  /// sum_i n_{rho_i} lambda_i^2.
  double weighted_square_sum() const;
};

/// Collects every singular value of every \hat f(rho) that is at least
/// (c/2)^{1/2}. Requires max_x ||f(x)||_op <= 1 and ||f||_{U^2}^4 >= c n
/// (throws PreconditionError with the measured value otherwise).
SpectralSelection extract_candidates(const MatrixFn& f, IrrepTablePtr table, double c);

/// x -> V P(x) U^*, with U, V partial unitary n x m and P a representation
/// of dimension m.
struct PartialAffineRep {
  std::size_t n = 0;
  std::size_t m = 0;
  CMatrix u;
  CMatrix v;
  MatrixFn p;
  /// Irrep table indices of the diagonal blocks of P, when known.
  std::vector<std::size_t> blocks;

  CMatrix operator()(Element x) const { return mul_adjoint(v * p(x), u); }
  MatrixFn as_fn() const;
};

struct Assembly {
  CMatrix u0;
  CMatrix v0;
  MatrixFn p;
  std::vector<double> lambda;  // diagonal of Lambda
  std::vector<std::size_t> blocks;
};

/// U0 = (U_1|...|U_m), V0 = (V_1|...|V_m), P = rho_1 (+) ... (+) rho_m,
/// Lambda = (+) lambda_i I.
Assembly assemble(const SpectralSelection& sel);

/// E_x <f(x), V P(x) U^*>.
Complex affine_correlation(const MatrixFn& f, const CMatrix& u, const CMatrix& v, const MatrixFn& p);
Complex affine_correlation(const MatrixFn& f, const PartialAffineRep& rep);

/// max over `trials` seeded random W (half of them rank one) of
/// E_x ||W P(x) U^*||_nuc / ||W||_nuc.
double nuclear_contraction_check(const CMatrix& u, const MatrixFn& p, std::size_t trials,
                                 std::uint64_t seed = 0);

struct RoundingResult {
  PartialAffineRep rep;
  double initial_correlation = 0.0;   // |E <f, V0 P U0^*>|
  double v_step_correlation = 0.0;    // after replacing V0
  double correlation = 0.0;           // after replacing U0 as well
};

/// V' = polar(E_x f(x) U0 P(x)^*), then U' = polar(E_x f(x)^* V' P(x)).
/// When theta > 0, requires |E <f, V0 P U0^*>| >= theta m.
RoundingResult round_to_partial_unitaries(const MatrixFn& f, const CMatrix& u0, const CMatrix& v0,
                                          const MatrixFn& p, double theta = 0.0);

struct InverseResult {
  SpectralSelection selection;
  PartialAffineRep rep;
  double u2_norm4 = 0.0;
  double c = 0.0;
  double assembled_correlation = 0.0;  // sum n_rho lambda
  double correlation = 0.0;
  double bound = 0.0;                  // tau(c)^4 m
  double window_lo = 0.0;              // c n / (2 - c)
  double window_hi = 0.0;              // (2 - c) n / c
  bool m_in_window = false;
  bool correlation_ok = false;
};

/// The full inverse-theorem pipeline for ||f(x)||_op <= 1 and
/// ||f||_{U^2}^4 >= c n.
InverseResult inverse_theorem(const MatrixFn& f, IrrepTablePtr table, double c);

/// c = ||f||_{U^2}^4 / n - 1e-9, clamped into (0, 1].
double auto_c(const MatrixFn& f, const IrrepTable& table);

struct ConverseResult {
  double correlation = 0.0;
  double u2_norm4 = 0.0;
  double bound = 0.0;  // c^4 m
  bool precondition = false;
  bool passed = false;
};

/// Checks ||f||_{U^2}^4 >= c^4 m - 1e-6 given |E <f, V P U^*>| >= c m.
/// Uses the Fourier route when a table is supplied, the direct sum
/// otherwise.
ConverseResult converse_check(const MatrixFn& f, const PartialAffineRep& rep, double c,
                              const IrrepTable* table = nullptr);

}  // namespace repstab
