#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "repstab/cmatrix.hpp"
#include "repstab/group.hpp"
#include "repstab/matrix_fn.hpp"

namespace repstab {

/// An irreducible unitary representation: one dim x dim unitary per element.
struct Irrep {
  std::size_t dim = 0;
  std::vector<CMatrix> matrices;
  std::vector<Complex> character;

  const CMatrix& operator()(Element x) const { return matrices[x]; }
  MatrixFn as_fn(GroupPtr group) const { return MatrixFn(std::move(group), dim, matrices); }
};

/// Residuals recorded when a table is built.
struct IrrepCertificate {
  /// max_x |sum_rho n_rho chi_rho(x) - |G| delta_{x=e}|.
  double schur_delta = 0.0;
  /// max |<chi_a, chi_b> - delta_ab| over pairs of irreps.
  double character_orthogonality = 0.0;
  /// max over irreps and pairs x, y of max-abs(rho(x) rho(y) - rho(xy)).
  double homomorphism = 0.0;
  double unitarity = 0.0;
  /// max_rho |rho(e) - I|.
  double identity = 0.0;
};

/// A complete list of pairwise-inequivalent irreps of a group, sorted by
/// dimension with the trivial representation first.
struct IrrepTable {
  GroupPtr group;
  std::vector<Irrep> irreps;
  IrrepCertificate certificate;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return irreps.size(); }
  const Irrep& operator[](std::size_t i) const { return irreps[i]; }
  /// sum_rho n_rho^2.
  std::size_t dimension_square_sum() const;
};

using IrrepTablePtr = std::shared_ptr<const IrrepTable>;

/// Left regular representation: R(x) e_g = e_{xg}.
MatrixFn regular_representation(GroupPtr group);

/// Splits the regular representation by averaging a seeded random
/// Hermitian matrix into its commutant and recursing on eigenspaces.
/// Deterministic for a fixed seed. Throws ConvergenceError if a reducible
/// block cannot be split after 5 reseeds.
IrrepTablePtr decompose_irreps(GroupPtr group, std::uint64_t seed = 0);

/// E_x chi_a(x) conj(chi_b(x)).
Complex character_inner(std::span<const Complex> a, std::span<const Complex> b);

double verify_schur_delta(const FiniteGroup& group, std::span<const Irrep> irreps);

/// E_x rho_p(x)_{kj} conj(rho_q(x)_{sr}).
Complex matrix_element_average(const Irrep& p, std::size_t k, std::size_t j, const Irrep& q,
                               std::size_t s, std::size_t r);

/// Maximum deviation of every matrix-element average from
/// delta_pq delta_ks delta_jr / n_p, over all irreps of dimension <= 4.
double matrix_element_orthogonality_check(const IrrepTable& table);

}  // namespace repstab
