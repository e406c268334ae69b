#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "repstab/cmatrix.hpp"
#include "repstab/matrix_fn.hpp"
#include "repstab/stability.hpp"

namespace repstab {

/// Singular values below this are treated as zero.
inline constexpr double kZeroSingular = 1e-8;
/// Relative gap (to the largest singular value) that separates clusters.
inline constexpr double kClusterTolerance = 1e-8;

/// A matrix whose singular values are all 0 or 1.
struct EpsUnitary {
  CMatrix t;
  std::size_t rank = 0;
  /// ||T T^* - I||'_p.
  double epsilon = 0.0;
};

struct SingularCluster {
  double lambda = 0.0;  // mean of the cluster
  std::size_t size = 0;
};

/// T = E_x rho(x) sigma(x)^* for two representations of the same dimension.
CMatrix intertwiner(const MatrixFn& rho, const MatrixFn& sigma);

struct UniquenessResult {
  double p = 2.0;
  double epsilon = 0.0;  // max_x ||rho(x) - sigma(x)||'_p
  std::size_t n = 0;
  CMatrix t;
  EpsUnitary t_prime;
  std::vector<double> singulars;
  std::vector<SingularCluster> clusters;  // nonzero clusters, descending
  std::size_t zero_count = 0;
  double min_cluster_gap = 0.0;  // infinite with fewer than two clusters
  bool well_separated = true;
  double t_minus_i = 0.0;
  double t_minus_t_prime = 0.0;
  double t_prime_minus_i = 0.0;
  double intertwining_residual = 0.0;  // max_x max-abs(rho(x)T' - T'sigma(x))
  double singular_deviation = 0.0;     // max distance of a singular value of T' from {0, 1}
  double rank_bound = 0.0;             // (1 - (2 eps)^p) n
  double character_distance = 0.0;     // restricted characters on the common component
  std::vector<BoundCheck> checks;
  std::vector<std::string> notes;
  bool passed = false;
};

/// Builds T' from the singular value decomposition of T: singular values
/// below kZeroSingular are dropped and every other singular pair is rescaled
/// to 1, so T' is the partial isometry of T's polar decomposition. Clusters
/// are reported for diagnostics. Throws PreconditionError when eps >= 1/2.
UniquenessResult eps_unitary_intertwiner(const MatrixFn& rho, const MatrixFn& sigma, double p);

struct InvariantSubspace {
  CMatrix basis;  // n x r with orthonormal columns
  double invariance_residual = 0.0;  // max_x ||(I - Pi) rho(x) Pi||_op
};

/// Orthonormal basis of range(T') and its rho-invariance residual.
InvariantSubspace invariant_subspace_extract(const MatrixFn& rho, const CMatrix& t_prime);

/// max_x |tr rho|_{range T'}(x) - tr sigma|_{range T'^*}(x)|.
double restricted_character_distance(const MatrixFn& rho, const MatrixFn& sigma,
                                     const CMatrix& t_prime);

}  // namespace repstab
