#include "repstab/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repstab/error.hpp"
#include "repstab/linalg.hpp"

namespace repstab {

namespace {

void require_representation(const MatrixFn& f, const char* what) {
  const double u = f.max_unitarity_residual();
  if (u > kUnitaryTolerance) {
    throw PreconditionError(std::string(what) + ": values are not unitary", u, kUnitaryTolerance);
  }
  const double h = max_homomorphism_residual(f);
  if (h > 1e-8) {
    throw PreconditionError(std::string(what) + ": input is not a representation", h, 1e-8);
  }
}

CMatrix range_basis(const CMatrix& a) {
  const SVDResult s = svd(a);
  std::size_t r = 0;
  while (r < s.singulars.size() && s.singulars[r] > 0.5) ++r;
  return s.left.columns(0, r);
}

double max_intertwining_residual(const MatrixFn& rho, const MatrixFn& sigma, const CMatrix& t) {
  double m = 0.0;
  for (Element x = 0; x < static_cast<Element>(rho.size()); ++x) {
    m = std::max(m, max_abs_diff(rho(x) * t, t * sigma(x)));
  }
  return m;
}

}  // namespace

CMatrix intertwiner(const MatrixFn& rho, const MatrixFn& sigma) {
  require_compatible(rho, sigma, "intertwiner");
  require_representation(rho, "intertwiner");
  require_representation(sigma, "intertwiner");
  CMatrix t(rho.n(), rho.n());
  for (Element x = 0; x < static_cast<Element>(rho.size()); ++x) t += mul_adjoint(rho(x), sigma(x));
  t *= Complex(1.0 / static_cast<double>(rho.size()), 0.0);
  return t;
}

UniquenessResult eps_unitary_intertwiner(const MatrixFn& rho, const MatrixFn& sigma, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("eps_unitary_intertwiner: p must be at least 1");
  UniquenessResult r;
  r.p = p;
  r.n = rho.n();
  r.t = intertwiner(rho, sigma);
  for (Element x = 0; x < static_cast<Element>(rho.size()); ++x) {
    r.epsilon = std::max(r.epsilon, normalized_norm(rho(x) - sigma(x), p));
  }
  if (r.epsilon >= 0.5) {
    throw PreconditionError("eps_unitary_intertwiner: eps >= 1/2 leaves nothing to certify",
                            r.epsilon, 0.5);
  }

  const SVDResult s = svd(r.t);
  r.singulars = s.singulars;
  const std::size_t n = r.n;
  const double top = s.singulars.empty() ? 0.0 : s.singulars.front();
  const double merge = kClusterTolerance * std::max(top, 1e-300);

  CMatrix tp(n, n);
  r.min_cluster_gap = kInfinity;
  std::size_t i = 0;
  while (i < n && s.singulars[i] >= kZeroSingular) {
    std::size_t j = i + 1;
    while (j < n && s.singulars[j] >= kZeroSingular && s.singulars[j - 1] - s.singulars[j] <= merge) {
      ++j;
    }
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) sum += s.singulars[k];
    const double lambda = sum / static_cast<double>(j - i);
    r.clusters.push_back({lambda, j - i});
    for (std::size_t k = i; k < j; ++k) {
      const CMatrix uk = s.right.columns(k, 1);
      tp += mul_adjoint(r.t * uk, uk) * Complex(1.0 / s.singulars[k], 0.0);
    }
    if (j < n && s.singulars[j] >= kZeroSingular) {
      r.min_cluster_gap = std::min(r.min_cluster_gap, s.singulars[j - 1] - s.singulars[j]);
    }
    i = j;
  }
  r.zero_count = n - i;
  r.well_separated = r.min_cluster_gap > 100.0 * merge;

  r.t_prime.t = tp;
  r.t_prime.rank = i;
  r.t_prime.epsilon = normalized_norm(mul_adjoint(tp, tp) - CMatrix::identity(n), p);
  for (double v : singular_values(tp)) {
    r.singular_deviation = std::max(r.singular_deviation, std::min(std::abs(v), std::abs(v - 1.0)));
  }
  const CMatrix id = CMatrix::identity(n);
  r.t_minus_i = normalized_norm(r.t - id, p);
  r.t_minus_t_prime = normalized_norm(r.t - tp, p);
  r.t_prime_minus_i = normalized_norm(tp - id, p);
  r.intertwining_residual = max_intertwining_residual(rho, sigma, tp);
  r.rank_bound = (1.0 - std::pow(2.0 * r.epsilon, p)) * static_cast<double>(n);
  r.character_distance = restricted_character_distance(rho, sigma, tp);

  const double e = r.epsilon;
  r.checks.push_back(make_check("singular values in {0,1}", r.singular_deviation, 1e-8, 0.0));
  r.checks.push_back(make_check("||T - I|| <= eps", r.t_minus_i, e));
  r.checks.push_back(make_check("||T - T'|| <= 2 eps", r.t_minus_t_prime, 2.0 * e));
  r.checks.push_back(make_check("||T'T'^* - I|| <= 2 eps", r.t_prime.epsilon, 2.0 * e));
  r.checks.push_back(make_check("intertwining residual", r.intertwining_residual, 1e-8, 0.0));
  r.checks.push_back(make_check("rank bound <= rank", r.rank_bound, static_cast<double>(i)));
  r.checks.push_back(make_check("restricted character distance", r.character_distance, 1e-6, 0.0));
  r.checks.push_back(make_check("||T' - I|| <= 3 eps", r.t_prime_minus_i, 3.0 * e));
  if (!r.well_separated) {
    r.notes.push_back("some singular value clusters are closer than 100x the merge tolerance");
  }
  const bool ok =
      std::all_of(r.checks.begin(), r.checks.end(), [](const BoundCheck& c) { return c.passed; });
  r.passed = ok;
  return r;
}

InvariantSubspace invariant_subspace_extract(const MatrixFn& rho, const CMatrix& t_prime) {
  if (t_prime.rows() != rho.n() || t_prime.cols() != rho.n()) {
    throw InvalidArgument("invariant_subspace_extract: T' has the wrong shape");
  }
  InvariantSubspace out;
  out.basis = range_basis(t_prime);
  const std::size_t n = rho.n();
  const CMatrix proj = mul_adjoint(out.basis, out.basis);
  const CMatrix comp = CMatrix::identity(n) - proj;
  for (Element x = 0; x < static_cast<Element>(rho.size()); ++x) {
    out.invariance_residual = std::max(out.invariance_residual, op_norm(comp * rho(x) * proj));
  }
  return out;
}

double restricted_character_distance(const MatrixFn& rho, const MatrixFn& sigma,
                                     const CMatrix& t_prime) {
  require_compatible(rho, sigma, "restricted_character_distance");
  const CMatrix bv = range_basis(t_prime);
  const CMatrix bu = range_basis(t_prime.adjoint());
  if (bv.cols() != bu.cols()) return kInfinity;
  double m = 0.0;
  for (Element x = 0; x < static_cast<Element>(rho.size()); ++x) {
    const Complex a = adjoint_mul(bv, rho(x) * bv).trace();
    const Complex b = adjoint_mul(bu, sigma(x) * bu).trace();
    m = std::max(m, std::abs(a - b));
  }
  return m;
}

}  // namespace repstab
