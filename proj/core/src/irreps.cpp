#include "repstab/irreps.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <tuple>

#include "repstab/error.hpp"
#include "repstab/linalg.hpp"

namespace repstab {

namespace {

constexpr double kClusterTol = 1e-8;
constexpr double kIrreducibleTol = 1e-6;
constexpr int kMaxReseeds = 5;

using Matrices = std::vector<CMatrix>;

struct Cluster {
  std::size_t first;
  std::size_t count;
};

std::vector<Cluster> cluster_eigenvalues(const std::vector<double>& values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double tol = kClusterTol * std::max(scale, 1e-300);
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (out.empty() || values[i] - values[i - 1] > tol) {
      out.push_back({i, 1});
    } else {
      ++out.back().count;
    }
  }
  return out;
}

std::vector<Complex> trace_all(const Matrices& m) {
  std::vector<Complex> chi(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) chi[x] = m[x].trace();
  return chi;
}

double character_norm(std::span<const Complex> chi) {
  double s = 0.0;
  for (const auto& z : chi) s += std::norm(z);
  return s / static_cast<double>(chi.size());
}

double character_distance(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

CMatrix random_hermitian(std::size_t k, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix x(k, k);
  for (auto& z : x.entries()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return (x + x.adjoint()) * Complex(0.5);
}

Matrices restrict_to(const Matrices& rep, const CMatrix& q) {
  Matrices out;
  out.reserve(rep.size());
  for (const auto& m : rep) out.push_back(adjoint_mul(q, m * q));
  return out;
}

class Splitter {
 public:
  Splitter(const FiniteGroup& group, std::mt19937_64& rng) : group_(group), rng_(rng) {}

  // Splits a unitary representation into irreducible pieces and appends
  // the new classes to `found`.
  void split(const Matrices& rep, std::vector<Irrep>& found) {
    const std::size_t k = rep.front().rows();
    for (int attempt = 0; attempt <= kMaxReseeds; ++attempt) {
      const CMatrix h = random_hermitian(k, rng_);
      CMatrix avg(k, k);
      for (const auto& m : rep) avg += m * mul_adjoint(h, m);
      avg /= Complex(static_cast<double>(rep.size()));
      avg = (avg + avg.adjoint()) * Complex(0.5);
      const HermEig eig = herm_eig(avg);
      const auto clusters = cluster_eigenvalues(eig.values);
      if (clusters.size() < 2) continue;
      for (const auto& c : clusters) {
        const CMatrix q = eig.vectors.columns(c.first, c.count);
        accept(restrict_to(rep, q), found);
      }
      return;
    }
    throw ConvergenceError("decompose_irreps: could not split a reducible block of dimension " +
                           std::to_string(k) + " after " + std::to_string(kMaxReseeds) +
                           " reseeds");
  }

  void accept(Matrices sub, std::vector<Irrep>& found) {
    const auto chi = trace_all(sub);
    const double norm = character_norm(chi);
    if (std::abs(norm - 1.0) <= kIrreducibleTol) {
      if (!is_known(chi, found)) {
        found.push_back(Irrep{sub.front().rows(), std::move(sub), chi});
      }
    } else if (norm > 1.0) {
      split(sub, found);
    } else {
      throw ConvergenceError("decompose_irreps: eigenspace carries no subrepresentation (character norm " +
                             std::to_string(norm) + ")");
    }
  }

  bool is_known(std::span<const Complex> chi, const std::vector<Irrep>& found) const {
    const double tol = 1e-6 * static_cast<double>(group_.order());
    return std::any_of(found.begin(), found.end(), [&](const Irrep& r) {
      return r.dim * r.dim == static_cast<std::size_t>(std::lround(std::norm(chi[0]))) &&
             character_distance(chi, r.character) < tol;
    });
  }

 private:
  const FiniteGroup& group_;
  std::mt19937_64& rng_;
};

// Commutant average of a random Hermitian matrix under the left regular
// representation. The result is right convolution by phi, so it is formed
// in O(|G|^2) without materializing the representation.
CMatrix regular_commutant_sample(const FiniteGroup& g, std::mt19937_64& rng) {
  const std::size_t n = g.order();
  const auto order = static_cast<Element>(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> psi(n);
  for (Element h = 0; h < order; ++h) {
    const Element hinv = g.inverse(h);
    for (Element j = 0; j < order; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      psi[g.mul(hinv, j)] += Complex(re, im);
    }
  }
  std::vector<Complex> phi(n);
  for (Element k = 0; k < order; ++k) {
    phi[k] = (psi[k] + std::conj(psi[g.inverse(k)])) / (2.0 * static_cast<double>(n));
  }
  CMatrix out(n, n);
  for (Element a = 0; a < order; ++a) {
    const Element ainv = g.inverse(a);
    for (Element b = 0; b < order; ++b) out(a, b) = phi[g.mul(ainv, b)];
  }
  return out;
}

// Q^* R(x) Q for the regular representation R, using R(x) e_g = e_{xg}.
Matrices restrict_regular(const FiniteGroup& g, const CMatrix& q) {
  const std::size_t n = g.order();
  const std::size_t k = q.cols();
  Matrices out;
  out.reserve(n);
  for (Element x = 0; x < static_cast<Element>(n); ++x) {
    CMatrix m(k, k);
    for (Element e = 0; e < static_cast<Element>(n); ++e) {
      const Element xe = g.mul(x, e);
      for (std::size_t i = 0; i < k; ++i) {
        const Complex qi = std::conj(q(xe, i));
        if (qi == Complex(0.0)) continue;
        for (std::size_t j = 0; j < k; ++j) m(i, j) += qi * q(e, j);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Complex> regular_character(const FiniteGroup& g, const CMatrix& q) {
  const std::size_t n = g.order();
  std::vector<Complex> chi(n);
  for (Element x = 0; x < static_cast<Element>(n); ++x) {
    Complex s = 0.0;
    for (Element e = 0; e < static_cast<Element>(n); ++e) {
      const Element xe = g.mul(x, e);
      for (std::size_t i = 0; i < q.cols(); ++i) s += std::conj(q(xe, i)) * q(e, i);
    }
    chi[x] = s;
  }
  return chi;
}

std::size_t square_sum(const std::vector<Irrep>& irreps) {
  std::size_t s = 0;
  for (const auto& r : irreps) s += r.dim * r.dim;
  return s;
}

std::vector<Irrep> decompose_once(const FiniteGroup& g, std::mt19937_64& rng) {
  Splitter splitter(g, rng);
  std::vector<Irrep> found;
  const HermEig eig = herm_eig(regular_commutant_sample(g, rng));
  for (const auto& c : cluster_eigenvalues(eig.values)) {
    if (square_sum(found) == g.order()) break;
    const CMatrix q = eig.vectors.columns(c.first, c.count);
    const auto chi = regular_character(g, q);
    const double norm = character_norm(chi);
    if (std::abs(norm - 1.0) <= kIrreducibleTol && splitter.is_known(chi, found)) continue;
    splitter.accept(restrict_regular(g, q), found);
  }
  return found;
}

void polish(Irrep& r) {
  for (auto& m : r.matrices) m = polar_partial_unitary(m);
  r.character = trace_all(r.matrices);
}

bool is_trivial(const Irrep& r) {
  if (r.dim != 1) return false;
  return std::all_of(r.character.begin(), r.character.end(),
                     [](const Complex& z) { return std::abs(z - 1.0) < 1e-6; });
}

std::vector<std::int64_t> rounded_key(const Irrep& r) {
  std::vector<std::int64_t> key;
  key.reserve(2 * r.character.size());
  for (const auto& z : r.character) {
    key.push_back(std::llround(z.real() * 1e6));
    key.push_back(std::llround(z.imag() * 1e6));
  }
  return key;
}

IrrepCertificate certify(const FiniteGroup& g, const std::vector<Irrep>& irreps) {
  IrrepCertificate c;
  c.schur_delta = verify_schur_delta(g, irreps);
  for (std::size_t a = 0; a < irreps.size(); ++a) {
    for (std::size_t b = a; b < irreps.size(); ++b) {
      const Complex ip = character_inner(irreps[a].character, irreps[b].character);
      c.character_orthogonality =
          std::max(c.character_orthogonality, std::abs(ip - (a == b ? 1.0 : 0.0)));
    }
  }
  const auto order = static_cast<Element>(g.order());
  for (const auto& r : irreps) {
    c.identity = std::max(c.identity, max_abs_diff(r.matrices[0], CMatrix::identity(r.dim)));
    for (Element x = 0; x < order; ++x) {
      c.unitarity = std::max(c.unitarity, partial_unitary_residual(r.matrices[x]));
      for (Element y = 0; y < order; ++y) {
        c.homomorphism = std::max(
            c.homomorphism, max_abs_diff(r.matrices[x] * r.matrices[y], r.matrices[g.mul(x, y)]));
      }
    }
  }
  return c;
}

}  // namespace

std::size_t IrrepTable::dimension_square_sum() const { return square_sum(irreps); }

MatrixFn regular_representation(GroupPtr group) {
  const std::size_t n = group->order();
  std::vector<CMatrix> values;
  values.reserve(n);
  for (Element x = 0; x < static_cast<Element>(n); ++x) {
    CMatrix m(n, n);
    for (Element e = 0; e < static_cast<Element>(n); ++e) m(group->mul(x, e), e) = 1.0;
    values.push_back(std::move(m));
  }
  return MatrixFn(std::move(group), n, std::move(values));
}

IrrepTablePtr decompose_irreps(GroupPtr group, std::uint64_t seed) {
  if (!group) throw InvalidArgument("decompose_irreps: null group");
  if (group->order() > kMaxBuiltinOrder) {
    throw InvalidArgument("decompose_irreps: group order " + std::to_string(group->order()) +
                          " exceeds " + std::to_string(kMaxBuiltinOrder));
  }
  std::mt19937_64 rng(seed);
  std::vector<Irrep> irreps;
  for (int attempt = 0; attempt <= kMaxReseeds; ++attempt) {
    try {
      irreps = decompose_once(*group, rng);
    } catch (const ConvergenceError&) {
      if (attempt == kMaxReseeds) throw;
      continue;
    }
    if (square_sum(irreps) == group->order()) break;
    if (attempt == kMaxReseeds) {
      throw ConvergenceError("decompose_irreps: found irreps with sum of squared dimensions " +
                             std::to_string(square_sum(irreps)) + " != |G| = " +
                             std::to_string(group->order()));
    }
  }

  for (auto& r : irreps) polish(r);
  std::sort(irreps.begin(), irreps.end(), [](const Irrep& a, const Irrep& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    const bool ta = is_trivial(a);
    const bool tb = is_trivial(b);
    if (ta != tb) return ta;
    return rounded_key(a) < rounded_key(b);
  });

  auto table = std::make_shared<IrrepTable>();
  table->group = group;
  table->certificate = certify(*group, irreps);
  table->irreps = std::move(irreps);
  table->seed = seed;
  return table;
}

Complex character_inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("character_inner: length mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s / static_cast<double>(a.size());
}

double verify_schur_delta(const FiniteGroup& group, std::span<const Irrep> irreps) {
  double worst = 0.0;
  for (Element x = 0; x < static_cast<Element>(group.order()); ++x) {
    Complex s = 0.0;
    for (const auto& r : irreps) s += static_cast<double>(r.dim) * r.character[x];
    const double target = x == group.identity() ? static_cast<double>(group.order()) : 0.0;
    worst = std::max(worst, std::abs(s - target));
  }
  return worst;
}

Complex matrix_element_average(const Irrep& p, std::size_t k, std::size_t j, const Irrep& q,
                               std::size_t s, std::size_t r) {
  if (p.matrices.size() != q.matrices.size()) {
    throw InvalidArgument("matrix_element_average: irreps of different groups");
  }
  Complex sum = 0.0;
  for (std::size_t x = 0; x < p.matrices.size(); ++x) {
    sum += p.matrices[x](k, j) * std::conj(q.matrices[x](s, r));
  }
  return sum / static_cast<double>(p.matrices.size());
}

double matrix_element_orthogonality_check(const IrrepTable& table) {
  double worst = 0.0;
  for (std::size_t a = 0; a < table.size(); ++a) {
    const Irrep& p = table[a];
    if (p.dim > 4) continue;
    for (std::size_t b = 0; b < table.size(); ++b) {
      const Irrep& q = table[b];
      if (q.dim > 4) continue;
      for (std::size_t k = 0; k < p.dim; ++k) {
        for (std::size_t j = 0; j < p.dim; ++j) {
          for (std::size_t s = 0; s < q.dim; ++s) {
            for (std::size_t r = 0; r < q.dim; ++r) {
              const double expected =
                  (a == b && k == s && j == r) ? 1.0 / static_cast<double>(p.dim) : 0.0;
              worst = std::max(worst, std::abs(matrix_element_average(p, k, j, q, s, r) - expected));
            }
          }
        }
      }
    }
  }
  return worst;
}

}  // namespace repstab
