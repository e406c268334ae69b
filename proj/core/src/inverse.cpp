#include "repstab/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "repstab/error.hpp"
#include "repstab/fourier.hpp"
#include "repstab/linalg.hpp"

namespace repstab {

namespace {

void require_c(double c, const char* what) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw InvalidArgument(std::string(what) + ": c must lie in (0, 1], got " + std::to_string(c));
  }
}

CMatrix reshape_column(const CMatrix& m, std::size_t col, std::size_t rows, std::size_t cols) {
  std::vector<Complex> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, col);
  return reshape(v, rows, cols);
}

CMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (auto& z : m.entries()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return m;
}

}  // namespace

double tau(double c) {
  require_c(c, "tau");
  return std::max(std::sqrt(c / 2.0), std::pow(c / (2.0 - c), 2.0));
}

std::vector<std::size_t> threshold_select(const std::vector<double>& values,
                                          const std::vector<std::size_t>& weights, std::size_t n,
                                          double c) {
  if (values.size() != weights.size()) {
    throw InvalidArgument("threshold_select: values and weights differ in length");
  }
  require_c(c, "threshold_select");
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0 || values[i] > 1.0) {
      throw InvalidArgument("threshold_select: values must lie in [0, 1]");
    }
    s1 += static_cast<double>(weights[i]) * values[i];
    s2 += static_cast<double>(weights[i]) * values[i] * values[i];
  }
  const double nd = static_cast<double>(n);
  if (std::abs(s1 - nd) > 1e-6) {
    throw PreconditionError("threshold_select: weighted sum must equal n", s1, nd);
  }
  if (s2 < c * nd - 1e-12 * std::max(1.0, nd)) {
    throw PreconditionError("threshold_select: weighted square sum below c n", s2, c * nd);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= c / 2.0) out.push_back(i);
  }
  return out;
}

std::size_t SpectralSelection::total_dim() const {
  std::size_t t = 0;
  for (const auto& e : entries) t += e.dim;
  return t;
}

double SpectralSelection::weighted_sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += static_cast<double>(e.dim) * e.lambda;
  return s;
}

double SpectralSelection::weighted_square_sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += static_cast<double>(e.dim) * e.lambda * e.lambda;
  return s;
}

SpectralSelection extract_candidates(const MatrixFn& f, IrrepTablePtr table, double c) {
  require_c(c, "extract_candidates");
  if (!table) throw InvalidArgument("extract_candidates: null irrep table");
  const double op = f.max_op_norm();
  if (op > 1.0 + 1e-9) {
    throw PreconditionError("extract_candidates: max_x ||f(x)||_op exceeds 1", op, 1.0);
  }
  const FourierCoeffs coeffs = fourier_transform(f, table);
  const double n = static_cast<double>(f.n());
  const double u2 = u2_norm4_fourier(coeffs);
  if (u2 < c * n - 1e-9 * n) {
    throw PreconditionError("extract_candidates: ||f||_{U^2}^4 below c n", u2, c * n);
  }

  SpectralSelection sel;
  sel.table = table;
  sel.c = c;
  sel.cutoff = std::sqrt(c / 2.0);
  const double admit = sel.cutoff * (1.0 - 1e-12);
  for (std::size_t k = 0; k < table->size(); ++k) {
    const std::size_t d = (*table)[k].dim;
    const SVDResult s = svd(coeffs[k]);
    std::vector<std::size_t> cls;
    const double scale = std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < s.singulars.size(); ++j) {
      if (s.singulars[j] < admit) break;
      Candidate cand;
      cand.irrep = k;
      cand.dim = d;
      cand.lambda = s.singulars[j];
      cand.u = reshape_column(s.right, j, f.n(), d) * Complex(scale);
      cand.v = reshape_column(s.left, j, f.n(), d) * Complex(scale);
      cls.push_back(sel.entries.size());
      sel.entries.push_back(std::move(cand));
    }
    if (!cls.empty()) sel.classes.push_back(std::move(cls));
  }
  return sel;
}

MatrixFn PartialAffineRep::as_fn() const {
  std::vector<CMatrix> values;
  values.reserve(p.size());
  for (Element x = 0; x < static_cast<Element>(p.size()); ++x) values.push_back((*this)(x));
  return MatrixFn(p.group_ptr(), n, std::move(values));
}

Assembly assemble(const SpectralSelection& sel) {
  if (sel.entries.empty()) throw InvalidArgument("assemble: empty selection");
  if (!sel.table) throw InvalidArgument("assemble: selection carries no irrep table");
  const auto& table = *sel.table;
  std::vector<CMatrix> us, vs;
  Assembly out;
  for (const auto& e : sel.entries) {
    us.push_back(e.u);
    vs.push_back(e.v);
    for (std::size_t r = 0; r < e.dim; ++r) out.lambda.push_back(e.lambda);
    out.blocks.push_back(e.irrep);
  }
  out.u0 = hstack(us);
  out.v0 = hstack(vs);
  const std::size_t order = table.group->order();
  std::vector<CMatrix> pv;
  pv.reserve(order);
  std::vector<CMatrix> parts(sel.entries.size());
  for (std::size_t x = 0; x < order; ++x) {
    for (std::size_t i = 0; i < sel.entries.size(); ++i) parts[i] = table[sel.entries[i].irrep](static_cast<Element>(x));
    pv.push_back(block_diag(parts));
  }
  out.p = MatrixFn(table.group, out.lambda.size(), std::move(pv));
  return out;
}

Complex affine_correlation(const MatrixFn& f, const CMatrix& u, const CMatrix& v, const MatrixFn& p) {
  if (u.rows() != f.n() || v.rows() != f.n() || u.cols() != p.n() || v.cols() != p.n()) {
    throw InvalidArgument("affine_correlation: U, V must be n x m");
  }
  if (!same_group(f.group(), p.group())) {
    throw InvalidArgument("affine_correlation: f and P live on different groups");
  }
  Complex s = 0.0;
  for (Element x = 0; x < static_cast<Element>(f.size()); ++x) {
    s += inner(f(x), mul_adjoint(v * p(x), u));
  }
  return s / static_cast<double>(f.size());
}

Complex affine_correlation(const MatrixFn& f, const PartialAffineRep& rep) {
  return affine_correlation(f, rep.u, rep.v, rep.p);
}

double nuclear_contraction_check(const CMatrix& u, const MatrixFn& p, std::size_t trials,
                                 std::uint64_t seed) {
  if (u.cols() != p.n()) throw InvalidArgument("nuclear_contraction_check: U must be n x m");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    CMatrix w = (t % 2 == 0) ? mul_adjoint(random_gaussian(u.rows(), 1, rng), random_gaussian(u.cols(), 1, rng))
                             : random_gaussian(u.rows(), u.cols(), rng);
    const double denom = nuclear_norm(w);
    if (denom == 0.0) continue;
    double avg = 0.0;
    for (Element x = 0; x < static_cast<Element>(p.size()); ++x) avg += nuclear_norm(mul_adjoint(w * p(x), u));
    avg /= static_cast<double>(p.size());
    worst = std::max(worst, avg / denom);
  }
  return worst;
}

RoundingResult round_to_partial_unitaries(const MatrixFn& f, const CMatrix& u0, const CMatrix& v0,
                                          const MatrixFn& p, double theta) {
  const double m = static_cast<double>(p.n());
  RoundingResult out;
  out.initial_correlation = std::abs(affine_correlation(f, u0, v0, p));
  if (theta > 0.0 && out.initial_correlation < theta * m * (1.0 - 1e-12)) {
    throw PreconditionError("round_to_partial_unitaries: correlation below theta m",
                            out.initial_correlation, theta * m);
  }
  const double inv = 1.0 / static_cast<double>(f.size());

  CMatrix avg_v(f.n(), p.n());
  for (Element x = 0; x < static_cast<Element>(f.size()); ++x) avg_v += f(x) * mul_adjoint(u0, p(x));
  avg_v *= inv;
  const CMatrix v1 = polar_partial_unitary(avg_v);
  out.v_step_correlation = std::abs(affine_correlation(f, u0, v1, p));

  CMatrix avg_u(f.n(), p.n());
  for (Element x = 0; x < static_cast<Element>(f.size()); ++x) avg_u += adjoint_mul(f(x), v1 * p(x));
  avg_u *= inv;
  const CMatrix u1 = polar_partial_unitary(avg_u);

  out.rep.n = f.n();
  out.rep.m = p.n();
  out.rep.u = u1;
  out.rep.v = v1;
  out.rep.p = p;
  out.correlation = std::abs(affine_correlation(f, out.rep));
  return out;
}

InverseResult inverse_theorem(const MatrixFn& f, IrrepTablePtr table, double c) {
  InverseResult out;
  out.c = c;
  out.selection = extract_candidates(f, table, c);
  out.u2_norm4 = u2_norm4_fourier(f, *table);
  const Assembly a = assemble(out.selection);
  out.assembled_correlation = out.selection.weighted_sum();
  RoundingResult r = round_to_partial_unitaries(f, a.u0, a.v0, a.p);
  out.rep = std::move(r.rep);
  out.rep.blocks = a.blocks;
  out.correlation = r.correlation;
  const double m = static_cast<double>(out.rep.m);
  const double n = static_cast<double>(f.n());
  out.bound = std::pow(tau(c), 4.0) * m;
  out.window_lo = c * n / (2.0 - c);
  out.window_hi = (2.0 - c) * n / c;
  out.m_in_window = m >= out.window_lo - 1e-9 && m <= out.window_hi + 1e-9;
  out.correlation_ok = out.correlation >= out.bound - 1e-7;
  return out;
}

double auto_c(const MatrixFn& f, const IrrepTable& table) {
  const double c = u2_norm4_fourier(f, table) / static_cast<double>(f.n()) - 1e-9;
  if (!(c > 0.0)) throw PreconditionError("auto_c: ||f||_{U^2}^4 / n is not positive", c + 1e-9, 0.0);
  return std::min(c, 1.0);
}

ConverseResult converse_check(const MatrixFn& f, const PartialAffineRep& rep, double c,
                              const IrrepTable* table) {
  ConverseResult out;
  const double m = static_cast<double>(rep.m);
  out.correlation = std::abs(affine_correlation(f, rep));
  out.precondition = out.correlation >= c * m - 1e-9;
  out.u2_norm4 = table != nullptr ? u2_norm4_fourier(f, *table) : u2_norm4_direct(f);
  out.bound = std::pow(c, 4.0) * m;
  out.passed = out.u2_norm4 >= out.bound - 1e-6;
  return out;
}

}  // namespace repstab
