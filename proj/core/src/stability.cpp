#include "repstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "repstab/error.hpp"
#include "repstab/fourier.hpp"
#include "repstab/parallel.hpp"

namespace repstab {

namespace {

// Pairwise products f(x) f(y)^* are cached for the affine defect below this
// many entries.
constexpr std::size_t kAffineCacheEntries = std::size_t{1} << 24;

void require_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw InvalidArgument(std::string(what) + ": p must be at least 1");
}

void require_values(const MatrixFn& f, bool relaxed, const char* what) {
  if (relaxed) {
    const double op = f.max_op_norm();
    if (op > 1.0 + 1e-9) {
      throw PreconditionError(std::string(what) + ": values exceed operator norm 1", op, 1.0);
    }
  } else {
    const double r = f.max_unitarity_residual();
    if (r > kUnitaryTolerance) {
      throw PreconditionError(std::string(what) + ": values are not unitary", r,
                              kUnitaryTolerance);
    }
  }
}

double dim_ratio(std::size_t num, std::size_t den, double p) {
  return std::pow(static_cast<double>(num) / static_cast<double>(den), 1.0 / p);
}

double identity_distance(const CMatrix& a, double p) {
  return normalized_norm(a - CMatrix::identity(a.rows()), p);
}

std::vector<double> pointwise_distances(const MatrixFn& f, const PartialAffineRep& rep, double p) {
  std::vector<double> out(f.size());
  parallel_for(f.size(), [&](std::size_t x) {
    out[x] = normalized_norm(f(static_cast<Element>(x)) - rep(static_cast<Element>(x)), p);
  });
  return out;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

// E_x f(x) rep(x)^*.
CMatrix average_product(const MatrixFn& f, const PartialAffineRep& rep) {
  CMatrix acc(f.n(), f.n());
  for (Element x = 0; x < static_cast<Element>(f.size()); ++x) acc += mul_adjoint(f(x), rep(x));
  acc *= Complex(1.0 / static_cast<double>(f.size()), 0.0);
  return acc;
}

AverageResult average_with_c(const MatrixFn& f, IrrepTablePtr table, double p, double epsilon,
                             double c) {
  AverageResult out;
  out.epsilon = epsilon;
  out.c = c;
  out.inverse = inverse_theorem(f, std::move(table), c);
  out.rep = out.inverse.rep;
  out.w = polar_partial_unitary(average_product(f, out.rep));
  out.rep.v = out.w * out.rep.v;
  out.residual = identity_distance(average_product(f, out.rep), p);
  out.bound = c_p(p) * epsilon;
  const double shrink = 1.0 - std::pow(2.0, 2.0 - p) * std::pow(epsilon, p);
  const double n = static_cast<double>(f.n());
  out.window_lo = shrink * n;
  out.window_hi = shrink > 0.0 ? n / shrink : kInfinity;
  const double m = static_cast<double>(out.rep.m);
  out.m_in_window = m >= out.window_lo - 1e-9 && m <= out.window_hi + 1e-9;
  return out;
}

void add_window_checks(StabilityReport& r) {
  if (!r.window_applicable) return;
  const double m = static_cast<double>(r.m);
  r.checks.push_back(make_check("window_lo <= m", r.window_lo, m));
  r.checks.push_back(make_check("m <= window_hi", m, r.window_hi));
}

void finish(StabilityReport& r) {
  r.max_distance = max_of(r.per_element);
  r.checks.insert(r.checks.begin(), make_check("max_distance <= bound", r.max_distance, r.bound));
  add_window_checks(r);
  r.passed = std::all_of(r.checks.begin(), r.checks.end(),
                         [](const BoundCheck& c) { return c.passed; });
}

// Averaging plus alignment for an affine eps-representation. Chooses c from
// eps when the theorem applies and from the measured U^2 norm otherwise.
AlignResult affine_core(const MatrixFn& f, const IrrepTablePtr& table, double p, double eps,
                        bool force, StabilityReport& r) {
  const double a = std::pow(2.0, 1.0 - p) * std::pow(eps, p);
  double c = 1.0 - a;
  const double u2 = u2_norm4_fourier(f, *table);
  const double n = static_cast<double>(f.n());
  if (a >= 0.25 || u2 < c * n - 1e-9 * n) {
    if (!force) throw PreconditionError("averaging step: 2^{1-p} eps^p must be below 1/4", a, 0.25);
    c = auto_c(f, *table);
    r.notes.push_back("c taken from the measured U^2 norm");
  }
  const AverageResult avg = average_with_c(f, table, p, eps, c);
  AlignResult al = align(f, avg.rep, p, eps);
  r.c = c;
  r.c_p = c_p(p);
  r.residual = avg.residual;
  r.gamma = al.gamma;
  r.delta = al.delta;
  r.checks.push_back(make_check("residual <= C_p eps", avg.residual, avg.bound));
  r.checks.push_back(make_check("aligned distance <= gamma", al.max_distance, al.gamma));
  return al;
}

}  // namespace

const char* to_string(Flavor flavor) {
  return flavor == Flavor::kAffine ? "affine" : "multiplicative";
}

double c_p(double p) {
  require_exponent(p, "c_p");
  return std::pow(std::pow(2.0, 5.0 - p) + std::pow(2.0, 2.0 - p), 1.0 / p);
}

double affine_constant(double p) {
  return 1.0 + 3.0 * std::pow(2.0, 3.0 / p - 1.0) + 2.0 * c_p(p);
}

double multiplicative_constant(double p) {
  return 1.0 + 2.0 * affine_constant(p) + std::pow(8.0, 1.0 / p);
}

void require_stability_exponent(double p) {
  require_exponent(p, "stabilize");
  if (p > 2.0) {
    throw PreconditionError(
        "stabilize: for p > 2 only eps^{2/p} bounds are available through the p = 2 route; "
        "stabilization is limited to 1 <= p <= 2",
        p, 2.0);
  }
}

double defect(const MatrixFn& f, Flavor flavor, double p, bool relaxed) {
  require_exponent(p, "defect");
  require_values(f, relaxed, "defect");
  const FiniteGroup& g = f.group();
  const std::size_t order = g.order();
  if (flavor == Flavor::kMultiplicative) {
    return parallel_max(order, [&](std::size_t xi) {
      const auto x = static_cast<Element>(xi);
      double m = 0.0;
      for (Element y = 0; y < static_cast<Element>(order); ++y) {
        m = std::max(m, normalized_norm(f(x) * f(y) - f(g.mul(x, y)), p));
      }
      return m;
    });
  }
  const std::size_t n = f.n();
  const bool cache = order * order * n * n <= kAffineCacheEntries;
  std::vector<CMatrix> pairs;
  if (cache) {
    pairs.resize(order * order);
    parallel_for(order, [&](std::size_t x) {
      for (std::size_t y = 0; y < order; ++y) {
        pairs[x * order + y] = mul_adjoint(f(static_cast<Element>(x)), f(static_cast<Element>(y)));
      }
    });
  }
  const CMatrix id = CMatrix::identity(n);
  return parallel_max(order, [&](std::size_t xi) {
    const auto x = static_cast<Element>(xi);
    double m = 0.0;
    for (Element y = 0; y < static_cast<Element>(order); ++y) {
      const Element xy = g.mul(x, g.inverse(y));
      const CMatrix a = cache ? pairs[xi * order + y] : mul_adjoint(f(x), f(y));
      for (Element z = 0; z < static_cast<Element>(order); ++z) {
        const Element w = g.mul(xy, z);
        const CMatrix b = cache ? pairs[static_cast<std::size_t>(z) * order + w]
                                : mul_adjoint(f(z), f(w));
        m = std::max(m, normalized_norm(a * b - id, p));
      }
    }
    return m;
  });
}

ApproxRep ApproxRep::measure(MatrixFn f, Flavor flavor, double p, bool relaxed) {
  ApproxRep out;
  out.epsilon = defect(f, flavor, p, relaxed);
  out.f = std::move(f);
  out.flavor = flavor;
  out.p = p;
  out.relaxed = relaxed;
  return out;
}

InequalitySides distance_from_identity_bound(const CMatrix& a, double p) {
  require_exponent(p, "distance_from_identity_bound");
  if (a.rows() != a.cols()) throw InvalidArgument("distance_from_identity_bound: matrix not square");
  const double r = partial_unitary_residual(a);
  if (r > kUnitaryTolerance) {
    throw PreconditionError("distance_from_identity_bound: matrix is not unitary", r,
                            kUnitaryTolerance);
  }
  const double eps = identity_distance(a, p);
  return {a.trace().real() / static_cast<double>(a.rows()),
          1.0 - std::pow(2.0, 1.0 - p) * std::pow(eps, p)};
}

AverageResult average_stability(const MatrixFn& f, IrrepTablePtr table, double p,
                                 std::optional<double> epsilon) {
  require_stability_exponent(p);
  if (!table) throw InvalidArgument("average_stability: missing irrep table");
  require_values(f, false, "average_stability");
  const double eps = epsilon ? *epsilon : defect(f, Flavor::kAffine, p);
  const double a = std::pow(2.0, 1.0 - p) * std::pow(eps, p);
  if (a >= 0.25) {
    throw PreconditionError("average_stability: 2^{1-p} eps^p must be below 1/4", a, 0.25);
  }
  return average_with_c(f, std::move(table), p, eps, 1.0 - a);
}

AlignResult align(const MatrixFn& f, const PartialAffineRep& sigma, double p, double epsilon,
                  std::optional<double> eta_limit) {
  require_exponent(p, "align");
  if (sigma.n != f.n() || sigma.p.size() != f.size()) {
    throw InvalidArgument("align: f and sigma have different shapes");
  }
  AlignResult out;
  out.epsilon = epsilon;
  out.eta = identity_distance(average_product(f, sigma), p);
  if (eta_limit && out.eta > *eta_limit + 1e-12) {
    throw PreconditionError("align: ||I - E f sigma^*||'_p exceeds eta", out.eta, *eta_limit);
  }
  const std::size_t n = sigma.n;
  const std::size_t m = sigma.m;
  out.delta = dim_ratio(m > n ? m - n : n - m, n, p);
  out.gamma = epsilon + (m >= n ? 3.0 : 1.0) * out.delta + 2.0 * out.eta;
  const Element e = f.group().identity();
  out.w = polar_partial_unitary(adjoint_mul(f(e), sigma(e)));
  out.rep = sigma;
  out.rep.u = out.w * sigma.u;
  out.distances = pointwise_distances(f, out.rep, p);
  out.max_distance = max_of(out.distances);
  return out;
}

BoundCheck make_check(std::string name, double measured, double bound, double slack) {
  BoundCheck c;
  c.name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  c.margin = bound - measured;
  c.passed = measured <= bound + slack;
  return c;
}

StabilityReport stabilize_affine(const MatrixFn& f, IrrepTablePtr table, double p,
                                 const StabilizeOptions& options) {
  require_stability_exponent(p);
  if (!table) throw InvalidArgument("stabilize_affine: missing irrep table");
  if (options.relaxed) {
    throw InvalidArgument("stabilize_affine: relaxed inputs are supported by stabilize only");
  }
  StabilityReport r;
  r.flavor = Flavor::kAffine;
  r.p = p;
  r.n = f.n();
  r.epsilon = defect(f, Flavor::kAffine, p);
  r.affine_epsilon = r.epsilon;
  r.preconditions_met = r.epsilon <= 0.25;
  if (!r.preconditions_met) {
    if (!options.force) {
      throw PreconditionError("stabilize_affine: affine defect exceeds 1/4", r.epsilon, 0.25);
    }
    r.notes.push_back("affine defect exceeds 1/4; bounds evaluated beyond their range");
  }
  AlignResult al = affine_core(f, table, p, r.epsilon, options.force, r);
  r.rep = std::move(al.rep);
  r.m = r.rep.m;
  r.per_element = std::move(al.distances);
  r.bound_constant = affine_constant(p);
  r.bound = r.bound_constant * r.epsilon;
  const double shrink = 1.0 - std::pow(2.0, 2.0 - p) * std::pow(r.epsilon, p);
  r.window_applicable = r.preconditions_met && shrink > 0.0;
  r.window_lo = shrink * static_cast<double>(r.n);
  r.window_hi = shrink > 0.0 ? static_cast<double>(r.n) / shrink : kInfinity;
  r.m_in_window = static_cast<double>(r.m) >= r.window_lo - 1e-9 &&
                  static_cast<double>(r.m) <= r.window_hi + 1e-9;
  finish(r);
  return r;
}

StabilityReport stabilize(const MatrixFn& f, IrrepTablePtr table, double p,
                          const StabilizeOptions& options) {
  require_stability_exponent(p);
  if (!table) throw InvalidArgument("stabilize: missing irrep table");
  StabilityReport r;
  r.flavor = Flavor::kMultiplicative;
  r.p = p;
  r.n = f.n();
  r.relaxed = options.relaxed;

  MatrixFn work = f;
  double input_eps = 0.0;
  double unitarize_distance = 0.0;
  if (options.relaxed) {
    UnitarizeResult u = unitarize(f, p);
    input_eps = u.epsilon;
    unitarize_distance = u.max_distance;
    r.checks.push_back(make_check("||f - polar f|| <= 2 eps", u.max_distance, u.distance_bound));
    r.checks.push_back(make_check("defect(polar f) <= 7 eps", u.g_defect, u.g_defect_bound));
    work = std::move(u.g);
  }
  const double eps = defect(work, Flavor::kMultiplicative, p);
  if (!options.relaxed) input_eps = eps;
  r.epsilon = input_eps;
  r.preconditions_met = eps <= 1.0 / 16.0;
  if (!r.preconditions_met) {
    if (!options.force) {
      throw PreconditionError("stabilize: multiplicative defect exceeds 1/16", eps, 1.0 / 16.0);
    }
    r.notes.push_back("multiplicative defect exceeds 1/16; bounds evaluated beyond their range");
  }
  r.affine_epsilon = defect(work, Flavor::kAffine, p);
  r.checks.push_back(make_check("affine defect <= 2 eps", r.affine_epsilon, 2.0 * eps));

  AlignResult al = affine_core(work, table, p, r.affine_epsilon, options.force, r);
  r.checks.push_back(make_check("affine distance <= D_p eps_affine", al.max_distance,
                                affine_constant(p) * r.affine_epsilon));
  PartialRepResult pr = affine_to_multiplicative(al.rep, p);
  r.checks.push_back(make_check("partial representation shift", pr.max_distance, pr.bound));
  r.rep = std::move(pr.rep);
  r.m = r.rep.m;
  r.per_element = pointwise_distances(f, r.rep, p);
  r.bound_constant = multiplicative_constant(p);
  r.bound = r.bound_constant * eps;
  if (options.relaxed) {
    r.bound += 2.0 * input_eps;
    r.notes.push_back("bound is 2 eps + constant * defect(polar f); measured ||f - polar f|| = " +
                      std::to_string(unitarize_distance));
  }
  const double shrink = 1.0 - 4.0 * std::pow(eps, p);
  r.window_applicable = r.preconditions_met && shrink > 0.0;
  r.window_lo = shrink * static_cast<double>(r.n);
  r.window_hi = shrink > 0.0 ? static_cast<double>(r.n) / shrink : kInfinity;
  r.m_in_window = static_cast<double>(r.m) >= r.window_lo - 1e-9 &&
                  static_cast<double>(r.m) <= r.window_hi + 1e-9;
  finish(r);
  return r;
}

PartialRepResult affine_to_multiplicative(const PartialAffineRep& sigma, double p) {
  require_exponent(p, "affine_to_multiplicative");
  PartialRepResult out;
  out.rep = sigma;
  out.rep.u = sigma.v;
  const Element e = sigma.p.group().identity();
  const CMatrix se = sigma(e);
  double m = 0.0;
  for (Element x = 0; x < static_cast<Element>(sigma.p.size()); ++x) {
    m = std::max(m, normalized_norm(out.rep(x) - mul_adjoint(sigma(x), se), p));
  }
  out.max_distance = m;
  out.bound = sigma.m > sigma.n ? dim_ratio(sigma.m - sigma.n, sigma.n, p) : 0.0;
  return out;
}

EmbedResult embed_same_dimension(const PartialAffineRep& rho, double p) {
  require_exponent(p, "embed_same_dimension");
  const std::size_t n = rho.n;
  const std::size_t m = rho.m;
  const bool same = rho.u.rows() == rho.v.rows() && max_abs_diff(rho.u, rho.v) < 1e-12;
  const GroupPtr& group = rho.p.group_ptr();
  std::vector<CMatrix> values;
  values.reserve(rho.p.size());
  EmbedResult out;
  if (m <= n) {
    const CMatrix u1 = complete_to_unitary(rho.u);
    const CMatrix v1 = same ? u1 : complete_to_unitary(rho.v);
    const CMatrix pad = CMatrix::identity(n - m);
    double dist = 0.0;
    for (Element x = 0; x < static_cast<Element>(rho.p.size()); ++x) {
      const CMatrix parts[] = {rho.p(x), pad};
      const CMatrix q = m == n ? rho.p(x) : block_diag(parts);
      values.push_back(mul_adjoint(v1 * q, u1));
      dist = std::max(dist, normalized_norm(values.back() - rho(x), p));
    }
    out.max_distance = dist;
    out.bound = dim_ratio(n - m, n, p);
  } else {
    const CMatrix u1 = complete_to_unitary(rho.u.adjoint()).adjoint();
    const CMatrix v1 = same ? u1 : complete_to_unitary(rho.v.adjoint()).adjoint();
    const CMatrix pad = CMatrix::identity(m - n);
    double dist = 0.0;
    for (Element x = 0; x < static_cast<Element>(rho.p.size()); ++x) {
      values.push_back(mul_adjoint(v1 * rho.p(x), u1));
      const CMatrix parts[] = {rho(x), pad};
      dist = std::max(dist, normalized_norm(values.back() - block_diag(parts), p));
    }
    out.max_distance = dist;
    out.bound = 4.0 * dim_ratio(m - n, m, p);
  }
  out.fn = MatrixFn(group, std::max(n, m), std::move(values));
  out.multiplicative = same && max_homomorphism_residual(out.fn) < 1e-8;
  return out;
}

UnitarizeResult unitarize(const MatrixFn& f, double p) {
  require_exponent(p, "unitarize");
  const Element e = f.group().identity();
  const double re = partial_unitary_residual(f(e));
  if (re > kUnitaryTolerance) {
    throw PreconditionError("unitarize: f(e) is not unitary", re, kUnitaryTolerance);
  }
  UnitarizeResult out;
  out.epsilon = defect(f, Flavor::kMultiplicative, p, true);
  std::vector<CMatrix> values(f.size());
  out.distances.resize(f.size());
  parallel_for(f.size(), [&](std::size_t x) {
    values[x] = polar_partial_unitary(f(static_cast<Element>(x)));
    out.distances[x] = normalized_norm(f(static_cast<Element>(x)) - values[x], p);
  });
  out.g = MatrixFn(f.group_ptr(), f.n(), std::move(values));
  out.max_distance = max_of(out.distances);
  out.distance_bound = 2.0 * out.epsilon;
  out.g_defect = defect(out.g, Flavor::kMultiplicative, p);
  out.g_defect_bound = out.epsilon + 3.0 * (2.0 * out.epsilon);
  return out;
}

bool weyl_monotonicity_check(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("weyl_monotonicity_check: shape mismatch");
  }
  const HermEig diff = herm_eig(a - b);
  if (!diff.values.empty() && diff.values.front() < -1e-10) {
    throw PreconditionError("weyl_monotonicity_check: A - B is not positive semidefinite",
                            diff.values.front(), -1e-10);
  }
  const HermEig ea = herm_eig(a);
  const HermEig eb = herm_eig(b);
  for (std::size_t k = 0; k < ea.values.size(); ++k) {
    if (ea.values[k] < eb.values[k] - 1e-10) return false;
  }
  return true;
}

InequalitySides lidskii_nearest_check(const CMatrix& a, const CMatrix& b, double p) {
  require_exponent(p, "lidskii_nearest_check");
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols()) {
    throw InvalidArgument("lidskii_nearest_check: A and B must be square of equal size");
  }
  const double opa = op_norm(a);
  const double opb = op_norm(b);
  if (std::max(opa, opb) > 1.0 + 1e-12) {
    throw PreconditionError("lidskii_nearest_check: operator norm exceeds 1", std::max(opa, opb),
                            1.0);
  }
  return {normalized_norm(a - polar_partial_unitary(a), p), identity_distance(a * b, p)};
}

InequalitySides almost_unitary_check(const CMatrix& u, const CMatrix& v, double p) {
  require_exponent(p, "almost_unitary_check");
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw InvalidArgument("almost_unitary_check: U and V differ in shape");
  }
  const double r = std::max(partial_unitary_residual(u), partial_unitary_residual(v));
  if (r > kUnitaryTolerance) {
    throw PreconditionError("almost_unitary_check: inputs are not partial unitary", r,
                            kUnitaryTolerance);
  }
  const std::size_t n = u.rows();
  const std::size_t m = u.cols();
  const CMatrix vu = mul_adjoint(v, u);
  return {normalized_norm(vu - polar_partial_unitary(vu), p),
          dim_ratio(m > n ? m - n : n - m, n, p)};
}

InequalitySides small_op_product_check(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                                       double p) {
  require_exponent(p, "small_op_product_check");
  if (a.rows() != a.cols() || b.cols() != a.rows() || c.cols() != a.rows() ||
      b.rows() != c.rows()) {
    throw InvalidArgument("small_op_product_check: expected A m x m and B, C n x m");
  }
  return {schatten_norm(mul_adjoint(b * a, c), p), schatten_norm(a, p) * op_norm(b) * op_norm(c)};
}

InequalitySides flexible_partial_rep_check(const PartialAffineRep& rho, double p) {
  require_exponent(p, "flexible_partial_rep_check");
  const FiniteGroup& g = rho.p.group();
  const std::size_t order = g.order();
  std::vector<CMatrix> values(order);
  for (Element x = 0; x < static_cast<Element>(order); ++x) values[x] = rho(x);
  const double lhs = parallel_max(order, [&](std::size_t xi) {
    const auto x = static_cast<Element>(xi);
    double m = 0.0;
    for (Element y = 0; y < static_cast<Element>(order); ++y) {
      const CMatrix xy = mul_adjoint(values[x], values[y]);
      const Element xyi = g.mul(x, g.inverse(y));
      for (Element z = 0; z < static_cast<Element>(order); ++z) {
        m = std::max(m, normalized_norm(xy * values[z] - values[g.mul(xyi, z)], p));
      }
    }
    return m;
  });
  const double eta = rho.m > rho.n ? 2.0 * dim_ratio(rho.m - rho.n, rho.n, p) : 0.0;
  return {lhs, eta};
}

}  // namespace repstab
