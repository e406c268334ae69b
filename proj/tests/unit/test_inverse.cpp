#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "repstab/error.hpp"
#include "repstab/fourier.hpp"
#include "repstab/harness.hpp"
#include "repstab/inverse.hpp"
#include "repstab/linalg.hpp"
#include "test_support.hpp"

using namespace repstab;
using repstab::test::Rng;

namespace {

struct Fixture {
  GroupPtr g;
  IrrepTablePtr t;
};

Fixture make(const char* spec) {
  const GroupPtr g = build_group(spec);
  return {g, decompose_irreps(g)};
}

CMatrix averaged(const MatrixFn& f, const CMatrix& u, const MatrixFn& p) {
  CMatrix s(f.n(), u.cols());
  for (Element x = 0; x < f.size(); ++x) s += f(x) * mul_adjoint(u, p(x));
  return s / Complex(static_cast<double>(f.size()));
}

}  // namespace

TEST(Tau, Values) {
  EXPECT_DOUBLE_EQ(tau(1.0), 1.0);
  EXPECT_DOUBLE_EQ(tau(0.5), 0.5);
  EXPECT_GE(std::pow(tau(0.99), 4), 1.0 - 16 * 0.01);
  for (double eps = 0.001; eps < 0.0625; eps += 0.001) {
    EXPECT_GE(std::pow(tau(1.0 - eps), 4), 1.0 - 16 * eps - 1e-15);
  }
  EXPECT_THROW(tau(0.0), InvalidArgument);
  EXPECT_THROW(tau(1.5), InvalidArgument);
}

TEST(ThresholdSelect, Example) {
  const auto a = threshold_select({1.0, 0.7, 0.3}, {1, 1, 1}, 2, 0.79);
  EXPECT_EQ(a, (std::vector<std::size_t>{0, 1}));
  const double c = 0.79;
  EXPECT_GE(1.7, c * 2 / (2 - c));
}

TEST(ThresholdSelect, AllOnes) {
  const auto a = threshold_select({1.0, 1.0, 1.0}, {2, 1, 1}, 4, 1.0);
  EXPECT_EQ(a.size(), 3u);
}

TEST(ThresholdSelect, ExcludesSmallValues) {
  const auto a = threshold_select({1.0, 0.1, 0.1, 0.05}, {1, 3, 5, 4}, 2, 0.5);
  EXPECT_EQ(a, (std::vector<std::size_t>{0}));
}

TEST(ThresholdSelect, Preconditions) {
  EXPECT_THROW(threshold_select({0.5, 0.5}, {1, 1}, 2, 0.5), PreconditionError);
  EXPECT_THROW(threshold_select({1.0, 0.5, 0.5}, {1, 1, 1}, 2, 0.9), PreconditionError);
  EXPECT_THROW(threshold_select({1.0}, {1, 1}, 1, 0.5), InvalidArgument);
}

TEST(ThresholdSelect, GuaranteesOnRandomWeights) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> w(1, 4);
  int checked = 0;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = 2 + t % 6;
    std::vector<double> a(k);
    std::vector<std::size_t> wt(k);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = std::pow(u(rng), 3.0);
      wt[i] = w(rng);
    }
    // Scale so that sum w a is an integer n with every a in [0, 1].
    double raw = 0.0;
    for (std::size_t i = 0; i < k; ++i) raw += wt[i] * a[i];
    const double n = std::floor(raw);
    if (n < 1.0) continue;
    for (double& v : a) v *= n / raw;
    for (std::size_t i = 0; i < k; ++i) {
      s1 += wt[i] * a[i];
      s2 += wt[i] * a[i] * a[i];
    }
    const double c = std::min(1.0, s2 / n);
    const auto sel = threshold_select(a, wt, static_cast<std::size_t>(n), c);
    double wa = 0.0, ws = 0.0;
    for (std::size_t i : sel) {
      wa += wt[i];
      ws += wt[i] * a[i];
    }
    EXPECT_GE(wa, c * n / (2 - c) - 1e-9);
    EXPECT_LE(wa, (2 - c) * n / c + 1e-9);
    EXPECT_GE(ws, c * n / (2 - c) - 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(Extract, ExactIrrep) {
  const Fixture fx = make("symmetric:4");
  const Irrep& rho = (*fx.t)[3];
  const SpectralSelection sel = extract_candidates(rho.as_fn(fx.g), fx.t, 1.0);
  ASSERT_EQ(sel.entries.size(), 1u);
  EXPECT_NEAR(sel.entries[0].lambda, 1.0, 1e-10);
  EXPECT_EQ(sel.total_dim(), 3u);
  EXPECT_NEAR(hs_norm(sel.entries[0].u) * hs_norm(sel.entries[0].u), 3.0, 1e-8);
  const CMatrix& u = sel.entries[0].u;
  const CMatrix& v = sel.entries[0].v;
  // U and V agree up to a phase.
  const Complex ph = inner(v, u) / Complex(3.0);
  EXPECT_NEAR(std::abs(ph), 1.0, 1e-8);
  EXPECT_LT(max_abs_diff(v, u * ph), 1e-8);
}

TEST(Extract, ConstantIdentity) {
  const Fixture fx = make("quaternion");
  const SpectralSelection sel = extract_candidates(MatrixFn::constant(fx.g, CMatrix::identity(3)), fx.t, 1.0);
  ASSERT_EQ(sel.entries.size(), 3u);
  for (const Candidate& c : sel.entries) {
    EXPECT_EQ(c.irrep, 0u);
    EXPECT_NEAR(c.lambda, 1.0, 1e-12);
  }
  ASSERT_EQ(sel.classes.size(), 1u);
  EXPECT_EQ(sel.classes[0].size(), 3u);
}

TEST(Extract, HalfScaledIrrepFailsPrecondition) {
  const Fixture fx = make("symmetric:3");
  const MatrixFn f = (*fx.t)[2].as_fn(fx.g) * Complex(0.5);
  EXPECT_NEAR(u2_norm4_fourier(f, *fx.t), 2.0 / 16.0, 1e-12);
  try {
    extract_candidates(f, fx.t, 0.9);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NEAR(e.measured(), 0.125, 1e-12);
    EXPECT_NEAR(e.limit(), 1.8, 1e-12);
  }
  EXPECT_THROW(extract_candidates(f * Complex(3.0), fx.t, 0.5), PreconditionError);
}

TEST(Extract, SelectionInvariantsOnPerturbedInputs) {
  const Fixture fx = make("symmetric:4");
  const MatrixFn rho = select_representation(*fx.t, "sum:2+3+3");
  for (double c : {0.5, 0.8, 0.95}) {
    const MatrixFn f = gen_perturbed_rep_u2(rho, *fx.t, c, 5);
    const SpectralSelection sel = extract_candidates(f, fx.t, c);
    const double n = static_cast<double>(rho.n());
    const double m = static_cast<double>(sel.total_dim());
    EXPECT_GE(m, c * n / (2 - c) - 1e-9);
    EXPECT_LE(m, (2 - c) * n / c + 1e-9);
    EXPECT_GE(sel.weighted_sum(), tau(c) * m - 1e-9);
    EXPECT_GE(sel.weighted_square_sum(), std::pow(c / (2 - c), 2) * m - 1e-9);
    for (const Candidate& e : sel.entries) {
      EXPECT_GE(e.lambda, std::sqrt(c / 2) - 1e-15);
      EXPECT_NEAR(hs_norm(e.u) * hs_norm(e.u), static_cast<double>(e.dim), 1e-8);
      EXPECT_NEAR(hs_norm(e.v) * hs_norm(e.v), static_cast<double>(e.dim), 1e-8);
      EXPECT_LT(max_abs_diff(apply_coeff(f, (*fx.t)[e.irrep], e.u), e.v * Complex(e.lambda)), 1e-8);
    }
    for (const auto& cls : sel.classes) {
      for (std::size_t i : cls) {
        for (std::size_t j : cls) {
          if (i == j) continue;
          EXPECT_LT(std::abs(inner(sel.entries[i].u, sel.entries[j].u)), 1e-8);
          EXPECT_LT(std::abs(inner(sel.entries[i].v, sel.entries[j].v)), 1e-8);
        }
      }
    }
  }
}

TEST(Assemble, ExactIrrepCorrelation) {
  const Fixture fx = make("dihedral:4");
  const MatrixFn f = (*fx.t)[4].as_fn(fx.g);
  const Assembly a = assemble(extract_candidates(f, fx.t, 1.0));
  EXPECT_NEAR(affine_correlation(f, a.u0, a.v0, a.p).real(), 2.0, 1e-10);
}

TEST(Assemble, ConstantIdentity) {
  const Fixture fx = make("cyclic:5");
  const MatrixFn f = MatrixFn::constant(fx.g, CMatrix::identity(2));
  const Assembly a = assemble(extract_candidates(f, fx.t, 1.0));
  EXPECT_NEAR(affine_correlation(f, a.u0, a.v0, a.p).real(), 2.0, 1e-12);
  for (Element x = 0; x < 5; ++x) EXPECT_LT(max_abs_diff(a.p(x), CMatrix::identity(2)), 1e-12);
}

TEST(Assemble, BlockwiseConditionThree) {
  const Fixture fx = make("symmetric:4");
  const MatrixFn f = gen_perturbed_rep_u2(select_representation(*fx.t, "sum:3+4"), *fx.t, 0.8, 2);
  const SpectralSelection sel = extract_candidates(f, fx.t, 0.8);
  const Assembly a = assemble(sel);
  CMatrix expected = a.v0;
  for (std::size_t j = 0; j < expected.cols(); ++j) {
    for (std::size_t i = 0; i < expected.rows(); ++i) expected(i, j) *= a.lambda[j];
  }
  EXPECT_LT(max_abs_diff(averaged(f, a.u0, a.p), expected), 1e-8);
  EXPECT_NEAR(affine_correlation(f, a.u0, a.v0, a.p).real(), sel.weighted_sum(), 1e-9);
  EXPECT_GE(sel.weighted_sum(), tau(0.8) * static_cast<double>(sel.total_dim()));
}

TEST(NuclearContraction, AtMostOne) {
  const Fixture fx = make("symmetric:4");
  for (double c : {0.5, 0.8}) {
    const MatrixFn f = gen_perturbed_rep_u2(select_representation(*fx.t, "sum:2+3"), *fx.t, c, 3);
    const Assembly a = assemble(extract_candidates(f, fx.t, c));
    EXPECT_LE(nuclear_contraction_check(a.u0, a.p, 200, 1), 1.0 + 1e-8);
  }
  const MatrixFn rho = (*fx.t)[4].as_fn(fx.g);
  const Assembly exact = assemble(extract_candidates(rho, fx.t, 1.0));
  const double r = nuclear_contraction_check(exact.u0, exact.p, 100, 2);
  EXPECT_LE(r, 1.0 + 1e-8);
  EXPECT_GT(r, 0.0);
}

TEST(Rounding, ExactIrrep) {
  const Fixture fx = make("quaternion");
  const MatrixFn f = (*fx.t)[4].as_fn(fx.g);
  const Assembly a = assemble(extract_candidates(f, fx.t, 1.0));
  const RoundingResult r = round_to_partial_unitaries(f, a.u0, a.v0, a.p, 1.0 - 1e-12);
  EXPECT_NEAR(r.correlation, 2.0, 1e-7);
  EXPECT_LT(partial_unitary_residual(r.rep.u), 1e-10);
  EXPECT_LT(partial_unitary_residual(r.rep.v), 1e-10);
  for (Element x = 0; x < 8; ++x) EXPECT_LT(max_abs_diff(r.rep(x), f(x)), 1e-8);
}

TEST(Rounding, VStepEqualsNuclearNormAndKeepsThetaFourth) {
  const Fixture fx = make("symmetric:4");
  for (double c : {0.5, 0.8, 0.95}) {
    const MatrixFn f = gen_perturbed_rep_u2(select_representation(*fx.t, "sum:1+3+4"), *fx.t, c, 9);
    const SpectralSelection sel = extract_candidates(f, fx.t, c);
    const Assembly a = assemble(sel);
    const double m = static_cast<double>(sel.total_dim());
    const double theta = sel.weighted_sum() / m;
    const RoundingResult r = round_to_partial_unitaries(f, a.u0, a.v0, a.p, theta - 1e-12);
    EXPECT_NEAR(r.v_step_correlation, nuclear_norm(averaged(f, a.u0, a.p)), 1e-9);
    EXPECT_GE(r.correlation, std::pow(theta, 4) * m - 1e-9);
  }
}

TEST(Rounding, RejectsLowCorrelation) {
  const Fixture fx = make("symmetric:3");
  const MatrixFn f = (*fx.t)[2].as_fn(fx.g);
  const Assembly a = assemble(extract_candidates(f, fx.t, 1.0));
  EXPECT_THROW(round_to_partial_unitaries(f * Complex(0.1), a.u0, a.v0, a.p, 0.5), PreconditionError);
}

TEST(InverseTheorem, GenuineIrrepAndConstant) {
  const Fixture fx = make("symmetric:4");
  const InverseResult r = inverse_theorem((*fx.t)[3].as_fn(fx.g), fx.t, 1.0);
  EXPECT_EQ(r.rep.m, 3u);
  EXPECT_NEAR(r.correlation, 3.0, 1e-8);
  EXPECT_TRUE(r.m_in_window && r.correlation_ok);
  const InverseResult k = inverse_theorem(MatrixFn::constant(fx.g, CMatrix::identity(2)), fx.t, 1.0);
  EXPECT_EQ(k.rep.m, 2u);
  EXPECT_NEAR(k.correlation, 2.0, 1e-10);
  EXPECT_EQ(k.rep.blocks, (std::vector<std::size_t>{0, 0}));
}

TEST(InverseTheorem, PerturbedQuaternionRegression) {
  const Fixture fx = make("quaternion");
  const MatrixFn f = gen_perturbed_rep(select_representation(*fx.t, "dim:2"), 0.05, 1, 2.0);
  const InverseResult r = inverse_theorem(f, fx.t, 0.8);
  EXPECT_EQ(r.rep.m, 2u);
  EXPECT_GE(r.correlation, std::pow(tau(0.8), 4) * 2);
  EXPECT_NEAR(r.correlation, 1.999714327099, 1e-8);
}

TEST(InverseTheorem, ScalarAbelianDegeneration) {
  Rng rng(4);
  const Fixture fx = make("cyclic:12");
  for (int k = 0; k < 20; ++k) {
    const std::size_t j = static_cast<std::size_t>(k) % 12;
    MatrixFn f = (*fx.t)[j].as_fn(fx.g) + test::random_fn(fx.g, 1, rng, 0.1);
    f *= Complex(1.0 / f.max_op_norm());
    const double u4 = u2_norm4_fourier(f, *fx.t);
    const InverseResult r = inverse_theorem(f, fx.t, auto_c(f, *fx.t));
    ASSERT_EQ(r.rep.m, 1u);
    EXPECT_EQ(r.rep.blocks, (std::vector<std::size_t>{j}));
    EXPECT_GE(r.correlation, std::sqrt(u4) - 1e-12);
    EXPECT_TRUE(r.correlation_ok && r.m_in_window);
  }
}

TEST(InverseTheorem, ClosesWithConverse) {
  const Fixture fx = make("symmetric:4");
  for (double c : {0.5, 0.8, 0.95}) {
    const MatrixFn f = gen_perturbed_rep_u2(select_representation(*fx.t, "sum:3+4"), *fx.t, c, 11);
    const InverseResult r = inverse_theorem(f, fx.t, c);
    EXPECT_TRUE(r.m_in_window);
    EXPECT_TRUE(r.correlation_ok);
    const double m = static_cast<double>(r.rep.m);
    const ConverseResult cv = converse_check(f, r.rep, r.correlation / m, fx.t.get());
    EXPECT_TRUE(cv.precondition);
    EXPECT_TRUE(cv.passed);
    EXPECT_NEAR(cv.u2_norm4, u2_norm4_direct(f), 1e-8 * cv.u2_norm4);
  }
}

TEST(AutoC, JustBelowNormalizedNorm) {
  const Fixture fx = make("symmetric:3");
  const MatrixFn f = (*fx.t)[2].as_fn(fx.g);
  EXPECT_NEAR(auto_c(f, *fx.t), 1.0 - 1e-9, 1e-12);
}

TEST(Converse, Examples) {
  const Fixture fx = make("symmetric:4");
  const MatrixFn rho = (*fx.t)[3].as_fn(fx.g);
  const InverseResult r = inverse_theorem(rho, fx.t, 1.0);
  const ConverseResult a = converse_check(rho, r.rep, 1.0);
  EXPECT_TRUE(a.passed);
  EXPECT_NEAR(a.u2_norm4, 3.0, 1e-10);
  EXPECT_NEAR(a.bound, 3.0, 1e-12);
  const ConverseResult half = converse_check(rho * Complex(0.5), r.rep, 0.5);
  EXPECT_TRUE(half.precondition);
  EXPECT_NEAR(half.correlation, 0.5 * a.correlation, 1e-10);
  EXPECT_NEAR(half.u2_norm4, a.u2_norm4 / 16, 1e-10);
  EXPECT_TRUE(half.passed);
}

TEST(Converse, MonteCarlo) {
  Rng rng(6);
  const Fixture fx = make("dihedral:4");
  const MatrixFn rho = select_representation(*fx.t, "sum:1+4");
  const InverseResult base = inverse_theorem(rho, fx.t, 1.0);
  for (int k = 0; k < 100; ++k) {
    const MatrixFn f = rho + test::random_fn(fx.g, 3, rng, 0.05 * (k % 10));
    const double corr = std::abs(affine_correlation(f, base.rep));
    const double c = std::min(1.0, corr / static_cast<double>(base.rep.m));
    const ConverseResult cv = converse_check(f, base.rep, c);
    EXPECT_TRUE(cv.precondition);
    EXPECT_TRUE(cv.passed);
  }
}
