#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "repstab/error.hpp"
#include "repstab/fourier.hpp"
#include "repstab/linalg.hpp"
#include "test_support.hpp"

using namespace repstab;
using repstab::test::Rng;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

double max_diff(const MatrixFn& a, const MatrixFn& b) {
  double d = 0.0;
  for (Element x = 0; x < a.size(); ++x) d = std::max(d, max_abs_diff(a(x), b(x)));
  return d;
}

}  // namespace

TEST(Fourier, ConstantIdentity) {
  const GroupPtr g = symmetric_group(3);
  const IrrepTablePtr t = decompose_irreps(g);
  const FourierCoeffs fc = fourier_transform(MatrixFn::constant(g, CMatrix::identity(2)), t);
  EXPECT_LT(max_abs_diff(fc[0], CMatrix::identity(2)), 1e-14);
  for (std::size_t i = 1; i < fc.size(); ++i) EXPECT_LT(hs_norm(fc[i]), 1e-14);
}

TEST(Fourier, ScalarCharacterHasUnitCoefficient) {
  const GroupPtr g = cyclic_group(6);
  const IrrepTablePtr t = decompose_irreps(g);
  for (std::size_t k = 0; k < t->size(); ++k) {
    const FourierCoeffs fc = fourier_transform((*t)[k].as_fn(g), t);
    for (std::size_t j = 0; j < t->size(); ++j) {
      EXPECT_NEAR(std::abs(fc[j](0, 0) - Complex(j == k ? 1.0 : 0.0)), 0.0, 1e-12);
    }
  }
}

TEST(Fourier, OperatorNormBoundedByInput) {
  Rng rng(1);
  const GroupPtr g = quaternion_group();
  const IrrepTablePtr t = decompose_irreps(g);
  for (int k = 0; k < 20; ++k) {
    const MatrixFn f = test::random_contraction_fn(g, 2, rng);
    const FourierCoeffs fc = fourier_transform(f, t);
    for (std::size_t i = 0; i < fc.size(); ++i) EXPECT_LE(op_norm(fc[i]), f.max_op_norm() + 1e-9);
  }
}

TEST(Fourier, ApplyCoeffMatchesFlattenedProduct) {
  Rng rng(2);
  const GroupPtr g = symmetric_group(4);
  const IrrepTablePtr t = decompose_irreps(g);
  const MatrixFn f = test::random_fn(g, 2, rng);
  for (const Irrep& rho : t->irreps) {
    const CMatrix a = test::random_matrix(2, rho.dim, rng);
    const CMatrix direct = apply_coeff(f, rho, a);
    const CMatrix coeff = fourier_coefficient(f, rho);
    const CMatrix vec = coeff * reshape(a.entries(), 2 * rho.dim, 1);
    EXPECT_LT(max_abs_diff(direct, reshape(vec.entries(), 2, rho.dim)), 1e-10);
  }
  const Irrep& rho = (*t)[3];
  const CMatrix id = apply_coeff(rho.as_fn(g), rho, CMatrix::identity(rho.dim));
  EXPECT_LT(max_abs_diff(id, CMatrix::identity(rho.dim)), 1e-12);
  EXPECT_EQ(hs_norm(apply_coeff(MatrixFn::zero(g, 3), rho, CMatrix(3, 3))), 0.0);
  EXPECT_THROW(apply_coeff(f, rho, CMatrix(3, 3)), InvalidArgument);
}

TEST(Fourier, ParsevalExamples) {
  const GroupPtr g = dihedral_group(4);
  const IrrepTablePtr t = decompose_irreps(g);
  const MatrixFn id = MatrixFn::constant(g, CMatrix::identity(3));
  const ParsevalSides s = parseval_check(id, id, *t);
  EXPECT_NEAR(std::abs(s.lhs - 3.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.rhs - 3.0), 0.0, 1e-12);
  Rng rng(3);
  const ParsevalSides z = parseval_check(test::random_fn(g, 3, rng), MatrixFn::zero(g, 3), *t);
  EXPECT_EQ(z.lhs, Complex(0.0));
  EXPECT_EQ(z.rhs, Complex(0.0));
}

TEST(Fourier, ConvolutionExamples) {
  Rng rng(4);
  const GroupPtr g = symmetric_group(3);
  const MatrixFn h = test::random_fn(g, 2, rng);
  const MatrixFn id = MatrixFn::constant(g, CMatrix::identity(2));
  CMatrix mean(2, 2);
  for (const CMatrix& v : h.values()) mean += v;
  mean /= Complex(6.0);
  EXPECT_LT(max_diff(convolve(id, h), MatrixFn::constant(g, mean)), 1e-12);
  MatrixFn delta = MatrixFn::zero(g, 2);
  delta(0) = CMatrix::identity(2) * Complex(6.0);
  EXPECT_LT(max_diff(convolve(delta, h), h), 1e-12);
}

TEST(Fourier, InversionExamples) {
  const GroupPtr g = quaternion_group();
  const IrrepTablePtr t = decompose_irreps(g);
  const MatrixFn id = MatrixFn::constant(g, CMatrix::identity(2));
  EXPECT_LT(max_diff(invert(fourier_transform(id, t)), id), 1e-12);
  Rng rng(5);
  const CMatrix m = test::random_matrix(2, 2, rng);
  FourierCoeffs fc = fourier_transform(MatrixFn::zero(g, 2), t);
  fc.blocks[0] = m;
  EXPECT_LT(max_diff(invert(fc), MatrixFn::constant(g, m)), 1e-12);
}

TEST(Fourier, InversionRejectsIncompleteTable) {
  const GroupPtr g = symmetric_group(3);
  auto partial = std::make_shared<IrrepTable>(*decompose_irreps(g));
  partial->irreps.pop_back();
  FourierCoeffs fc;
  fc.table = partial;
  fc.n = 1;
  fc.blocks = {CMatrix(1, 1), CMatrix(1, 1)};
  EXPECT_THROW(invert(fc), InvalidArgument);
}

TEST(Fourier, IdentitySuiteOnRandomFunctions) {
  Rng rng(6);
  for (const char* spec : {"cyclic:5", "symmetric:3", "dihedral:4", "quaternion"}) {
    const GroupPtr g = build_group(spec);
    const IrrepTablePtr t = decompose_irreps(g);
    for (std::size_t n = 1; n <= 3; ++n) {
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        const MatrixFn f = test::random_fn(g, n, rng);
        const MatrixFn h = test::random_fn(g, n, rng);
        const ParsevalSides p1 = parseval_check(f, h, *t);
        const ParsevalSides p2 = parseval_norm_check(f, *t);
        const FourierCoeffs fc = fourier_transform(f, t);
        worst = std::max({worst, rel(p1.lhs, p1.rhs), rel(p2.lhs, p2.rhs), convolution_check(f, h, *t),
                          max_diff(invert(fc), f) / std::max(1.0, f.max_op_norm()),
                          rel(u2_norm4_direct(f), u2_norm4_fourier(fc))});
      }
      EXPECT_LT(worst, 1e-8) << spec << " n=" << n;
    }
  }
}

TEST(U2, UnitaryRepresentationHasNormN) {
  const GroupPtr g = symmetric_group(4);
  const IrrepTablePtr t = decompose_irreps(g);
  for (const Irrep& rho : t->irreps) {
    const MatrixFn f = rho.as_fn(g);
    EXPECT_NEAR(u2_norm4_direct(f), static_cast<double>(rho.dim), 1e-10);
    EXPECT_NEAR(u2_norm4_fourier(f, *t), static_cast<double>(rho.dim), 1e-10);
    EXPECT_NEAR(u2_norm4_fourier(f, *t, true), 1.0, 1e-10);
  }
  const MatrixFn id = MatrixFn::constant(g, CMatrix::identity(4));
  EXPECT_NEAR(u2_norm4_fourier(id, *t), 4.0, 1e-12);
  EXPECT_EQ(u2_norm4_direct(MatrixFn::zero(g, 2)), 0.0);
}

TEST(U2, ScalarAbelianIsFourthMomentOfCoefficients) {
  Rng rng(7);
  for (std::size_t order : {5u, 8u, 12u}) {
    const GroupPtr g = cyclic_group(order);
    const IrrepTablePtr t = decompose_irreps(g);
    for (int k = 0; k < 10; ++k) {
      const MatrixFn f = test::random_contraction_fn(g, 1, rng);
      const FourierCoeffs fc = fourier_transform(f, t);
      double s4 = 0.0, best = 0.0;
      for (std::size_t i = 0; i < fc.size(); ++i) {
        const double a = std::abs(fc[i](0, 0));
        s4 += a * a * a * a;
        best = std::max(best, a);
      }
      const double u4 = u2_norm4_direct(f);
      EXPECT_NEAR(u4, s4, 1e-12);
      EXPECT_GE(best * best, u4 - 1e-12);
    }
  }
}

TEST(U2, DirectPathIsCapped) {
  const MatrixFn f = MatrixFn::zero(cyclic_group(61), 1);
  EXPECT_THROW(u2_norm4_direct(f), InvalidArgument);
}

TEST(QuadInner, Properties) {
  Rng rng(8);
  const GroupPtr g = dihedral_group(3);
  for (int k = 0; k < 30; ++k) {
    const MatrixFn f1 = test::random_fn(g, 2, rng);
    const MatrixFn f2 = test::random_fn(g, 2, rng);
    const MatrixFn f3 = test::random_fn(g, 2, rng);
    const MatrixFn f4 = test::random_fn(g, 2, rng);
    const Complex self = quad_inner(f1, f1, f1, f1);
    EXPECT_NEAR(self.imag(), 0.0, 1e-10);
    EXPECT_NEAR(self.real(), u2_norm4_direct(f1), 1e-10 * self.real());
    const Complex a = quad_inner(f1, f2, f3, f4);
    const double scale = 1e-10 * std::max(1.0, std::abs(a));
    EXPECT_LT(std::abs(a - std::conj(quad_inner(f2, f1, f4, f3))), scale);
    EXPECT_LT(std::abs(a - quad_inner(f3, f4, f1, f2)), scale);
    double prod = 1.0;
    for (const MatrixFn* f : {&f1, &f2, &f3, &f4}) prod *= u2_norm_from4(u2_norm4_direct(*f));
    EXPECT_LE(std::abs(a), prod + 1e-9);
    const Complex mixed = quad_inner(f1, f2, f2, f1);
    EXPECT_NEAR(mixed.imag(), 0.0, 1e-10 * mixed.real());
    EXPECT_GE(mixed.real(), 0.0);
    EXPECT_LE(mixed.real(), std::sqrt(u2_norm4_direct(f1) * u2_norm4_direct(f2)) + 1e-9);
  }
}

TEST(U2, TriangleInequality) {
  Rng rng(9);
  const GroupPtr g = symmetric_group(3);
  const IrrepTablePtr t = decompose_irreps(g);
  for (int k = 0; k < 100; ++k) {
    const MatrixFn f = test::random_fn(g, 2, rng);
    const MatrixFn h = test::random_fn(g, 2, rng, 0.1 + 0.02 * k);
    const double lhs = u2_norm_from4(u2_norm4_fourier(f + h, *t));
    const double rhs = u2_norm_from4(u2_norm4_fourier(f, *t)) + u2_norm_from4(u2_norm4_fourier(h, *t));
    EXPECT_LE(lhs, rhs + 1e-9);
  }
}

TEST(Fourier, GroupMismatchRejected) {
  const IrrepTablePtr t = decompose_irreps(cyclic_group(4));
  EXPECT_THROW(fourier_transform(MatrixFn::zero(cyclic_group(5), 1), t), InvalidArgument);
}
