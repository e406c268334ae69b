#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "repstab/group.hpp"
#include "repstab/irreps.hpp"
#include "repstab/linalg.hpp"

using namespace repstab;

namespace {

std::vector<std::size_t> dims(const IrrepTable& t) {
  std::vector<std::size_t> d;
  for (const Irrep& r : t.irreps) d.push_back(r.dim);
  return d;
}

double character_distance(const Irrep& a, const Irrep& b) {
  double s = 0.0;
  for (std::size_t x = 0; x < a.character.size(); ++x) s += std::norm(a.character[x] - b.character[x]);
  return std::sqrt(s);
}

void expect_valid_table(const IrrepTable& t) {
  const FiniteGroup& g = *t.group;
  EXPECT_EQ(t.dimension_square_sum(), g.order());
  EXPECT_LT(verify_schur_delta(g, t.irreps), 1e-6);
  EXPECT_LT(t.certificate.character_orthogonality, 1e-6);
  EXPECT_EQ(t[0].dim, 1u);
  for (const Complex& z : t[0].character) EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-12);
  const auto n = static_cast<Element>(g.order());
  for (const Irrep& r : t.irreps) {
    EXPECT_LT(max_abs_diff(r(0), CMatrix::identity(r.dim)), 1e-10);
    double hom = 0.0, uni = 0.0, chi = 0.0;
    for (Element x = 0; x < n; ++x) {
      uni = std::max(uni, partial_unitary_residual(r(x)));
      chi = std::max(chi, std::abs(r(x).trace() - r.character[x]));
      for (Element y = 0; y < n; ++y) hom = std::max(hom, max_abs_diff(r(x) * r(y), r(g.mul(x, y))));
    }
    EXPECT_LT(hom, 1e-9);
    EXPECT_LT(uni, 1e-9);
    EXPECT_LT(chi, 1e-12);
    EXPECT_NEAR(character_inner(r.character, r.character).real(), 1.0, 1e-6);
  }
}

}  // namespace

TEST(RegularRep, Basics) {
  const GroupPtr g = cyclic_group(3);
  const MatrixFn r = regular_representation(g);
  EXPECT_EQ(r(0), CMatrix::identity(3));
  // R(1) e_g = e_{1+g}: a cyclic shift.
  for (Element j = 0; j < 3; ++j) EXPECT_EQ(r(1)((j + 1) % 3, j), Complex(1.0));
  EXPECT_NEAR(hs_norm(r(1)), std::sqrt(3.0), 1e-15);
  EXPECT_EQ(max_homomorphism_residual(regular_representation(symmetric_group(3))), 0.0);
}

TEST(Irreps, CyclicGroupsHaveCharacters) {
  for (std::size_t n : {1u, 2u, 5u, 12u}) {
    const IrrepTablePtr t = decompose_irreps(cyclic_group(n));
    EXPECT_EQ(t->size(), n);
    for (const Irrep& r : t->irreps) EXPECT_EQ(r.dim, 1u);
    expect_valid_table(*t);
  }
}

TEST(Irreps, SymmetricThree) {
  const IrrepTablePtr t = decompose_irreps(symmetric_group(3));
  EXPECT_EQ(dims(*t), (std::vector<std::size_t>{1, 1, 2}));
  expect_valid_table(*t);
}

TEST(Irreps, Quaternion) {
  const IrrepTablePtr t = decompose_irreps(quaternion_group());
  EXPECT_EQ(dims(*t), (std::vector<std::size_t>{1, 1, 1, 1, 2}));
  expect_valid_table(*t);
}

TEST(Irreps, SymmetricFour) {
  const IrrepTablePtr t = decompose_irreps(symmetric_group(4));
  EXPECT_EQ(dims(*t), (std::vector<std::size_t>{1, 1, 2, 3, 3}));
  expect_valid_table(*t);
}

TEST(Irreps, AllBuiltinsCertify) {
  for (const char* spec : {"dihedral:4", "dihedral:5", "dihedral:6", "product(symmetric:3,cyclic:2)",
                           "product(quaternion,cyclic:3)", "symmetric:5"}) {
    SCOPED_TRACE(spec);
    expect_valid_table(*decompose_irreps(build_group(spec)));
  }
}

TEST(Irreps, DihedralDimensions) {
  EXPECT_EQ(dims(*decompose_irreps(dihedral_group(4))), (std::vector<std::size_t>{1, 1, 1, 1, 2}));
  EXPECT_EQ(dims(*decompose_irreps(dihedral_group(5))), (std::vector<std::size_t>{1, 1, 2, 2}));
}

TEST(Irreps, SchurDeltaDetectsMissingIrrep) {
  const IrrepTablePtr t = decompose_irreps(symmetric_group(4));
  for (std::size_t drop = 0; drop < t->size(); ++drop) {
    std::vector<Irrep> partial;
    for (std::size_t i = 0; i < t->size(); ++i) {
      if (i != drop) partial.push_back((*t)[i]);
    }
    const double nd = static_cast<double>((*t)[drop].dim);
    EXPECT_GE(verify_schur_delta(*t->group, partial), nd * nd - 1e-9);
  }
  const IrrepTablePtr c2 = decompose_irreps(cyclic_group(2));
  EXPECT_LT(verify_schur_delta(*c2->group, c2->irreps), 1e-14);
}

TEST(Irreps, MatrixElementOrthogonality) {
  const IrrepTablePtr s3 = decompose_irreps(symmetric_group(3));
  EXPECT_NEAR(std::abs(matrix_element_average((*s3)[0], 0, 0, (*s3)[0], 0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(matrix_element_average((*s3)[0], 0, 0, (*s3)[1], 0, 0)), 0.0, 1e-12);
  const Irrep& two = (*s3)[2];
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_NEAR(std::abs(matrix_element_average(two, k, j, two, k, j) - 0.5), 0.0, 1e-12);
    }
  }
  EXPECT_NEAR(std::abs(matrix_element_average(two, 0, 1, two, 1, 0)), 0.0, 1e-12);
  for (const char* spec : {"symmetric:3", "quaternion", "symmetric:4", "dihedral:6"}) {
    EXPECT_LT(matrix_element_orthogonality_check(*decompose_irreps(build_group(spec))), 1e-8);
  }
}

TEST(Irreps, DeterministicForFixedSeed) {
  const GroupPtr g = symmetric_group(4);
  const IrrepTablePtr a = decompose_irreps(g, 42);
  const IrrepTablePtr b = decompose_irreps(g, 42);
  ASSERT_EQ(a->size(), b->size());
  for (std::size_t i = 0; i < a->size(); ++i) EXPECT_EQ((*a)[i].matrices, (*b)[i].matrices);
}

TEST(Irreps, SeedsAgreeUpToEquivalence) {
  for (const char* spec : {"symmetric:4", "quaternion", "dihedral:6"}) {
    const GroupPtr g = build_group(spec);
    const IrrepTablePtr a = decompose_irreps(g, 1);
    const IrrepTablePtr b = decompose_irreps(g, 99);
    ASSERT_EQ(a->size(), b->size());
    for (const Irrep& r : a->irreps) {
      double best = 1e9;
      for (const Irrep& s : b->irreps) best = std::min(best, character_distance(r, s));
      EXPECT_LT(best, 1e-6);
    }
  }
}
