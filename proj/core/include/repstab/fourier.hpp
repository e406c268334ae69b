#pragma once

#include <cstddef>
#include <vector>

#include "repstab/cmatrix.hpp"
#include "repstab/irreps.hpp"
#include "repstab/matrix_fn.hpp"

namespace repstab {

/// Largest group order accepted by the O(|G|^3) direct U^2 sums.
inline constexpr std::size_t kMaxDirectU2Order = 60;

/// Fourier coefficients of an n-dimensional function: for each irrep rho of
/// the table, the (n * n_rho) square matrix E_x f(x) (x) conj(rho(x)).
/// Row index (i, r) of a coefficient is stored at i * n_rho + r.
struct FourierCoeffs {
  IrrepTablePtr table;
  std::size_t n = 0;
  std::vector<CMatrix> blocks;

  const CMatrix& operator[](std::size_t i) const { return blocks[i]; }
  std::size_t size() const noexcept { return blocks.size(); }
};

FourierCoeffs fourier_transform(const MatrixFn& f, IrrepTablePtr table);
/// \hat f(rho) for a single irrep.
CMatrix fourier_coefficient(const MatrixFn& f, const Irrep& rho);

/// E_x f(x) A rho(x)^*, the action of \hat f(rho) on an n x n_rho matrix A.
CMatrix apply_coeff(const MatrixFn& f, const Irrep& rho, const CMatrix& a);

struct ParsevalSides {
  Complex lhs;
  Complex rhs;
};

/// E_x tr(f(x) g(x)^*) and sum_rho n_rho tr(\hat f(rho) \hat g(rho)^*).
ParsevalSides parseval_check(const MatrixFn& f, const MatrixFn& g, const IrrepTable& table);
/// E_x ||f(x)||_HS^2 and sum_rho n_rho ||\hat f(rho)||_HS^2.
ParsevalSides parseval_norm_check(const MatrixFn& f, const IrrepTable& table);

/// (f * g)(x) = E_y f(y) g(y^{-1} x).
MatrixFn convolve(const MatrixFn& f, const MatrixFn& g);
/// max_rho max-abs(\hat{f*g}(rho) - \hat f(rho) \hat g(rho)).
double convolution_check(const MatrixFn& f, const MatrixFn& g, const IrrepTable& table);

/// f(x) = sum_rho n_rho tr_rho(conj(rho(x^{-1})) . \hat f(rho)).
/// Throws InvalidArgument when the table is incomplete.
MatrixFn invert(const FourierCoeffs& coeffs);

/// E over x y^{-1} z w^{-1} = e of tr(f(x) f(y)^* f(z) f(w)^*). Requires
/// |G| <= kMaxDirectU2Order; throws Error if the imaginary part exceeds 1e-9.
double u2_norm4_direct(const MatrixFn& f);
/// sum_rho n_rho ||\hat f(rho)||_box^4, divided by n when `normalized`.
double u2_norm4_fourier(const MatrixFn& f, const IrrepTable& table, bool normalized = false);
double u2_norm4_fourier(const FourierCoeffs& coeffs, bool normalized = false);
/// Fourth root of a U^2 fourth power, clamped at zero.
double u2_norm_from4(double norm4);

/// [f1, f2, f3, f4] = E over x y^{-1} z w^{-1} = e of
/// tr(f1(x) f2(y)^* f3(z) f4(w)^*).
Complex quad_inner(const MatrixFn& f1, const MatrixFn& f2, const MatrixFn& f3, const MatrixFn& f4);

/// Throws InvalidArgument unless the table's Schur residual is below 1e-4.
void require_complete(const IrrepTable& table);

}  // namespace repstab
