#include "repstab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repstab/error.hpp"
#include "repstab/linalg.hpp"

namespace repstab {

namespace {

void require_table_group(const MatrixFn& f, const IrrepTable& table, const char* what) {
  if (!table.group || !same_group(f.group(), *table.group)) {
    throw InvalidArgument(std::string(what) + ": function and irrep table use different groups");
  }
}

void require_direct_order(const FiniteGroup& g, const char* what) {
  if (g.order() > kMaxDirectU2Order) {
    throw InvalidArgument(std::string(what) + ": direct sum over |G|^3 quadruples capped at |G| <= " +
                          std::to_string(kMaxDirectU2Order) + ", got " +
                          std::to_string(g.order()));
  }
}

Complex trace_of_product(const CMatrix& a, const CMatrix& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(j, i);
  }
  return s;
}

}  // namespace

void require_complete(const IrrepTable& table) {
  if (!table.group) throw InvalidArgument("irrep table has no group");
  const double residual = verify_schur_delta(*table.group, table.irreps);
  if (residual > 1e-4) {
    throw InvalidArgument("irrep table is incomplete (Schur residual " + std::to_string(residual) +
                          ")");
  }
}

CMatrix fourier_coefficient(const MatrixFn& f, const Irrep& rho) {
  if (rho.matrices.size() != f.size()) {
    throw InvalidArgument("fourier_coefficient: irrep and function have different group orders");
  }
  const std::size_t d = rho.dim;
  const std::size_t n = f.n();
  CMatrix out(n * d, n * d);
  for (std::size_t x = 0; x < f.size(); ++x) {
    const CMatrix& fx = f(static_cast<Element>(x));
    const CMatrix& rx = rho.matrices[x];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const Complex fij = fx(i, j);
        if (fij == Complex(0.0)) continue;
        for (std::size_t r = 0; r < d; ++r) {
          for (std::size_t s = 0; s < d; ++s) out(i * d + r, j * d + s) += fij * std::conj(rx(r, s));
        }
      }
    }
  }
  return out / Complex(static_cast<double>(f.size()));
}

FourierCoeffs fourier_transform(const MatrixFn& f, IrrepTablePtr table) {
  if (!table) throw InvalidArgument("fourier_transform: null irrep table");
  require_table_group(f, *table, "fourier_transform");
  FourierCoeffs out;
  out.n = f.n();
  out.blocks.reserve(table->size());
  for (const auto& rho : table->irreps) out.blocks.push_back(fourier_coefficient(f, rho));
  out.table = std::move(table);
  return out;
}

CMatrix apply_coeff(const MatrixFn& f, const Irrep& rho, const CMatrix& a) {
  if (a.rows() != f.n() || a.cols() != rho.dim) {
    throw InvalidArgument("apply_coeff: A must be " + std::to_string(f.n()) + "x" +
                          std::to_string(rho.dim));
  }
  if (rho.matrices.size() != f.size()) {
    throw InvalidArgument("apply_coeff: irrep and function have different group orders");
  }
  CMatrix out(f.n(), rho.dim);
  for (std::size_t x = 0; x < f.size(); ++x) {
    out += f(static_cast<Element>(x)) * mul_adjoint(a, rho.matrices[x]);
  }
  return out / Complex(static_cast<double>(f.size()));
}

ParsevalSides parseval_check(const MatrixFn& f, const MatrixFn& g, const IrrepTable& table) {
  require_compatible(f, g, "parseval_check");
  require_table_group(f, table, "parseval_check");
  Complex lhs = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    lhs += inner(f(static_cast<Element>(x)), g(static_cast<Element>(x)));
  }
  lhs /= static_cast<double>(f.size());
  Complex rhs = 0.0;
  for (const auto& rho : table.irreps) {
    rhs += static_cast<double>(rho.dim) * inner(fourier_coefficient(f, rho), fourier_coefficient(g, rho));
  }
  return {lhs, rhs};
}

ParsevalSides parseval_norm_check(const MatrixFn& f, const IrrepTable& table) {
  require_table_group(f, table, "parseval_norm_check");
  double lhs = 0.0;
  for (const auto& v : f.values()) lhs += std::pow(hs_norm(v), 2.0);
  lhs /= static_cast<double>(f.size());
  double rhs = 0.0;
  for (const auto& rho : table.irreps) {
    rhs += static_cast<double>(rho.dim) * std::pow(hs_norm(fourier_coefficient(f, rho)), 2.0);
  }
  return {lhs, rhs};
}

MatrixFn convolve(const MatrixFn& f, const MatrixFn& g) {
  require_compatible(f, g, "convolve");
  const auto& grp = f.group();
  const auto order = static_cast<Element>(grp.order());
  std::vector<CMatrix> out(order, CMatrix(f.n(), f.n()));
  for (Element x = 0; x < order; ++x) {
    for (Element y = 0; y < order; ++y) out[x] += f(y) * g(grp.mul(grp.inverse(y), x));
    out[x] /= Complex(static_cast<double>(order));
  }
  return MatrixFn(f.group_ptr(), f.n(), std::move(out));
}

double convolution_check(const MatrixFn& f, const MatrixFn& g, const IrrepTable& table) {
  require_table_group(f, table, "convolution_check");
  const MatrixFn fg = convolve(f, g);
  double worst = 0.0;
  for (const auto& rho : table.irreps) {
    const CMatrix lhs = fourier_coefficient(fg, rho);
    const CMatrix rhs = fourier_coefficient(f, rho) * fourier_coefficient(g, rho);
    worst = std::max(worst, max_abs_diff(lhs, rhs));
  }
  return worst;
}

MatrixFn invert(const FourierCoeffs& coeffs) {
  if (!coeffs.table) throw InvalidArgument("invert: coefficients carry no irrep table");
  const IrrepTable& table = *coeffs.table;
  require_complete(table);
  if (coeffs.blocks.size() != table.size()) {
    throw InvalidArgument("invert: coefficient count does not match the irrep table");
  }
  const auto& g = *table.group;
  const std::size_t n = coeffs.n;
  std::vector<CMatrix> out;
  out.reserve(g.order());
  for (Element x = 0; x < static_cast<Element>(g.order()); ++x) {
    CMatrix fx(n, n);
    for (std::size_t k = 0; k < table.size(); ++k) {
      const Irrep& rho = table[k];
      const CMatrix r = rho.matrices[g.inverse(x)].conj();
      fx += static_cast<double>(rho.dim) *
            partial_trace_blocks(block_scalar_mul(r, coeffs.blocks[k]), n, rho.dim);
    }
    out.push_back(std::move(fx));
  }
  return MatrixFn(table.group, n, std::move(out));
}

Complex quad_inner(const MatrixFn& f1, const MatrixFn& f2, const MatrixFn& f3, const MatrixFn& f4) {
  require_compatible(f1, f2, "quad_inner");
  require_compatible(f1, f3, "quad_inner");
  require_compatible(f1, f4, "quad_inner");
  const auto& g = f1.group();
  require_direct_order(g, "quad_inner");
  const std::size_t order = g.order();
  std::vector<CMatrix> a(order * order);
  std::vector<CMatrix> b(order * order);
  for (Element x = 0; x < static_cast<Element>(order); ++x) {
    for (Element y = 0; y < static_cast<Element>(order); ++y) {
      a[x * order + y] = mul_adjoint(f1(x), f2(y));
      b[x * order + y] = mul_adjoint(f3(x), f4(y));
    }
  }
  Complex sum = 0.0;
  g.for_each_quadruple([&](Element x, Element y, Element z, Element w) {
    sum += trace_of_product(a[x * order + y], b[z * order + w]);
  });
  const double count = static_cast<double>(order) * static_cast<double>(order) * static_cast<double>(order);
  return sum / count;
}

double u2_norm4_direct(const MatrixFn& f) {
  const Complex v = quad_inner(f, f, f, f);
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
    throw Error("u2_norm4_direct: imaginary residual " + std::to_string(v.imag()) +
                " exceeds 1e-9");
  }
  return v.real();
}

double u2_norm4_fourier(const FourierCoeffs& coeffs, bool normalized) {
  if (!coeffs.table) throw InvalidArgument("u2_norm4_fourier: coefficients carry no irrep table");
  require_complete(*coeffs.table);
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    s += static_cast<double>((*coeffs.table)[k].dim) * box_norm4(coeffs.blocks[k]);
  }
  return normalized ? s / static_cast<double>(coeffs.n) : s;
}

double u2_norm4_fourier(const MatrixFn& f, const IrrepTable& table, bool normalized) {
  require_table_group(f, table, "u2_norm4_fourier");
  require_complete(table);
  double s = 0.0;
  for (const auto& rho : table.irreps) {
    s += static_cast<double>(rho.dim) * box_norm4(fourier_coefficient(f, rho));
  }
  return normalized ? s / static_cast<double>(f.n()) : s;
}

double u2_norm_from4(double norm4) { return std::pow(std::max(norm4, 0.0), 0.25); }

}  // namespace repstab
