#include <random>

#include <benchmark/benchmark.h>

#include "repstab/fourier.hpp"
#include "repstab/harness.hpp"
#include "repstab/irreps.hpp"
#include "repstab/linalg.hpp"
#include "repstab/stability.hpp"
#include "repstab/uniqueness.hpp"

using namespace repstab;

namespace {

CMatrix gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = Complex(d(rng), d(rng));
  return a;
}

void BM_Svd(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const CMatrix a = gaussian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(svd(a));
}
BENCHMARK(BM_Svd)->RangeMultiplier(2)->Range(4, 64);

void BM_DecomposeIrreps(benchmark::State& state, const char* spec) {
  const GroupPtr g = build_group(spec);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_irreps(g));
}
BENCHMARK_CAPTURE(BM_DecomposeIrreps, quaternion, "quaternion");
BENCHMARK_CAPTURE(BM_DecomposeIrreps, symmetric4, "symmetric:4");
BENCHMARK_CAPTURE(BM_DecomposeIrreps, dihedral6, "dihedral:6");

void BM_FourierTransform(benchmark::State& state) {
  const GroupPtr g = build_group("symmetric:4");
  const IrrepTablePtr t = decompose_irreps(g);
  const MatrixFn f = gen_random_bounded(g, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_transform(f, t));
}
BENCHMARK(BM_FourierTransform)->Arg(1)->Arg(2)->Arg(4);

void BM_U2Direct(benchmark::State& state) {
  const GroupPtr g = build_group("symmetric:4");
  const MatrixFn f = gen_random_bounded(g, 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(u2_norm4_direct(f));
}
BENCHMARK(BM_U2Direct);

void BM_Defect(benchmark::State& state) {
  const GroupPtr g = build_group("symmetric:4");
  const IrrepTablePtr t = decompose_irreps(g);
  const MatrixFn f = gen_perturbed_rep(select_representation(*t, "sum:2+3"), 0.02, 1, 2.0);
  const Flavor flavor = state.range(0) == 0 ? Flavor::kMultiplicative : Flavor::kAffine;
  for (auto _ : state) benchmark::DoNotOptimize(defect(f, flavor, 2.0));
}
BENCHMARK(BM_Defect)->Arg(0)->Arg(1);

void BM_Stabilize(benchmark::State& state, const char* spec, const char* selector) {
  const GroupPtr g = build_group(spec);
  const IrrepTablePtr t = decompose_irreps(g);
  const MatrixFn f = gen_perturbed_rep(select_representation(*t, selector), 0.02, 1, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(stabilize(f, t, 2.0));
}
BENCHMARK_CAPTURE(BM_Stabilize, quaternion, "quaternion", "dim:2");
BENCHMARK_CAPTURE(BM_Stabilize, symmetric4, "symmetric:4", "sum:2+3");

void BM_Uniqueness(benchmark::State& state) {
  const GroupPtr g = build_group("symmetric:4");
  const IrrepTablePtr t = decompose_irreps(g);
  const MatrixFn rho = select_representation(*t, "sum:0+1+2+3+4");
  std::mt19937_64 rng(2);
  CMatrix h = gaussian(rho.n(), rng);
  h = (h + h.adjoint()) * Complex(0.5);
  const CMatrix w = expm_i_hermitian(h, 0.001);
  const MatrixFn sigma = sandwich(w, rho, w.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(eps_unitary_intertwiner(rho, sigma, 2.0));
}
BENCHMARK(BM_Uniqueness);

}  // namespace

BENCHMARK_MAIN();
