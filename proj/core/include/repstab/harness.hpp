#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "repstab/inverse.hpp"
#include "repstab/io.hpp"
#include "repstab/irreps.hpp"
#include "repstab/matrix_fn.hpp"
#include "repstab/stability.hpp"

namespace repstab {

/// x -> rho(x) exp(i s H_x) with seeded Hermitian H_x of unit normalized HS
/// norm, s tuned so that the multiplicative defect in ||.||'_p is within 5%
/// of epsilon. Throws PreconditionError when epsilon is out of reach.
MatrixFn gen_perturbed_rep(const MatrixFn& rho, double epsilon, std::uint64_t seed, double p = 2.0);

/// Same family, with s tuned so that ||f||_{U^2}^4 / n lies in
/// [c, c + 0.025]. Requires a table for the Fourier-side U^2 norm.
MatrixFn gen_perturbed_rep_u2(const MatrixFn& rho, const IrrepTable& table, double c,
                              std::uint64_t seed);

/// x -> pi rho(x) iota, dropping the last coordinate of an irreducible rho
/// of dimension at least 2.
MatrixFn gen_projection_example(const MatrixFn& rho);

/// Seeded Gaussian matrices, each rescaled to operator norm in [1/2, 1].
MatrixFn gen_random_bounded(GroupPtr group, std::size_t n, std::uint64_t seed);

/// Irrep selector grammar: index:<k> | dim:<d> | sum:<k1>+<k2>+... | largest.
MatrixFn select_representation(const IrrepTable& table, const std::string& selector);
/// The irrep index for single-irrep selectors; InvalidArgument for sums.
std::size_t select_irrep_index(const IrrepTable& table, const std::string& selector);

struct ExperimentConfig {
  std::string group = "quaternion";
  /// perturbed | projection | random-bounded | file
  std::string construction = "perturbed";
  std::string irrep = "largest";
  double epsilon = 0.0;
  double p = 2.0;
  std::optional<std::uint64_t> seed;
  /// stabilize | stabilize-affine | inverse
  std::string pipeline = "stabilize";
  /// Inverse pipeline threshold; taken from the U^2 norm when absent.
  std::optional<double> c;
  /// Dimension for random-bounded inputs.
  std::size_t n = 2;
  /// Input path for the file construction.
  std::string file;
  /// Run past the theorem's defect range (defaults to true for projection).
  std::optional<bool> force;
  std::uint64_t irrep_seed = 0;
  /// Report path; the CSV goes next to it with a .csv extension.
  std::string output;

  static ExperimentConfig from_json(const Json& j);
  Json to_json() const;
  /// Throws InvalidArgument on unknown names or a missing seed.
  void validate() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string group_name;
  std::size_t order = 0;
  std::size_t n = 0;
  double defect = 0.0;  // multiplicative, in ||.||'_p (relaxed for non-unitary inputs)
  std::optional<StabilityReport> stability;
  std::optional<InverseResult> inverse;
  std::optional<ConverseResult> converse;
  std::vector<double> distances;
  std::vector<double> bounds;
  std::vector<BoundCheck> checks;
  bool refused = false;
  std::string error;
  double error_measured = 0.0;
  double error_limit = 0.0;
  bool passed = false;
  /// Not serialized, so reports stay byte-identical across runs.
  double wall_seconds = 0.0;

  Json to_json() const;
  /// element_index,distance,bound
  std::string to_csv() const;
};

/// Generates the input, runs the pipeline and, when config.output is set,
/// writes the JSON report and the CSV. Precondition failures come back as a
/// refused report carrying the measured value and the limit.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Runs independent experiments on up to worker_count() threads; results
/// keep the input order and files are written one at a time.
std::vector<ExperimentReport> run_batch(const std::vector<ExperimentConfig>& configs);

/// A single config object, an array, or {"experiments": [...]}.
std::vector<ExperimentConfig> configs_from_json(const Json& j);

/// path with its extension replaced by .csv (appended when there is none).
std::string csv_path_for(const std::string& json_path);

}  // namespace repstab
