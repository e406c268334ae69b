#include "repstab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "repstab/error.hpp"
#include "repstab/fourier.hpp"
#include "repstab/linalg.hpp"
#include "repstab/parallel.hpp"

namespace repstab {

namespace {

constexpr double kMaxPerturbation = 64.0;
constexpr int kMaxBisections = 200;

CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix h(n, n);
  for (auto& z : h.entries()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  h = (h + h.adjoint()) * Complex(0.5, 0.0);
  const double norm = normalized_norm(h, 2.0);
  return norm > 0.0 ? h * Complex(1.0 / norm, 0.0) : CMatrix::identity(n);
}

class PerturbationFamily {
 public:
  PerturbationFamily(const MatrixFn& rho, std::uint64_t seed) : rho_(rho) {
    std::mt19937_64 rng(seed);
    h_.reserve(rho.size());
    for (std::size_t x = 0; x < rho.size(); ++x) h_.push_back(random_hermitian(rho.n(), rng));
  }

  MatrixFn at(double s) const {
    std::vector<CMatrix> values;
    values.reserve(h_.size());
    for (Element x = 0; x < static_cast<Element>(h_.size()); ++x) {
      values.push_back(rho_(x) * expm_i_hermitian(h_[x], s));
    }
    return MatrixFn(rho_.group_ptr(), rho_.n(), std::move(values));
  }

 private:
  const MatrixFn& rho_;
  std::vector<CMatrix> h_;
};

// Finds s with progress(s) in [lo, hi], where progress(0) < lo and progress
// is continuous. Doubling locates a bracket, bisection narrows it.
MatrixFn tune(const PerturbationFamily& family, const std::function<double(const MatrixFn&)>& progress,
              double lo, double hi, const char* what) {
  double s_lo = 0.0;
  double s_hi = 1e-3;
  MatrixFn f = family.at(s_hi);
  double v = progress(f);
  while (v < lo) {
    s_lo = s_hi;
    s_hi *= 2.0;
    if (s_hi > kMaxPerturbation) {
      throw PreconditionError(std::string(what) + ": target out of reach of the perturbation", v, lo);
    }
    f = family.at(s_hi);
    v = progress(f);
  }
  for (int i = 0; i < kMaxBisections && (v < lo || v > hi); ++i) {
    const double mid = 0.5 * (s_lo + s_hi);
    f = family.at(mid);
    v = progress(f);
    if (v < lo) {
      s_lo = mid;
    } else if (v > hi) {
      s_hi = mid;
    }
  }
  if (v < lo || v > hi) throw ConvergenceError(std::string(what) + ": bisection did not converge");
  return f;
}

void require_single(const std::string& selector) {
  if (selector.rfind("sum:", 0) == 0) {
    throw InvalidArgument("selector '" + selector + "' names a sum, a single irrep is required");
  }
}

std::size_t parse_index(const std::string& text, const std::string& selector) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad irrep selector '" + selector + "'");
  }
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_unitary(const MatrixFn& f) { return f.max_unitarity_residual() <= kUnitaryTolerance; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

void write_outputs(const ExperimentReport& r) {
  if (r.config.output.empty()) return;
  write_json(r.config.output, r.to_json());
  write_text(csv_path_for(r.config.output), r.to_csv());
}

template <typename T>
void read_optional(const Json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

ExperimentReport run_unwritten(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.config = cfg;
  cfg.validate();
  try {
    MatrixFn f;
    GroupPtr group;
    if (cfg.construction == "file") {
      f = load_matrix_fn(cfg.file);
      group = f.group_ptr();
    } else {
      group = build_group(cfg.group);
    }
    const IrrepTablePtr table = decompose_irreps(group, cfg.irrep_seed);
    if (cfg.construction == "perturbed") {
      f = gen_perturbed_rep(select_representation(*table, cfg.irrep), cfg.epsilon, *cfg.seed, cfg.p);
    } else if (cfg.construction == "projection") {
      f = gen_projection_example((*table)[select_irrep_index(*table, cfg.irrep)].as_fn(group));
    } else if (cfg.construction == "random-bounded") {
      f = gen_random_bounded(group, cfg.n, *cfg.seed);
    }
    r.group_name = group->name();
    r.order = group->order();
    r.n = f.n();
    const bool unitary = is_unitary(f);
    r.defect = defect(f, Flavor::kMultiplicative, cfg.p, !unitary);

    if (cfg.pipeline == "inverse") {
      const double c = cfg.c ? *cfg.c : auto_c(f, *table);
      InverseResult inv = inverse_theorem(f, table, c);
      const double m = static_cast<double>(inv.rep.m);
      r.converse = converse_check(f, inv.rep, inv.correlation / m, table.get());
      for (Element x = 0; x < static_cast<Element>(f.size()); ++x) {
        r.distances.push_back(normalized_norm(f(x) - inv.rep(x), cfg.p));
        r.bounds.push_back(std::nan(""));
      }
      r.checks.push_back(make_check("window_lo <= m", inv.window_lo, m, 1e-7));
      r.checks.push_back(make_check("m <= window_hi", m, inv.window_hi, 1e-7));
      r.checks.push_back(make_check("tau(c)^4 m <= correlation", inv.bound, inv.correlation, 1e-7));
      r.checks.push_back(
          make_check("converse: c^4 m <= U^2 norm^4", r.converse->bound, r.converse->u2_norm4, 1e-6));
      r.inverse = std::move(inv);
    } else {
      StabilizeOptions opts;
      opts.relaxed = !unitary;
      opts.force = cfg.force.value_or(cfg.construction == "projection");
      StabilityReport sr = cfg.pipeline == "stabilize" ? stabilize(f, table, cfg.p, opts)
                                                       : stabilize_affine(f, table, cfg.p, opts);
      r.distances = sr.per_element;
      r.bounds.assign(r.distances.size(), sr.bound);
      r.checks = sr.checks;
      r.stability = std::move(sr);
    }
    r.passed = std::all_of(r.checks.begin(), r.checks.end(),
                           [](const BoundCheck& c) { return c.passed; });
  } catch (const PreconditionError& e) {
    r.refused = true;
    r.error = e.what();
    r.error_measured = e.measured();
    r.error_limit = e.limit();
    r.passed = false;
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

MatrixFn gen_perturbed_rep(const MatrixFn& rho, double epsilon, std::uint64_t seed, double p) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("gen_perturbed_rep: epsilon must be non-negative");
  if (epsilon == 0.0) return rho;
  const PerturbationFamily family(rho, seed);
  return tune(
      family, [p](const MatrixFn& f) { return defect(f, Flavor::kMultiplicative, p); },
      0.95 * epsilon, 1.05 * epsilon, "gen_perturbed_rep");
}

MatrixFn gen_perturbed_rep_u2(const MatrixFn& rho, const IrrepTable& table, double c,
                              std::uint64_t seed) {
  if (!(c > 0.0 && c <= 1.0)) throw InvalidArgument("gen_perturbed_rep_u2: c must lie in (0, 1]");
  const PerturbationFamily family(rho, seed);
  const double n = static_cast<double>(rho.n());
  // Progress is 1 - ||f||^4 / n, which starts at 0 for a representation.
  return tune(
      family, [&](const MatrixFn& f) { return 1.0 - u2_norm4_fourier(f, table) / n; },
      std::max(0.0, 1.0 - c - 0.025), 1.0 - c, "gen_perturbed_rep_u2");
}

MatrixFn gen_projection_example(const MatrixFn& rho) {
  const std::size_t d = rho.n();
  if (d < 2) throw InvalidArgument("gen_projection_example: irrep must have dimension at least 2");
  double norm = 0.0;
  for (const CMatrix& m : rho.values()) norm += std::norm(m.trace());
  norm /= static_cast<double>(rho.size());
  if (std::abs(norm - 1.0) > 1e-6) {
    throw InvalidArgument("gen_projection_example: representation is not irreducible");
  }
  std::vector<CMatrix> values;
  values.reserve(rho.size());
  for (const CMatrix& m : rho.values()) values.push_back(m.block(0, 0, d - 1, d - 1));
  return MatrixFn(rho.group_ptr(), d - 1, std::move(values));
}

MatrixFn gen_random_bounded(GroupPtr group, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("gen_random_bounded: n must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.5, 1.0);
  std::vector<CMatrix> values;
  values.reserve(group->order());
  for (std::size_t x = 0; x < group->order(); ++x) {
    CMatrix m(n, n);
    for (auto& z : m.entries()) {
      const double re = normal(rng);
      const double im = normal(rng);
      z = Complex(re, im);
    }
    const double s = scale(rng) / op_norm(m);
    values.push_back(m * Complex(s, 0.0));
  }
  return MatrixFn(std::move(group), n, std::move(values));
}

std::size_t select_irrep_index(const IrrepTable& table, const std::string& selector) {
  require_single(selector);
  if (table.size() == 0) throw InvalidArgument("empty irrep table");
  if (selector == "largest") return table.size() - 1;
  if (selector.rfind("index:", 0) == 0) {
    const std::size_t k = parse_index(selector.substr(6), selector);
    if (k >= table.size()) throw InvalidArgument("irrep index out of range in '" + selector + "'");
    return k;
  }
  if (selector.rfind("dim:", 0) == 0) {
    const std::size_t d = parse_index(selector.substr(4), selector);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i].dim == d) return i;
    }
    throw InvalidArgument("no irrep of dimension " + std::to_string(d));
  }
  throw InvalidArgument("bad irrep selector '" + selector + "'");
}

MatrixFn select_representation(const IrrepTable& table, const std::string& selector) {
  if (selector.rfind("sum:", 0) != 0) {
    return table[select_irrep_index(table, selector)].as_fn(table.group);
  }
  std::vector<std::size_t> parts;
  std::stringstream ss(selector.substr(4));
  std::string item;
  while (std::getline(ss, item, '+')) {
    const std::size_t k = parse_index(item, selector);
    if (k >= table.size()) throw InvalidArgument("irrep index out of range in '" + selector + "'");
    parts.push_back(k);
  }
  if (parts.empty()) throw InvalidArgument("empty sum in '" + selector + "'");
  std::size_t n = 0;
  for (std::size_t k : parts) n += table[k].dim;
  std::vector<CMatrix> values;
  values.reserve(table.group->order());
  for (Element x = 0; x < static_cast<Element>(table.group->order()); ++x) {
    std::vector<CMatrix> blocks;
    for (std::size_t k : parts) blocks.push_back(table[k](x));
    values.push_back(block_diag(blocks));
  }
  return MatrixFn(table.group, n, std::move(values));
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("experiment config must be an object");
  ExperimentConfig c;
  try {
    read_optional(j, "group", c.group);
    read_optional(j, "construction", c.construction);
    read_optional(j, "irrep", c.irrep);
    read_optional(j, "epsilon", c.epsilon);
    read_optional(j, "p", c.p);
    read_optional(j, "pipeline", c.pipeline);
    read_optional(j, "n", c.n);
    read_optional(j, "file", c.file);
    read_optional(j, "irrep_seed", c.irrep_seed);
    read_optional(j, "output", c.output);
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("c") && !j.at("c").is_null()) c.c = j.at("c").get<double>();
    if (j.contains("force") && !j.at("force").is_null()) c.force = j.at("force").get<bool>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("experiment config: ") + e.what());
  }
  return c;
}

Json ExperimentConfig::to_json() const {
  Json j{{"group", group},       {"construction", construction}, {"irrep", irrep},
         {"epsilon", epsilon},   {"p", p},
         {"seed", seed ? Json(*seed) : Json(nullptr)},
         {"pipeline", pipeline}, {"c", c ? Json(*c) : Json(nullptr)},
         {"n", n},               {"file", file},
         {"force", force ? Json(*force) : Json(nullptr)},
         {"irrep_seed", irrep_seed}, {"output", output}};
  return j;
}

void ExperimentConfig::validate() const {
  static const char* kConstructions[] = {"perturbed", "projection", "random-bounded", "file"};
  static const char* kPipelines[] = {"stabilize", "stabilize-affine", "inverse"};
  if (std::find(std::begin(kConstructions), std::end(kConstructions), construction) ==
      std::end(kConstructions)) {
    throw InvalidArgument("unknown construction '" + construction + "'");
  }
  if (std::find(std::begin(kPipelines), std::end(kPipelines), pipeline) == std::end(kPipelines)) {
    throw InvalidArgument("unknown pipeline '" + pipeline + "'");
  }
  if ((construction == "perturbed" || construction == "random-bounded") && !seed) {
    throw InvalidArgument("construction '" + construction + "' needs a seed");
  }
  if (construction == "file" && file.empty()) throw InvalidArgument("file construction needs a path");
  if (!(p >= 1.0)) throw InvalidArgument("p must be at least 1");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  if (c && !(*c > 0.0 && *c <= 1.0)) throw InvalidArgument("c must lie in (0, 1]");
}

Json ExperimentReport::to_json() const {
  Json j;
  j["config"] = config.to_json();
  j["group"] = Json{{"name", group_name}, {"order", order}};
  j["n"] = n;
  j["defect"] = defect;
  j["status"] = refused ? "refused" : "ok";
  if (refused) {
    j["error"] = Json{{"message", error},
                      {"measured", number_or_null(error_measured)},
                      {"limit", number_or_null(error_limit)}};
  }
  if (stability) {
    const bool affine = stability->flavor == Flavor::kAffine;
    j["bound_formula"] = affine ? "(1 + 3 * 2^(3/p - 1) + 2 C_p) * eps"
                                : "(1 + 2 D_p + 8^(1/p)) * eps";
    j["stability"] = repstab::to_json(*stability);
  }
  if (inverse) {
    j["bound_formula"] = "tau(c)^4 * m";
    j["inverse"] = repstab::to_json(*inverse);
  }
  if (converse) {
    j["converse"] = Json{{"correlation", converse->correlation},
                         {"u2_norm4", converse->u2_norm4},
                         {"bound", converse->bound},
                         {"passed", converse->passed}};
  }
  Json checks_json = Json::array();
  for (const auto& c : checks) checks_json.push_back(repstab::to_json(c));
  j["checks"] = std::move(checks_json);
  j["passed"] = passed;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::string out = "element_index,distance,bound\n";
  for (std::size_t i = 0; i < distances.size(); ++i) {
    out += std::to_string(i) + "," + format_double(distances[i]) + "," +
           format_double(i < bounds.size() ? bounds[i] : std::nan("")) + "\n";
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport r = run_unwritten(config);
  write_outputs(r);
  return r;
}

std::vector<ExperimentReport> run_batch(const std::vector<ExperimentConfig>& configs) {
  std::vector<ExperimentReport> out(configs.size());
  parallel_for(configs.size(), [&](std::size_t i) { out[i] = run_unwritten(configs[i]); });
  for (const auto& r : out) write_outputs(r);
  return out;
}

std::vector<ExperimentConfig> configs_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object() && j.contains("experiments")) list = &j.at("experiments");
  std::vector<ExperimentConfig> out;
  if (list->is_array()) {
    for (const Json& item : *list) out.push_back(ExperimentConfig::from_json(item));
  } else {
    out.push_back(ExperimentConfig::from_json(*list));
  }
  return out;
}

std::string csv_path_for(const std::string& json_path) {
  const auto slash = json_path.find_last_of('/');
  const auto dot = json_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return json_path + ".csv";
  }
  return json_path.substr(0, dot) + ".csv";
}

}  // namespace repstab
