#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "repstab/error.hpp"
#include "repstab/fourier.hpp"
#include "repstab/group.hpp"
#include "repstab/harness.hpp"
#include "repstab/inverse.hpp"
#include "repstab/io.hpp"
#include "repstab/irreps.hpp"
#include "repstab/linalg.hpp"
#include "repstab/stability.hpp"
#include "repstab/uniqueness.hpp"

using namespace repstab;

namespace {

enum Exit { kOk = 0, kFailed = 1, kRefused = 2, kInvalid = 3 };

void print_checks(const std::vector<BoundCheck>& checks) {
  for (const auto& c : checks) {
    std::printf("  %-44s %-4s measured %.6g  bound %.6g\n", c.name.c_str(), c.passed ? "ok" : "FAIL",
                c.measured, c.bound);
  }
}

int cmd_irreps(const std::string& spec, std::uint64_t seed, const std::string& json_out) {
  const GroupPtr g = build_group(spec);
  const IrrepTablePtr t = decompose_irreps(g, seed);
  std::printf("group %s (order %zu), %zu irreps\n", g->name().c_str(), g->order(), t->size());
  std::printf("dims:");
  for (const auto& r : t->irreps) std::printf(" %zu", r.dim);
  std::printf("\nsum of squared dims %zu\n", t->dimension_square_sum());
  const auto& c = t->certificate;
  std::printf("schur delta %.3g, character orthogonality %.3g, homomorphism %.3g, unitarity %.3g\n",
              c.schur_delta, c.character_orthogonality, c.homomorphism, c.unitarity);
  for (std::size_t i = 0; i < t->size(); ++i) {
    std::printf("chi_%zu:", i);
    for (const Complex& z : (*t)[i].character) {
      std::printf(z.imag() == 0.0 ? " %.4g" : " %.4g%+.4gi", z.real() + 0.0, z.imag());
    }
    std::printf("\n");
  }
  if (!json_out.empty()) write_json(json_out, to_json(*t));
  return t->dimension_square_sum() == g->order() && c.schur_delta < 1e-6 ? kOk : kFailed;
}

int cmd_fourier(const std::string& path, const std::string& check) {
  const MatrixFn f = load_matrix_fn(path);
  const IrrepTablePtr t = decompose_irreps(f.group_ptr());
  const FourierCoeffs fc = fourier_transform(f, t);
  for (std::size_t i = 0; i < fc.size(); ++i) {
    std::printf("rho_%zu (dim %zu): ||hat f||_HS %.6g  ||hat f||_op %.6g\n", i, (*t)[i].dim,
                hs_norm(fc[i]), op_norm(fc[i]));
  }
  if (check.empty()) return kOk;
  if (check != "all") throw InvalidArgument("--check accepts 'all'");
  bool ok = true;
  const auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
  const ParsevalSides ps = parseval_norm_check(f, *t);
  const double e1 = rel(ps.lhs, ps.rhs);
  std::printf("parseval          %.3g\n", e1);
  const double e2 = convolution_check(f, f, *t);
  std::printf("convolution       %.3g\n", e2);
  const MatrixFn back = invert(fc);
  double e3 = 0.0;
  for (Element x = 0; x < static_cast<Element>(f.size()); ++x) e3 = std::max(e3, max_abs_diff(back(x), f(x)));
  std::printf("inversion         %.3g\n", e3);
  ok = e1 < 1e-8 && e2 < 1e-8 && e3 < 1e-8;
  if (f.group().order() <= kMaxDirectU2Order) {
    const double d = u2_norm4_direct(f);
    const double u = u2_norm4_fourier(fc);
    const double e4 = std::abs(d - u) / std::max(1.0, std::abs(d));
    std::printf("u2 identity       %.3g\n", e4);
    ok = ok && e4 < 1e-8;
  }
  return ok ? kOk : kFailed;
}

int cmd_u2(const std::string& path, bool normalized) {
  const MatrixFn f = load_matrix_fn(path);
  const IrrepTablePtr t = decompose_irreps(f.group_ptr());
  const double v = u2_norm4_fourier(f, *t, normalized);
  std::printf("u2_norm4 %.12g\nu2_norm %.12g\n", v, u2_norm_from4(v));
  return kOk;
}

int cmd_invert(const std::string& path, std::optional<double> c, const std::string& json_out) {
  const MatrixFn f = load_matrix_fn(path);
  const IrrepTablePtr t = decompose_irreps(f.group_ptr());
  const double cv = c ? *c : auto_c(f, *t);
  const InverseResult r = inverse_theorem(f, t, cv);
  std::printf("c %.6g  n %zu  m %zu  window [%.6g, %.6g]\n", r.c, r.rep.n, r.rep.m, r.window_lo,
              r.window_hi);
  std::printf("correlation %.9g  bound tau(c)^4 m %.9g  %s\n", r.correlation, r.bound,
              r.correlation_ok && r.m_in_window ? "PASS" : "FAIL");
  if (!json_out.empty()) write_json(json_out, to_json(r));
  return r.correlation_ok && r.m_in_window ? kOk : kFailed;
}

int cmd_stabilize(const std::string& path, double p, bool affine, bool relaxed, bool force,
                  const std::string& json_out) {
  const MatrixFn f = load_matrix_fn(path);
  const IrrepTablePtr t = decompose_irreps(f.group_ptr());
  StabilizeOptions opts;
  opts.relaxed = relaxed;
  opts.force = force;
  const StabilityReport r = affine ? stabilize_affine(f, t, p, opts) : stabilize(f, t, p, opts);
  std::printf("%s stabilization, p = %g\n", to_string(r.flavor), r.p);
  std::printf("epsilon %.6g  n %zu  m %zu  window [%.6g, %.6g]%s\n", r.epsilon, r.n, r.m,
              r.window_lo, r.window_hi, r.window_applicable ? "" : " (not applicable)");
  std::printf("max distance %.6g  bound %.6g (constant %.6g)  %s\n", r.max_distance, r.bound,
              r.bound_constant, r.passed ? "PASS" : "FAIL");
  print_checks(r.checks);
  for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
  if (!json_out.empty()) write_json(json_out, to_json(r));
  return r.passed ? kOk : kFailed;
}

int cmd_uniqueness(const std::string& a, const std::string& b, double p, const std::string& json_out) {
  const MatrixFn rho = load_matrix_fn(a);
  const MatrixFn sigma = load_matrix_fn(b);
  const UniquenessResult r = eps_unitary_intertwiner(rho, sigma, p);
  std::printf("epsilon %.6g  n %zu  rank(T') %zu  (bound %.6g)\n", r.epsilon, r.n, r.t_prime.rank,
              r.rank_bound);
  std::printf("||T' - I||'_p %.6g  3 eps %.6g  %s\n", r.t_prime_minus_i, 3.0 * r.epsilon,
              r.passed ? "PASS" : "FAIL");
  print_checks(r.checks);
  if (!json_out.empty()) write_json(json_out, to_json(r));
  return r.passed ? kOk : kFailed;
}

int cmd_experiment(const std::string& path) {
  const auto configs = configs_from_json(read_json(path));
  const auto reports = run_batch(configs);
  int code = kOk;
  for (const auto& r : reports) {
    std::printf("%s %s/%s p=%g: %s", r.config.group.c_str(), r.config.construction.c_str(),
                r.config.pipeline.c_str(), r.config.p,
                r.refused ? "REFUSED" : (r.passed ? "PASS" : "FAIL"));
    if (r.stability) {
      std::printf("  eps %.4g  m %zu  max distance %.4g  bound %.4g", r.stability->epsilon,
                  r.stability->m, r.stability->max_distance, r.stability->bound);
    }
    if (r.inverse) {
      std::printf("  c %.4g  m %zu  correlation %.4g  bound %.4g", r.inverse->c, r.inverse->rep.m,
                  r.inverse->correlation, r.inverse->bound);
    }
    if (r.refused) std::printf("  %s", r.error.c_str());
    std::printf("\n");
    std::fprintf(stderr, "  wall time %.3fs\n", r.wall_seconds);
    if (r.refused) {
      code = std::max(code, static_cast<int>(kRefused));
    } else if (!r.passed) {
      code = std::max(code, static_cast<int>(kFailed));
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier analysis, inverse theorem and stability checks on finite groups"};
  app.require_subcommand(1);

  std::string spec, path, path2, json_out, check, irrep = "largest", out;
  std::uint64_t seed = 0;
  std::optional<double> c;
  double p = 2.0, epsilon = 0.0;
  bool normalized = false, affine = false, relaxed = false, force = false;
  std::size_t n = 2;

  auto* irreps = app.add_subcommand("irreps", "Decompose the regular representation");
  irreps->add_option("group", spec, "Group spec")->required();
  irreps->add_option("--seed", seed, "Random seed");
  irreps->add_option("--json", json_out, "Write the table as JSON");

  auto* fourier = app.add_subcommand("fourier", "Fourier coefficients of a matrix function");
  fourier->add_option("fn", path, "Matrix function JSON")->required()->check(CLI::ExistingFile);
  fourier->add_option("--check", check, "Run identity checks ('all')");

  auto* u2 = app.add_subcommand("u2", "U^2 norm of a matrix function");
  u2->add_option("fn", path, "Matrix function JSON")->required()->check(CLI::ExistingFile);
  u2->add_flag("--normalized", normalized, "Divide by n");

  auto* invert_cmd = app.add_subcommand("invert", "Run the inverse-theorem pipeline");
  invert_cmd->add_option("fn", path, "Matrix function JSON")->required()->check(CLI::ExistingFile);
  bool auto_c_flag = false;
  auto* c_opt = invert_cmd->add_option("--c", c, "Threshold c in (0, 1]");
  invert_cmd->add_flag("--auto-c", auto_c_flag, "Take c from the measured U^2 norm")->excludes(c_opt);
  invert_cmd->add_option("--json", json_out, "Write the result as JSON");

  auto* stab = app.add_subcommand("stabilize", "Find a nearby partial representation");
  stab->add_option("fn", path, "Matrix function JSON")->required()->check(CLI::ExistingFile);
  stab->add_option("--p", p, "Schatten exponent in [1, 2]")->required();
  stab->add_flag("--affine", affine, "Treat the input as an affine approximate representation");
  stab->add_flag("--relaxed", relaxed, "Accept values of operator norm at most 1");
  stab->add_flag("--force", force, "Run past the defect range of the theorem");
  stab->add_option("--json", json_out, "Write the report as JSON");

  auto* uniq = app.add_subcommand("uniqueness", "Intertwiner between two nearby representations");
  uniq->add_option("rep1", path, "First representation JSON")->required()->check(CLI::ExistingFile);
  uniq->add_option("rep2", path2, "Second representation JSON")->required()->check(CLI::ExistingFile);
  uniq->add_option("--p", p, "Schatten exponent")->required();
  uniq->add_option("--json", json_out, "Write the result as JSON");

  auto* exp = app.add_subcommand("experiment", "Run experiments from a config file");
  exp->add_option("config", path, "Config JSON")->required()->check(CLI::ExistingFile);

  auto* gen = app.add_subcommand("gen", "Generate input matrix functions");
  gen->require_subcommand(1);
  std::string group_spec = "quaternion";
  auto add_common = [&](CLI::App* s) {
    s->add_option("--group", group_spec, "Group spec");
    s->add_option("--irrep", irrep, "index:<k> | dim:<d> | sum:<k1>+<k2> | largest");
    s->add_option("--irrep-seed", seed, "Seed for the irrep decomposition");
    s->add_option("--out", out, "Output path")->required();
  };
  std::uint64_t gen_seed = 0;
  auto* gen_pert = gen->add_subcommand("perturbed", "rho(x) exp(i s H_x) with a target defect");
  add_common(gen_pert);
  gen_pert->add_option("--epsilon", epsilon, "Target multiplicative defect")->required();
  gen_pert->add_option("--p", p, "Schatten exponent of the defect");
  gen_pert->add_option("--seed", gen_seed, "Random seed")->required();
  auto* gen_proj = gen->add_subcommand("projection", "Top-left corner of an irrep");
  add_common(gen_proj);
  auto* gen_rand = gen->add_subcommand("random-bounded", "Random values of operator norm <= 1");
  gen_rand->add_option("--group", group_spec, "Group spec");
  gen_rand->add_option("--n", n, "Dimension");
  gen_rand->add_option("--seed", gen_seed, "Random seed")->required();
  gen_rand->add_option("--out", out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (irreps->parsed()) return cmd_irreps(spec, seed, json_out);
    if (fourier->parsed()) return cmd_fourier(path, check);
    if (u2->parsed()) return cmd_u2(path, normalized);
    if (invert_cmd->parsed()) {
      if (!c && !auto_c_flag) throw InvalidArgument("invert: pass --c or --auto-c");
      return cmd_invert(path, c, json_out);
    }
    if (stab->parsed()) return cmd_stabilize(path, p, affine, relaxed, force, json_out);
    if (uniq->parsed()) return cmd_uniqueness(path, path2, p, json_out);
    if (exp->parsed()) return cmd_experiment(path);
    if (gen->parsed()) {
      const GroupPtr g = build_group(group_spec);
      MatrixFn f;
      if (gen_rand->parsed()) {
        f = gen_random_bounded(g, n, gen_seed);
      } else {
        const IrrepTablePtr t = decompose_irreps(g, seed);
        if (gen_pert->parsed()) {
          f = gen_perturbed_rep(select_representation(*t, irrep), epsilon, gen_seed, p);
        } else {
          f = gen_projection_example((*t)[select_irrep_index(*t, irrep)].as_fn(g));
        }
      }
      save_matrix_fn(out, f);
      std::printf("wrote %s (group %s, n = %zu)\n", out.c_str(), g->spec().c_str(), f.n());
      return kOk;
    }
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "refused: %s\n", e.what());
    return kRefused;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
  return kOk;
}
