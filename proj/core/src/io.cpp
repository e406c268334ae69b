#include "repstab/io.hpp"

#include <cmath>
#include <fstream>

#include "repstab/error.hpp"

namespace repstab {

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Json checks_json(const std::vector<BoundCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(to_json(c));
  return out;
}

Json doubles_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

}  // namespace

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const CMatrix& m) {
  Json entries = Json::array();
  for (const Complex& z : m.entries()) entries.push_back(complex_pair(z));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

CMatrix matrix_from_json(const Json& j) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const Json& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != rows * cols) {
      throw InvalidArgument("matrix: expected rows * cols entries");
    }
    std::vector<Complex> data;
    data.reserve(entries.size());
    for (const Json& e : entries) {
      if (e.is_number()) {
        data.emplace_back(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        data.emplace_back(e[0].get<double>(), e[1].get<double>());
      } else {
        throw InvalidArgument("matrix: entries must be [re, im] pairs");
      }
    }
    CMatrix m(rows, cols, std::move(data));
    if (!m.all_finite()) throw InvalidArgument("matrix: non-finite entry");
    return m;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("matrix: ") + e.what());
  }
}

Json to_json(const MatrixFn& f) {
  Json values = Json::array();
  for (const CMatrix& m : f.values()) values.push_back(to_json(m));
  return Json{{"group", f.group().spec()}, {"n", f.n()}, {"values", std::move(values)}};
}

MatrixFn matrix_fn_from_json(const Json& j) {
  try {
    GroupPtr group = build_group(j.at("group").get<std::string>());
    const auto n = j.at("n").get<std::size_t>();
    std::vector<CMatrix> values;
    for (const Json& v : j.at("values")) values.push_back(matrix_from_json(v));
    return MatrixFn(std::move(group), n, std::move(values));
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("matrix function: ") + e.what());
  }
}

Json to_json(const PartialAffineRep& rep) {
  return Json{{"n", rep.n},       {"m", rep.m},           {"blocks", rep.blocks},
              {"u", to_json(rep.u)}, {"v", to_json(rep.v)}, {"p", to_json(rep.p)}};
}

Json to_json(const IrrepTable& table) {
  Json irreps = Json::array();
  for (std::size_t i = 0; i < table.size(); ++i) {
    Json chi = Json::array();
    for (const Complex& z : table[i].character) chi.push_back(complex_pair(z));
    irreps.push_back(Json{{"index", i}, {"dim", table[i].dim}, {"character", std::move(chi)}});
  }
  const IrrepCertificate& c = table.certificate;
  return Json{{"group", table.group->spec()},
              {"order", table.group->order()},
              {"seed", table.seed},
              {"dimension_square_sum", table.dimension_square_sum()},
              {"irreps", std::move(irreps)},
              {"certificate",
               {{"schur_delta", c.schur_delta},
                {"character_orthogonality", c.character_orthogonality},
                {"homomorphism", c.homomorphism},
                {"unitarity", c.unitarity},
                {"identity", c.identity}}}};
}

Json to_json(const BoundCheck& check) {
  return Json{{"name", check.name},
              {"measured", number_or_null(check.measured)},
              {"bound", number_or_null(check.bound)},
              {"margin", number_or_null(check.margin)},
              {"passed", check.passed}};
}

Json to_json(const InverseResult& r) {
  Json selected = Json::array();
  for (const Candidate& c : r.selection.entries) {
    selected.push_back(Json{{"irrep", c.irrep}, {"dim", c.dim}, {"lambda", c.lambda}});
  }
  return Json{{"n", r.rep.n},
              {"m", r.rep.m},
              {"c", r.c},
              {"u2_norm4", r.u2_norm4},
              {"cutoff", r.selection.cutoff},
              {"selected", std::move(selected)},
              {"assembled_correlation", r.assembled_correlation},
              {"correlation", r.correlation},
              {"bound", r.bound},
              {"window", Json::array({r.window_lo, r.window_hi})},
              {"m_in_window", r.m_in_window},
              {"correlation_ok", r.correlation_ok},
              {"passed", r.m_in_window && r.correlation_ok},
              {"rep", to_json(r.rep)}};
}

Json to_json(const StabilityReport& r) {
  Json notes = Json::array();
  for (const auto& s : r.notes) notes.push_back(s);
  return Json{{"flavor", to_string(r.flavor)},
              {"epsilon", r.epsilon},
              {"affine_epsilon", r.affine_epsilon},
              {"p", r.p},
              {"n", r.n},
              {"m", r.m},
              {"bound_constant", r.bound_constant},
              {"bound", r.bound},
              {"max_distance", r.max_distance},
              {"per_element", doubles_json(r.per_element)},
              {"window", Json::array({number_or_null(r.window_lo), number_or_null(r.window_hi)})},
              {"window_applicable", r.window_applicable},
              {"m_in_window", r.m_in_window},
              {"preconditions_met", r.preconditions_met},
              {"relaxed", r.relaxed},
              {"c", r.c},
              {"c_p", r.c_p},
              {"residual", r.residual},
              {"gamma", r.gamma},
              {"delta", r.delta},
              {"checks", checks_json(r.checks)},
              {"notes", std::move(notes)},
              {"passed", r.passed},
              {"rep", to_json(r.rep)}};
}

Json to_json(const UniquenessResult& r) {
  Json clusters = Json::array();
  for (const auto& c : r.clusters) clusters.push_back(Json{{"lambda", c.lambda}, {"size", c.size}});
  Json notes = Json::array();
  for (const auto& s : r.notes) notes.push_back(s);
  return Json{{"epsilon", r.epsilon},
              {"p", r.p},
              {"n", r.n},
              {"rank", r.t_prime.rank},
              {"rank_bound", r.rank_bound},
              {"t_prime_minus_i", r.t_prime_minus_i},
              {"three_eps", 3.0 * r.epsilon},
              {"t_minus_i", r.t_minus_i},
              {"t_minus_t_prime", r.t_minus_t_prime},
              {"t_prime_defect", r.t_prime.epsilon},
              {"intertwining_residual", r.intertwining_residual},
              {"singular_deviation", r.singular_deviation},
              {"character_distance", number_or_null(r.character_distance)},
              {"singular_values", doubles_json(r.singulars)},
              {"clusters", std::move(clusters)},
              {"zero_count", r.zero_count},
              {"min_cluster_gap", number_or_null(r.min_cluster_gap)},
              {"well_separated", r.well_separated},
              {"checks", checks_json(r.checks)},
              {"notes", std::move(notes)},
              {"passed", r.passed},
              {"t_prime", to_json(r.t_prime.t)}};
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

MatrixFn load_matrix_fn(const std::string& path) { return matrix_fn_from_json(read_json(path)); }

void save_matrix_fn(const std::string& path, const MatrixFn& f) { write_json(path, to_json(f)); }

}  // namespace repstab
