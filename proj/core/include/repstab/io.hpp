#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "repstab/cmatrix.hpp"
#include "repstab/inverse.hpp"
#include "repstab/irreps.hpp"
#include "repstab/matrix_fn.hpp"
#include "repstab/stability.hpp"
#include "repstab/uniqueness.hpp"

namespace repstab {

using Json = nlohmann::ordered_json;

/// {rows, cols, entries: [[re, im], ...]} in row-major order.
Json to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

/// {group: spec, n, values: [matrix, ...]} ordered by element index.
Json to_json(const MatrixFn& f);
MatrixFn matrix_fn_from_json(const Json& j);

Json to_json(const PartialAffineRep& rep);
Json to_json(const IrrepTable& table);
Json to_json(const BoundCheck& check);
/// Summary plus the U, V, P payloads.
Json to_json(const InverseResult& result);
Json to_json(const StabilityReport& report);
Json to_json(const UniquenessResult& result);

/// Non-finite values become null.
Json number_or_null(double v);

Json read_json(const std::string& path);
/// Two-space indented, trailing newline. Throws Error on I/O failure.
void write_json(const std::string& path, const Json& j);

MatrixFn load_matrix_fn(const std::string& path);
void save_matrix_fn(const std::string& path, const MatrixFn& f);

}  // namespace repstab
