#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "expgrad/diagnostics.hpp"
#include "expgrad/hermitian.hpp"
#include "expgrad/objectives.hpp"

namespace expgrad {

using Json = nlohmann::json;

/// Row-major array of rows, each entry a two-element [re, im] array.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"dim": d, "operators": [matrix, ...]}
Json ensemble_to_json(const MeasurementEnsemble& ensemble);
MeasurementEnsemble ensemble_from_json(const Json& j);

/// {"dim": d, "rows": [[...], ...]} with real entries.
Json rows_to_json(int dim, const std::vector<RealVector>& rows);
std::vector<RealVector> rows_from_json(const Json& j);

Json report_to_json(const std::vector<CheckRecord>& records);

Json read_json_file(const std::string& path);
/// Writes `text` verbatim; throws IoError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace expgrad
