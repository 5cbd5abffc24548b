#include "expgrad/io.hpp"

#include <fstream>
#include <sstream>

#include "expgrad/error.hpp"

namespace expgrad {

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("matrix must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw InvalidInput("matrix row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& entry = row[k];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
        throw InvalidInput("matrix entries must be [re, im] pairs");
      }
      m(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

Json ensemble_to_json(const MeasurementEnsemble& ensemble) {
  Json ops = Json::array();
  for (const auto& m : ensemble.operators()) ops.push_back(matrix_to_json(m.matrix()));
  return Json{{"dim", ensemble.dim()}, {"operators", std::move(ops)}};
}

MeasurementEnsemble ensemble_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("operators")) {
    throw InvalidInput("ensemble file needs \"dim\" and \"operators\"");
  }
  const int dim = j.at("dim").get<int>();
  std::vector<HermitianOperator> ops;
  for (const auto& op : j.at("operators")) {
    ComplexMatrix m = matrix_from_json(op);
    if (m.rows() != dim) throw InvalidInput("operator dimension does not match \"dim\"");
    ops.emplace_back(std::move(m));
  }
  return MeasurementEnsemble(dim, std::move(ops));
}

Json rows_to_json(int dim, const std::vector<RealVector>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(std::vector<double>(r.data(), r.data() + r.size()));
  return Json{{"dim", dim}, {"rows", std::move(out)}};
}

std::vector<RealVector> rows_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("rows")) {
    throw InvalidInput("vector objective file needs \"dim\" and \"rows\"");
  }
  const int dim = j.at("dim").get<int>();
  std::vector<RealVector> rows;
  for (const auto& r : j.at("rows")) {
    const auto values = r.get<std::vector<double>>();
    if (static_cast<int>(values.size()) != dim) throw InvalidInput("row length does not match \"dim\"");
    rows.push_back(Eigen::Map<const RealVector>(values.data(), dim));
  }
  return rows;
}

Json report_to_json(const std::vector<CheckRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records) {
    out.push_back(
        {{"check", r.check}, {"seed", r.seed}, {"dim", r.dim}, {"pass", r.pass}, {"worst_margin", r.worst_margin}});
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace expgrad
