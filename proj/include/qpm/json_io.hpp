// json_io.hpp
// JSON encodings shared by the library and the CLI.
//
// Matrix documents are `{"rows": r, "cols": c, "data": [[re, im], ...]}`
// with row-major data; density operators add `"kind": "density"`;
// measurements are arrays of `{"value": v, "proj": <matrix>}`. Writing
// goes through a dedicated serializer that prints every number with 12
// significant digits, so output bytes are stable across runs.

#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpm/chsh.hpp"
#include "qpm/complex_matrix.hpp"
#include "qpm/errors.hpp"
#include "qpm/measurement.hpp"
#include "qpm/states.hpp"

namespace qpm {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (const Complex& z : m.entries()) {
    data.push_back(Json::array({z.real(), z.imag()}));
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

inline CMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("matrix document must be a JSON object");
  for (const char* key : {"rows", "cols", "data"}) {
    if (!j.contains(key)) {
      throw SchemaError(std::string("matrix document missing \"") + key + "\" field");
    }
  }
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned()) {
    throw SchemaError("matrix \"rows\"/\"cols\" must be nonnegative integers");
  }
  const std::size_t rows = j["rows"].get<std::size_t>();
  const std::size_t cols = j["cols"].get<std::size_t>();
  if (rows == 0 || cols == 0) throw SchemaError("matrix dimensions must be positive");
  if (!j["data"].is_array()) throw SchemaError("matrix \"data\" must be an array");
  if (j["data"].size() != rows * cols) {
    throw SchemaError("matrix \"data\" has " + std::to_string(j["data"].size()) +
                      " entries, expected " + std::to_string(rows * cols));
  }
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (const auto& pair : j["data"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw SchemaError("matrix entries must be [re, im] number pairs");
    }
    entries.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  try {
    return CMatrix(rows, cols, std::move(entries));
  } catch (const ValidationError& e) {
    throw SchemaError(e.what());
  }
}

inline Json density_to_json(const DensityOperator& rho) {
  Json j;
  j["kind"] = "density";
  Json m = matrix_to_json(rho.mat());
  j["rows"] = m["rows"];
  j["cols"] = m["cols"];
  j["data"] = std::move(m["data"]);
  return j;
}

// Accepts plain matrix documents too; when "kind" is present it must be
// "density". Density invariants are checked by the DensityOperator ctor.
inline DensityOperator density_from_json(const nlohmann::json& j) {
  if (j.is_object() && j.contains("kind") && j["kind"] != "density") {
    throw SchemaError("expected a density document, got kind \"" +
                      j["kind"].get<std::string>() + "\"");
  }
  return DensityOperator(matrix_from_json(j));
}

inline Json measurement_to_json(const ProjectiveMeasurement& m) {
  Json arr = Json::array();
  for (const MeasureOutcome& o : m.outcomes()) {
    Json jo;
    jo["value"] = o.value;
    jo["proj"] = matrix_to_json(o.proj);
    arr.push_back(std::move(jo));
  }
  return arr;
}

inline ProjectiveMeasurement measurement_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw SchemaError("measurement document must be a nonempty array");
  }
  std::vector<MeasureOutcome> outcomes;
  outcomes.reserve(j.size());
  for (const auto& jo : j) {
    if (!jo.is_object() || !jo.contains("value") || !jo.contains("proj") ||
        !jo["value"].is_number()) {
      throw SchemaError("measurement outcomes must be {\"value\", \"proj\"} objects");
    }
    outcomes.push_back(MeasureOutcome{jo["value"].get<double>(),
                                      matrix_from_json(jo["proj"])});
  }
  const std::size_t dim = outcomes.front().proj.rows();
  return validate_pm(dim, std::move(outcomes));
}

inline Json report_to_json(const CorrelationReport& r) {
  Json c;
  c["zi_ixpz"] = r.zi_ixpz;
  c["xi_ixpz"] = r.xi_ixpz;
  c["xi_izmx"] = r.xi_izmx;
  c["zi_izmx"] = r.zi_izmx;
  Json j;
  j["correlations"] = std::move(c);
  j["s"] = r.s;
  j["classical_bound"] = 2.0;
  j["violated"] = std::abs(r.s) > 2.0;
  return j;
}

inline Json witness_to_json(const WitnessReport& w) {
  Json j = report_to_json(w.correlations);
  j["classical_bound"] = w.classical_bound;
  j["violated"] = w.violated;
  j["margin"] = w.margin;
  return j;
}

// Fixed-format number printing: 12 significant digits, negative zero
// collapsed, so equal values always produce equal bytes.
inline void write_json_number(std::ostream& os, double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  os << buf;
}

inline void write_json(std::ostream& os, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << nlohmann::json(it.key()).dump() << ':';
        write_json(os, it.value());
      }
      os << '}';
      break;
    }
    case Json::value_t::array: {
      os << '[';
      bool first = true;
      for (const auto& el : j) {
        if (!first) os << ',';
        first = false;
        write_json(os, el);
      }
      os << ']';
      break;
    }
    case Json::value_t::number_float:
      write_json_number(os, j.get<double>());
      break;
    case Json::value_t::number_integer:
      os << j.get<std::int64_t>();
      break;
    case Json::value_t::number_unsigned:
      os << j.get<std::uint64_t>();
      break;
    case Json::value_t::boolean:
      os << (j.get<bool>() ? "true" : "false");
      break;
    case Json::value_t::string:
      os << nlohmann::json(j.get<std::string>()).dump();
      break;
    default:
      os << "null";
      break;
  }
}

inline std::string json_to_string(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

}  // namespace qpm
