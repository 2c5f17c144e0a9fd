// Copyright 2026 The qwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON and CSV encodings.
//
//   complex scalar   [re, im]   (a bare number is accepted on input)
//   matrix           row-major nested arrays of complex scalars
//   operator         matrix | {"diag": [E0, E1, ...]}
//   unitary          matrix | {"builtin": name, "params": {...}}
//   process          {"dim": d, "H": operator, "H_final": operator, "U": unitary}
//   state            {"builtin": name, "params": {...}} | {"matrix": matrix}
//   distribution     CSV "work,probability" or JSON [[work, probability], ...]

#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwork/distribution.hpp"
#include "qwork/errors.hpp"
#include "qwork/linalg.hpp"
#include "qwork/nogo.hpp"
#include "qwork/process.hpp"
#include "qwork/schemes.hpp"

namespace qwork::io {

using nlohmann::json;

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("expected a number or [re, im], got " + j.dump());
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ParseError("expected a matrix as nested arrays");
  }
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ParseError("matrix rows have unequal lengths");
    }
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

inline Params params_from_json(const json& j) {
  Params out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw ParseError("params must be an object");
  for (const auto& [key, value] : j.items()) {
    if (value.is_number()) {
      out[key] = value.get<double>();
    } else if (value.is_string() && (value == "inf" || value == "+inf")) {
      out[key] = std::numeric_limits<double>::infinity();
    } else {
      throw ParseError("param '" + key + "' must be a number");
    }
  }
  return out;
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

inline ComplexMatrix operator_from_json(const json& j) {
  if (j.is_object()) {
    const json& diag = require(j, "diag");
    if (!diag.is_array() || diag.empty()) throw ParseError("'diag' must be a non-empty array");
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(diag.size()),
                                          static_cast<Index>(diag.size()));
    for (std::size_t k = 0; k < diag.size(); ++k) {
      m(static_cast<Index>(k), static_cast<Index>(k)) = complex_from_json(diag[k]);
    }
    return m;
  }
  return matrix_from_json(j);
}

inline ComplexMatrix unitary_from_json(const json& j, Index dim) {
  if (j.is_object()) {
    const json& name = require(j, "builtin");
    if (!name.is_string()) throw ParseError("'builtin' must be a string");
    Params params = params_from_json(j.contains("params") ? j.at("params") : json());
    if (name == "dft" && !params.contains("d")) params["d"] = static_cast<double>(dim);
    return builtin_unitary(name.get<std::string>(), params).matrix();
  }
  return matrix_from_json(j);
}

inline Process process_from_json(const json& j) {
  try {
    const json& dim_field = require(j, "dim");
    if (!dim_field.is_number_integer() || dim_field.get<long>() < 1) {
      throw ParseError("'dim' must be a positive integer");
    }
    const auto dim = static_cast<Index>(dim_field.get<long>());
    const ComplexMatrix h = operator_from_json(require(j, "H"));
    const ComplexMatrix h_final = operator_from_json(require(j, "H_final"));
    const ComplexMatrix u = unitary_from_json(require(j, "U"), dim);
    for (const ComplexMatrix* m : {&h, &h_final, &u}) {
      if (m->rows() != dim || m->cols() != dim) {
        throw DimensionError("operator shape " + std::to_string(m->rows()) + "x" +
                             std::to_string(m->cols()) + " does not match dim " +
                             std::to_string(dim));
      }
    }
    return build_process(h, h_final, u);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

inline json process_to_json(const Process& process) {
  return {{"dim", process.dim()},
          {"H", to_json(process.h().matrix())},
          {"H_final", to_json(process.h_final().matrix())},
          {"U", to_json(process.u().matrix())}};
}

inline DensityMatrix state_from_json(const json& j, const Process& process) {
  try {
    if (j.is_object() && j.contains("matrix")) {
      const ComplexMatrix m = matrix_from_json(j.at("matrix"));
      if (m.rows() != process.dim() || m.cols() != process.dim()) {
        throw DimensionError("state shape does not match the process dimension");
      }
      return DensityMatrix(m);
    }
    const json& name = require(j, "builtin");
    if (!name.is_string()) throw ParseError("'builtin' must be a string");
    return builtin_state(name.get<std::string>(),
                         params_from_json(j.contains("params") ? j.at("params") : json()),
                         process.h());
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string format_number(double v, int digits) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Work with 12 significant digits, probabilities with 15 (the JSON form keeps
// full precision).
inline std::string distribution_to_csv(const WorkDistribution& dist) {
  std::string out = "work,probability\n";
  for (std::size_t k = 0; k < dist.size(); ++k) {
    out += format_number(dist.support()[k], 12) + "," +
           format_number(dist.probabilities()[k], 15) + "\n";
  }
  return out;
}

inline json to_json(const WorkDistribution& dist) {
  json out = json::array();
  for (std::size_t k = 0; k < dist.size(); ++k) {
    out.push_back(json::array({dist.support()[k], dist.probabilities()[k]}));
  }
  return out;
}

inline std::string outcomes_to_csv(const std::vector<OutcomeProbability>& outcomes) {
  std::string out = "i,j,work,probability\n";
  for (const auto& o : outcomes) {
    out += std::to_string(o.initial) + "," + std::to_string(o.final) + "," +
           format_number(o.work, 12) + "," + format_number(o.probability, 15) + "\n";
  }
  return out;
}

inline json to_json(const std::vector<OutcomeProbability>& outcomes) {
  json out = json::array();
  for (const auto& o : outcomes) {
    out.push_back({{"i", o.initial}, {"j", o.final}, {"work", o.work}, {"probability", o.probability}});
  }
  return out;
}

inline json to_json(const LambdaResult& r) {
  json out = {{"lambda", r.lambda},
              {"unconstrained", r.unconstrained},
              {"collapsed_to_tpm", r.collapsed_to_tpm},
              {"offdiag_min_eigenvalues", r.offdiag_min_eigenvalues}};
  out["binding_pair"] =
      r.binding_pair ? json::array({r.binding_pair->first, r.binding_pair->second}) : json();
  return out;
}

inline json to_json(const NoGoCertificate& c) {
  json details = json::object();
  for (const auto& [k, v] : c.details) details[k] = v;
  if (c.required_operator) details["required_operator"] = to_json(*c.required_operator);
  if (c.achievable_operator) details["achievable_operator"] = to_json(*c.achievable_operator);
  return {{"kind", to_string(c.kind)},
          {"gap", c.gap},
          {"bound_lhs", c.bound_lhs ? json(*c.bound_lhs) : json()},
          {"bound_rhs", c.bound_rhs ? json(*c.bound_rhs) : json()},
          {"verdict", to_string(c.verdict)},
          {"details", std::move(details)}};
}

}  // namespace qwork::io
