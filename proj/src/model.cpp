// Copyright 2026 The nmqj Authors
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

#include "nmqj/model.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nmqj {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ModelError(path + ": " + msg); }

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double read_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Complex read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
  return {read_real(j[0], path + "[0]"), read_real(j[1], path + "[1]")};
}

CMatrix read_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty square matrix (array of rows)");
  const auto n = static_cast<Index>(j.size());
  CMatrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      fail(rpath, "expected a row of length " + std::to_string(n));
    }
    for (Index c = 0; c < n; ++c) {
      m(r, c) = read_complex(row[static_cast<std::size_t>(c)], rpath + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

CVector read_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of amplitudes");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = read_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
  return *it;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<NamedObservable> read_observables(const json& doc) {
  std::vector<NamedObservable> out;
  auto it = doc.find("observables");
  if (it == doc.end()) return out;
  if (!it->is_array()) fail("observables", "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string path = "observables[" + std::to_string(i) + "]";
    const auto& o = (*it)[i];
    if (!o.is_object()) fail(path, "expected an object {name, matrix}");
    const auto& name = require(o, "name", path);
    if (!name.is_string()) fail(path + ".name", "expected a string");
    out.push_back({name.get<std::string>(), LinearOperator(read_matrix(require(o, "matrix", path), path + ".matrix"))});
  }
  return out;
}

ModelSpec read_explicit(const json& doc) {
  ModelSpec m;
  const auto& dim = require(doc, "dim", "model");
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) fail("dim", "expected a positive integer");
  m.dim = static_cast<Index>(dim.get<long long>());

  m.hamiltonian = LinearOperator(read_matrix(require(doc, "hamiltonian", "model"), "hamiltonian"));

  const auto& chans = require(doc, "channels", "model");
  if (!chans.is_array()) fail("channels", "expected an array");
  for (std::size_t k = 0; k < chans.size(); ++k) {
    const std::string path = "channels[" + std::to_string(k) + "]";
    const auto& c = chans[k];
    if (!c.is_object()) fail(path, "expected an object {label, operator, rate}");
    Channel ch;
    if (auto lab = c.find("label"); lab != c.end()) {
      if (!lab->is_string()) fail(path + ".label", "expected a string");
      ch.label = lab->get<std::string>();
    } else {
      ch.label = "C" + std::to_string(k);
    }
    ch.jump_operator = LinearOperator(read_matrix(require(c, "operator", path), path + ".operator"));
    const auto& rate = require(c, "rate", path);
    const std::string rpath = path + ".rate";
    if (!rate.is_object()) fail(rpath, "expected an object {kind, params}");
    const auto& kind = require(rate, "kind", rpath);
    if (!kind.is_string()) fail(rpath + ".kind", "expected a string");
    const auto& params = require(rate, "params", rpath);
    if (!params.is_array()) fail(rpath + ".params", "expected an array of numbers");
    std::vector<double> p;
    for (std::size_t i = 0; i < params.size(); ++i) {
      p.push_back(read_real(params[i], rpath + ".params[" + std::to_string(i) + "]"));
    }
    try {
      ch.rate = RateFunction(rate_kind_from_string(kind.get<std::string>()), std::move(p));
    } catch (const std::invalid_argument& e) {
      fail(rpath, e.what());
    }
    m.channels.push_back(std::move(ch));
  }

  m.initial_state = StateVector(read_vector(require(doc, "initial_state", "model"), "initial_state"));
  m.observables = read_observables(doc);
  return m;
}

}  // namespace

void ModelSpec::validate() const {
  if (dim <= 0) fail("dim", "must be positive");
  if (hamiltonian.dim() != dim) {
    fail("hamiltonian", "dimension error: matrix is " + std::to_string(hamiltonian.dim()) + "x" +
                            std::to_string(hamiltonian.dim()) + " but dim is " + std::to_string(dim));
  }
  if (!hamiltonian.is_hermitian(1e-12)) {
    fail("hamiltonian", "non-Hermitian (max |H - H^+| = " + std::to_string(hamiltonian.hermitian_deviation()) + ")");
  }
  if (!hamiltonian.entries().allFinite()) fail("hamiltonian", "entries must be finite");
  std::set<std::string> labels;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const std::string path = "channels[" + std::to_string(k) + "]";
    const auto& ch = channels[k];
    if (ch.jump_operator.dim() != dim) {
      fail(path + ".operator", "dimension error: operator is " + std::to_string(ch.jump_operator.dim()) + "x" +
                                   std::to_string(ch.jump_operator.dim()) + " but dim is " + std::to_string(dim));
    }
    if (!ch.jump_operator.entries().allFinite()) fail(path + ".operator", "entries must be finite");
    if (ch.label.empty()) fail(path + ".label", "must be non-empty");
    if (!labels.insert(ch.label).second) fail(path + ".label", "duplicate channel label '" + ch.label + "'");
  }
  if (initial_state.dim() != dim) {
    fail("initial_state", "dimension error: " + std::to_string(initial_state.dim()) + " amplitudes but dim is " +
                              std::to_string(dim));
  }
  if (!initial_state.is_normalized(1e-10)) {
    fail("initial_state", "unnormalized (norm = " + std::to_string(initial_state.norm()) + ")");
  }
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const std::string path = "observables[" + std::to_string(i) + "]";
    if (observables[i].op.dim() != dim) fail(path + ".matrix", "dimension error");
    if (!observables[i].op.is_hermitian(1e-12)) fail(path + ".matrix", "non-Hermitian observable");
  }
}

ModelSpec load_model(std::string_view config_text) {
  json doc;
  try {
    doc = json::parse(config_text.begin(), config_text.end());
  } catch (const json::parse_error& e) {
    throw ModelError("parse error at " + line_col(config_text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) fail("model", "top level must be a JSON object");

  ModelSpec model;
  if (auto preset = doc.find("preset"); preset != doc.end()) {
    for (const char* key : {"dim", "hamiltonian", "channels", "initial_state"}) {
      if (doc.contains(key)) fail("preset", std::string("mutually exclusive with explicit field '") + key + "'");
    }
    if (!preset->is_string()) fail("preset", "expected a preset name");
    PresetParams params;
    if (auto p = doc.find("params"); p != doc.end()) {
      if (!p->is_object()) fail("params", "expected an object of numbers");
      for (const auto& [key, value] : p->items()) params[key] = read_real(value, "params." + key);
    }
    model = make_preset(preset->get<std::string>(), params);
    auto extra = read_observables(doc);
    model.observables.insert(model.observables.end(), extra.begin(), extra.end());
  } else {
    if (doc.contains("params")) fail("params", "only valid together with 'preset'");
    model = read_explicit(doc);
  }
  model.validate();
  return model;
}

ModelSpec load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(path.string() + ": cannot open model file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_model(ss.str());
  } catch (const ModelError& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
}

std::string render_model(const ModelSpec& model) {
  json doc;
  doc["dim"] = model.dim;
  doc["hamiltonian"] = matrix_json(model.hamiltonian.entries());
  doc["channels"] = json::array();
  for (const auto& ch : model.channels) {
    json c;
    c["label"] = ch.label;
    c["operator"] = matrix_json(ch.jump_operator.entries());
    c["rate"] = {{"kind", std::string(to_string(ch.rate.kind()))}, {"params", ch.rate.params()}};
    doc["channels"].push_back(std::move(c));
  }
  json psi = json::array();
  for (Index i = 0; i < model.initial_state.dim(); ++i) psi.push_back(complex_json(model.initial_state[i]));
  doc["initial_state"] = std::move(psi);
  if (!model.observables.empty()) {
    json obs = json::array();
    for (const auto& o : model.observables) obs.push_back({{"name", o.name}, {"matrix", matrix_json(o.op.entries())}});
    doc["observables"] = std::move(obs);
  }
  return doc.dump(2);
}

std::string model_digest(const ModelSpec& model) {
  const std::string text = render_model(model);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

NamedObservable resolve_observable(const ModelSpec& model, std::string_view name) {
  for (const auto& o : model.observables) {
    if (o.name == name) return o;
  }
  if (name.size() > 3 && name.substr(0, 3) == "pop") {
    const std::string idx(name.substr(3));
    if (idx.find_first_not_of("0123456789") == std::string::npos) {
      const long i = std::stol(idx);
      if (i >= 0 && i < model.dim) {
        return {std::string(name), outer(StateVector::basis(model.dim, i), StateVector::basis(model.dim, i))};
      }
      throw ModelError("observable '" + std::string(name) + "': level index out of range");
    }
  }
  if (model.dim == 2) {
    if (name == "sx") return {"sx", sigma_x()};
    if (name == "sy") return {"sy", sigma_y()};
    if (name == "sz") return {"sz", sigma_z()};
  }
  throw ModelError("unknown observable '" + std::string(name) + "'");
}

}  // namespace nmqj
