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

#include "nmqj/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace nmqj {

using json = nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::runtime_error(where + ": bad number '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size()) throw std::runtime_error(where + ": bad integer '" + s + "'");
  return v;
}

// Per-element standard deviation of the ensemble estimator of rho given N members.
double sigma_element(const CMatrix& rho, Index r, Index c, std::int64_t n) {
  const double pop = std::min(rho(r, r).real(), rho(c, c).real());
  const double var = std::max(0.0, pop - std::norm(rho(r, c))) / static_cast<double>(n);
  return std::sqrt(var);
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string timeseries_header(Index dim, const std::vector<std::string>& observable_names) {
  std::string h = "step,t";
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      h += fmt::format(",rho_{}_{}_re,rho_{}_{}_im", r, c, r, c);
    }
  }
  h += ",trace,min_eigenvalue,ray_count";
  for (const auto& name : observable_names) h += "," + name;
  return h;
}

void write_timeseries_row(std::ostream& os, const SeriesRow& row) {
  std::string line = fmt::format("{},{}", row.step, format_double(row.t));
  for (Index r = 0; r < row.rho.rows(); ++r) {
    for (Index c = 0; c < row.rho.cols(); ++c) {
      line += ',';
      line += format_double(row.rho(r, c).real());
      line += ',';
      line += format_double(row.rho(r, c).imag());
    }
  }
  line += ',' + format_double(row.rho.trace().real());
  line += ',' + format_double(row.min_eigenvalue);
  line += ',' + std::to_string(row.ray_count);
  for (double v : row.observables) line += ',' + format_double(v);
  os << line << '\n';
}

Timeseries read_timeseries_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split(line, ',');

  Timeseries ts;
  std::size_t n_rho = 0;
  for (const auto& col : header) {
    if (col.rfind("rho_", 0) == 0) ++n_rho;
  }
  const auto dim = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n_rho) / 2.0)));
  if (header.size() < 5 || static_cast<std::size_t>(2 * dim * dim) != n_rho) {
    throw std::runtime_error(path.string() + ": unrecognized header");
  }
  ts.dim = dim;
  const std::size_t fixed = 2 + n_rho + 3;
  if (header.size() < fixed || header[0] != "step" || header[1] != "t" || header[fixed - 1] != "ray_count") {
    throw std::runtime_error(path.string() + ": unrecognized header");
  }
  ts.observable_names.assign(header.begin() + static_cast<std::ptrdiff_t>(fixed), header.end());

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw std::runtime_error(where + ": wrong column count");
    SeriesRow row;
    row.step = parse_int(cells[0], where);
    row.t = parse_double(cells[1], where);
    row.rho = CMatrix(dim, dim);
    std::size_t col = 2;
    for (Index r = 0; r < dim; ++r) {
      for (Index c = 0; c < dim; ++c) {
        row.rho(r, c) = {parse_double(cells[col], where), parse_double(cells[col + 1], where)};
        col += 2;
      }
    }
    ++col;  // trace is derived
    row.min_eigenvalue = parse_double(cells[col++], where);
    row.ray_count = parse_int(cells[col++], where);
    for (; col < cells.size(); ++col) row.observables.push_back(parse_double(cells[col], where));
    ts.rows.push_back(std::move(row));
  }
  return ts;
}

RunData load_run(const std::filesystem::path& dir) {
  RunData rd;
  std::ifstream in(dir / "meta.json");
  if (!in) throw std::runtime_error((dir / "meta.json").string() + ": cannot open");
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error((dir / "meta.json").string() + ": " + e.what());
  }
  rd.method = meta.at("method").get<std::string>();
  rd.model_digest = meta.at("model_digest").get<std::string>();
  if (rd.method == "nmqj") rd.ensemble_size = meta.at("config").at("ensemble_size").get<std::int64_t>();
  rd.series = read_timeseries_csv(dir / "timeseries.csv");
  return rd;
}

CompareReport compare_runs(const RunData& a, const RunData& b, const CompareSpec& spec) {
  if (a.model_digest != b.model_digest) {
    throw GridMismatch("runs use different models (digest " + a.model_digest + " vs " + b.model_digest + ")");
  }
  if (a.series.dim != b.series.dim) throw GridMismatch("runs have different dimensions");
  if (a.series.rows.size() != b.series.rows.size()) {
    throw GridMismatch("runs have different numbers of recorded times (" + std::to_string(a.series.rows.size()) +
                       " vs " + std::to_string(b.series.rows.size()) + ")");
  }
  for (std::size_t i = 0; i < a.series.rows.size(); ++i) {
    const double ta = a.series.rows[i].t, tb = b.series.rows[i].t;
    if (std::abs(ta - tb) > 1e-9 * std::max(1.0, std::abs(ta))) {
      throw GridMismatch("recorded time grids differ at row " + std::to_string(i));
    }
  }

  const bool a_stoch = a.ensemble_size > 0;
  const bool b_stoch = b.ensemble_size > 0;
  CompareReport rep;
  rep.mode = (a_stoch || b_stoch) ? "k-sigma" : "absolute";
  rep.pass = true;
  double worst_ratio = -1.0;
  const Index d = a.series.dim;

  for (std::size_t i = 0; i < a.series.rows.size(); ++i) {
    const CMatrix& ra = a.series.rows[i].rho;
    const CMatrix& rb = b.series.rows[i].rho;
    CompareEntry entry;
    entry.t = a.series.rows[i].t;
    for (Index r = 0; r < d; ++r) {
      for (Index c = 0; c < d; ++c) {
        double allowed = spec.abs_tol;
        if (rep.mode == "k-sigma") {
          double var = 0.0;
          if (a_stoch && b_stoch) {
            var = std::pow(sigma_element(ra, r, c, a.ensemble_size), 2) +
                  std::pow(sigma_element(rb, r, c, b.ensemble_size), 2);
          } else {
            const CMatrix& ref = a_stoch ? rb : ra;
            const std::int64_t n = a_stoch ? a.ensemble_size : b.ensemble_size;
            var = std::pow(sigma_element(ref, r, c, n), 2);
          }
          allowed = spec.k_sigma * std::sqrt(var);
        }
        const Complex diff = ra(r, c) - rb(r, c);
        for (int part = 0; part < 2; ++part) {
          const double dv = std::abs(part == 0 ? diff.real() : diff.imag());
          entry.max_abs_diff = std::max(entry.max_abs_diff, dv);
          const bool ok = dv <= allowed;
          const double ratio = allowed > 0.0 ? dv / allowed : (dv > 0.0 ? INFINITY : 0.0);
          entry.worst_excess_ratio = std::max(entry.worst_excess_ratio, ratio);
          if (!ok) rep.pass = false;
          if (ratio > worst_ratio) {
            worst_ratio = ratio;
            rep.worst_t = entry.t;
            rep.worst_row = r;
            rep.worst_col = c;
            rep.worst_part = part == 0 ? "re" : "im";
            rep.worst_diff = dv;
            rep.worst_allowed = allowed;
          }
        }
      }
    }
    rep.per_time.push_back(entry);
  }
  return rep;
}

std::string report_json(const CompareReport& report, const RunData& a, const RunData& b) {
  json j;
  j["result"] = report.pass ? "PASS" : "FAIL";
  j["mode"] = report.mode;
  j["model_digest"] = a.model_digest;
  j["methods"] = {a.method, b.method};
  j["worst"] = {{"t", report.worst_t},
                {"element", {report.worst_row, report.worst_col}},
                {"part", report.worst_part},
                {"abs_diff", report.worst_diff},
                {"allowed", report.worst_allowed}};
  json per = json::array();
  for (const auto& e : report.per_time) {
    per.push_back({{"t", e.t}, {"max_abs_diff", e.max_abs_diff}, {"worst_ratio", e.worst_excess_ratio}});
  }
  j["per_time"] = std::move(per);
  return j.dump(2);
}

}  // namespace nmqj
