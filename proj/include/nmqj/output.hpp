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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nmqj/linalg.hpp"
#include "nmqj/model.hpp"

namespace nmqj {

/// One row of timeseries.csv. Column layout:
///
///   step, t, rho_<r>_<c>_re, rho_<r>_<c>_im (row-major), trace, min_eigenvalue, ray_count, <observables...>
///
/// i.e. 2 + 2 dim^2 + 3 + |observables| columns. ray_count is 0 for the rk4 oracle.
struct SeriesRow {
  std::int64_t step = 0;
  double t = 0.0;
  CMatrix rho;
  double min_eigenvalue = 0.0;
  std::int64_t ray_count = 0;
  std::vector<double> observables;
};

/// %.17g rendering; lossless for doubles.
std::string format_double(double v);

std::string timeseries_header(Index dim, const std::vector<std::string>& observable_names);
void write_timeseries_row(std::ostream& os, const SeriesRow& row);

struct Timeseries {
  Index dim = 0;
  std::vector<std::string> observable_names;
  std::vector<SeriesRow> rows;
};

/// Throws std::runtime_error on malformed files.
Timeseries read_timeseries_csv(const std::filesystem::path& path);

/// A finished run as stored on disk: <dir>/timeseries.csv and <dir>/meta.json.
struct RunData {
  std::string method;
  std::string model_digest;
  std::int64_t ensemble_size = 0;  ///< 0 for deterministic methods
  Timeseries series;
};

RunData load_run(const std::filesystem::path& dir);

struct CompareSpec {
  double abs_tol = 1e-6;  ///< deterministic vs deterministic
  double k_sigma = 4.0;   ///< any pair involving an nmqj run
};

struct CompareEntry {
  double t = 0.0;
  double max_abs_diff = 0.0;
  double worst_excess_ratio = 0.0;  ///< max over elements of |diff| / allowed
};

struct CompareReport {
  bool pass = false;
  std::string mode;  ///< "absolute" or "k-sigma"
  std::vector<CompareEntry> per_time;
  // Worst offender (largest |diff| / allowed).
  double worst_t = 0.0;
  Index worst_row = 0;
  Index worst_col = 0;
  std::string worst_part;  ///< "re" or "im"
  double worst_diff = 0.0;
  double worst_allowed = 0.0;
};

class GridMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Element-wise density comparison on the shared time grid. Stochastic runs
/// are given sigma^2 = (min(rho_aa, rho_bb) - |rho_ab|^2) / N per element,
/// evaluated on the deterministic reference when there is one; that bounds
/// the multinomial variance of the ensemble estimator of rho_ab.
/// Throws GridMismatch for differing digests, dimensions or time grids.
CompareReport compare_runs(const RunData& a, const RunData& b, const CompareSpec& spec);

std::string report_json(const CompareReport& report, const RunData& a, const RunData& b);

}  // namespace nmqj
