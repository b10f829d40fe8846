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

#include <iosfwd>

namespace nmqj {

inline constexpr const char* kVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;  ///< bad flags, parse errors, grid mismatch
inline constexpr int positivity_breakdown = 2;
inline constexpr int timestep_too_large = 3;
inline constexpr int compare_failed = 4;
}  // namespace exit_code

/// Entry point of the `nmqj` command line tool:
///
///   nmqj run {nmqj|rk4|pint} --model FILE [--n N] [--dt DT] [--t T] [--seed S] [--stride K]
///                             [--out DIR] [--threads P] [--observable NAME]...
///   nmqj compare DIR_A DIR_B [--tol X] [--k K] [--report FILE]
///   nmqj presets list
///   nmqj presets render NAME [--gamma X ...] [-o FILE]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nmqj
