// Copyright 2026 The icotk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ICOTK_CLI_HPP
#define ICOTK_CLI_HPP

#include <iosfwd>
#include <optional>

namespace icotk::cli {

enum ExitCode : int {
    kOk = 0,
    kRejected = 1,
    kMalformed = 2,
    kCapExceeded = 3,
};

/// Tolerance from the ICOTK_TOL environment variable, if set. Throws std::invalid_argument when
/// the value is not a positive finite number.
std::optional<double> tolerance_from_env();

/// Runs the icotk command line. Reports and tables go to `out`, diagnostics to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace icotk::cli

#endif  // ICOTK_CLI_HPP
