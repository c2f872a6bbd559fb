// Copyright 2026 The ghzflux Authors
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

#ifndef GHZFLUX_SCHEDDSL_HPP
#define GHZFLUX_SCHEDDSL_HPP

#include <string>
#include <string_view>
#include <vector>

#include "ghzflux/hamiltonian.hpp"
#include "ghzflux/protocol.hpp"

namespace ghzflux {

/// Parse failure with its 1-based line and offending token.
class ParseError : public InputError {
 public:
  ParseError(int line, std::string token, const std::string& message);
  int line() const { return line_; }
  const std::string& token() const { return token_; }

 private:
  int line_;
  std::string token_;
};

struct Diagnostic {
  int line = 0;
  std::string message;
};

/// A system plus a schedule, as read from or written to a schedule file.
/// `pulse_lines` and `window_lines` run parallel to the schedule's lists.
struct ScheduleDocument {
  SystemConfig config;
  Schedule schedule;
  std::vector<int> pulse_lines;
  std::vector<int> window_lines;
  std::vector<Diagnostic> warnings;
};

/// Line grammar, '#' starts a comment:
///   system qubits=<int>
///   freq q=<int> value=<float> unit=<MHz|GHz>
///   g0 value=<float> unit=MHz
///   decay q=<int|all> value=<float> unit=MHz      (dephase likewise)
///   pulse t=<ns> q=<int> angle=<float>pi axis=<x|y|flip>
///   cnot t=<ns> control=<int> target=<int>
///   window t=<ns> dur=<ns> loop=<a>,<b>,<c> phi=<f>pi,<f>pi,<f>pi [g0=<MHz>]
/// `system` comes first and `g0` is required. Throws ParseError.
ScheduleDocument parse_schedule(std::string_view text);

/// Canonical text: system, freq, g0, decay, dephase, then events by time
/// with pulses ahead of windows at equal times. LF line endings.
std::string serialize_schedule(const ScheduleDocument& doc);

/// Field-by-field comparison of config and schedule at relative tolerance.
bool equivalent(const ScheduleDocument& a, const ScheduleDocument& b, double rel_tol = 1e-12);

}  // namespace ghzflux

#endif  // GHZFLUX_SCHEDDSL_HPP
