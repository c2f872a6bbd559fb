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

#ifndef GHZFLUX_SRC_NUMFMT_HPP
#define GHZFLUX_SRC_NUMFMT_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <system_error>

namespace ghzflux::detail {

/// Shortest decimal that reads back to the same double.
inline std::string shortest(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  if (r.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, r.ptr);
}

/// Six significant digits when that reads back within `rel_tol`, else the
/// shortest exact form.
inline std::string compact(double x, double rel_tol = 1e-12) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  double back = 0.0;
  const std::string s(buf);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), back);
  if (r.ec == std::errc{} && std::abs(back - x) <= rel_tol * std::abs(x)) return s;
  return shortest(x);
}

}  // namespace ghzflux::detail

#endif  // GHZFLUX_SRC_NUMFMT_HPP
