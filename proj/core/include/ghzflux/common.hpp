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

#ifndef GHZFLUX_COMMON_HPP
#define GHZFLUX_COMMON_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ghzflux {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Caller supplied something outside an operation's domain (bad index,
/// mismatched dimensions, malformed parameters).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition that depends on physics rather than shape
/// (e.g. a loop without a clean transfer) does not hold.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

/// A numerical integration exceeded its accuracy budget. `measured()` is the
/// offending drift so callers can report it.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double measured)
      : std::runtime_error(what), measured_(measured) {}
  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

// Unit conversions. Every quantity inside the library is in ns, rad/ns (angular
// frequencies) or 1/ns (rates); the helpers below are the only places a 2*pi
// factor is introduced.
namespace units {

inline constexpr double mhz_to_rad_per_ns(double mhz) { return kTwoPi * mhz * 1e-3; }
inline constexpr double ghz_to_rad_per_ns(double ghz) { return kTwoPi * ghz; }
inline constexpr double rad_per_ns_to_mhz(double w) { return w / kTwoPi * 1e3; }
inline constexpr double rad_per_ns_to_ghz(double w) { return w / kTwoPi; }
// Rates are plain (not angular): 0.2 MHz -> 2e-4 / ns.
inline constexpr double mhz_rate_to_per_ns(double mhz) { return mhz * 1e-3; }
inline constexpr double per_ns_to_mhz_rate(double r) { return r * 1e3; }

}  // namespace units

}  // namespace ghzflux

#endif  // GHZFLUX_COMMON_HPP
