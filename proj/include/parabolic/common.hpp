// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace parabolic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility tolerance shared by the MILP solver and the point checker.
inline constexpr double kFeasTol = 1e-6;
// Absolute optimality gap tolerance of the branch-and-bound.
inline constexpr double kOptGapTol = 1e-8;
// Default certification tolerance for global condition checks.
inline constexpr double kCertTol = 1e-6;

class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A point or sub-box lies outside the admissible domain of a function.
class domain_error : public error {
public:
  using error::error;
};

// Malformed caller input (bad parameter value, missing assignment, ...).
class input_error : public error {
public:
  using error::error;
};

// Malformed serialized data (JSON schema, LP file, solution file).
class schema_error : public error {
public:
  using error::error;
};

// A model violates structural requirements (unbounded variable, ...).
class model_error : public error {
public:
  using error::error;
};

// Requested discretization is finer than representable.
class resolution_error : public error {
public:
  using error::error;
};

// Instance exceeds the documented desk-scale limits.
class scale_error : public error {
public:
  using error::error;
};

// Model exceeds the configured size caps; carries the offending counts.
class size_error : public error {
public:
  size_error(const std::string& what, long binaries, long continuous)
      : error(what), binaries(binaries), continuous(continuous) {}
  long binaries;
  long continuous;
};

inline bool nearly_equal(double a, double b, double rtol = 1e-9) {
  return std::abs(a - b) <= rtol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace parabolic
