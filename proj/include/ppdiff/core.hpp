// Copyright 2026 The ppdiff Authors
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

#include <Eigen/Dense>

#include <atomic>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace ppdiff {

/// Points of G = R^d, d <= 2. Fixed max size keeps them off the heap.
template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, 2, 1>;

template <typename Scalar>
using Complex = std::complex<Scalar>;

using Pointd = Point<double>;
using Complexd = Complex<double>;

/// Coinciding atoms closer than this (max-norm, length units) are merged.
inline constexpr double kMergeTolerance = 1e-9;

/// Frequency tolerance for peak identity and group membership.
inline constexpr double kFrequencyTolerance = 1e-6;

/// Absolute tolerance of orbit quadratures (on the normalized average).
inline constexpr double kQuadratureTolerance = 1e-8;

template <typename Scalar>
inline constexpr Scalar kPi = Scalar(3.14159265358979323846264338327950288L);

/// The golden mean (1 + sqrt 5) / 2.
template <typename Scalar>
inline constexpr Scalar kGolden = Scalar(1.61803398874989484820458683436563812L);

/// Exit-code aligned error categories.
enum class ErrorCategory : int { config = 2, precondition = 3, resource = 4 };

inline const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::precondition: return "precondition";
    case ErrorCategory::resource: return "resource";
  }
  return "unknown";
}

/// Base error. what() is "<module>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& module, const std::string& message)
      : std::runtime_error(module + ": " + message), category_(category), module_(module) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCategory category_;
  std::string module_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& module, const std::string& message)
      : Error(ErrorCategory::config, module, message) {}
};

class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& module, const std::string& message)
      : Error(ErrorCategory::precondition, module, message) {}
};

class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& module, const std::string& message)
      : Error(ErrorCategory::resource, module, message) {}
};

namespace internal {
inline std::atomic<int>& thread_count() {
  static std::atomic<int> n{1};
  return n;
}
}  // namespace internal

/// Number of worker threads used by parallel loops. Results never depend on it.
inline void setNbThreads(int n) { internal::thread_count() = n < 1 ? 1 : n; }
inline int nbThreads() { return internal::thread_count(); }

/// Lexicographic comparison of points.
template <typename Scalar>
bool lex_less(const Point<Scalar>& a, const Point<Scalar>& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

template <typename Scalar>
Point<Scalar> make_point(std::initializer_list<Scalar> values) {
  Point<Scalar> p(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (Scalar v : values) p[i++] = v;
  return p;
}

template <typename Scalar>
Point<Scalar> constant_point(int dim, Scalar value) {
  return Point<Scalar>::Constant(dim, value);
}

}  // namespace ppdiff
