// Copyright 2026 The fluxnoise Authors
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

#ifndef FLUXNOISE_ERRORS_HPP
#define FLUXNOISE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fluxnoise {

/// Coarse error classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory { Config, Data, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// A model parameter lies outside the domain where the model is defined.
class ParameterDomainError : public Error {
 public:
  explicit ParameterDomainError(const std::string& what)
      : Error(ErrorCategory::Config, what) {}
};

/// The requested combination of inputs has no meaningful result.
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorCategory::Config, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCategory::Config, what) {}
};

/// Malformed or invalid measurement data. `row()` is the 1-based data row,
/// or 0 when the problem is not tied to a row.
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t row = 0)
      : Error(ErrorCategory::Data, what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Adaptive quadrature ran out of its refinement budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial_value,
                   double partial_error)
      : Error(ErrorCategory::Numerical, what),
        partial_value_(partial_value),
        partial_error_(partial_error) {}
  double partial_value() const noexcept { return partial_value_; }
  double partial_error() const noexcept { return partial_error_; }

 private:
  double partial_value_;
  double partial_error_;
};

/// A ratio whose denominator vanished.
class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what)
      : Error(ErrorCategory::Numerical, what) {}
};

}  // namespace fluxnoise

#endif  // FLUXNOISE_ERRORS_HPP
