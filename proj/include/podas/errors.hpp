/*
 * Copyright 2026 The podas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PODAS_ERRORS_HPP
#define PODAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace podas {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied data that violates a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed file or text input. Carries the 1-based line and column.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InvalidArgument(what + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Linear system too close to singular; condition() is the estimate.
class IllConditioned : public NumericalError {
 public:
  IllConditioned(const std::string& what, double condition)
      : NumericalError(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Gradient covariance has no dominant direction (all eigenvalues zero).
class NoActiveSubspace : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Quantity is mathematically undefined for the given input.
class Undefined : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace podas

#endif  // PODAS_ERRORS_HPP
