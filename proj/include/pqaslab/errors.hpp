// Copyright 2026 The pqaslab Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pqas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A qubit count exceeded the configured cap (see qubit_cap()).
class CapError : public Error {
 public:
  CapError(const std::string& what, std::size_t requested, std::size_t limit)
      : Error(
            what + ": requested " + std::to_string(requested) +
            " qubits, cap is " + std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}

  std::size_t requested() const { return requested_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t requested_;
  std::size_t limit_;
};

/// Operand dimensions do not match, or a layout is inconsistent.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant or a configuration constraint.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A computation would exceed a fixed size limit (S_t order, moment size).
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace pqas
