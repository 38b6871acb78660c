// Copyright 2026 The infosedd Authors
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

#include <stdexcept>
#include <string>

namespace infosedd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t outside
/// [0, T], k_term of a non-positive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input: wrong shape, MASK where none is allowed,
/// missing block split.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf in parameters or a loss, or a non-positive score.
class NumericFault : public Error {
 public:
  using Error::Error;
};

/// Malformed file: bad magic, truncated block, unparsable header.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File content is well formed but its shape disagrees with the request.
class ShapeMismatch : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Integer result does not fit the representation.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive computation requested above the oracle size bound.
class ScaleBoundExceeded : public Error {
 public:
  using Error::Error;
};

/// q has zero mass (or a zero score) where p does not, so KL(p||q) = +inf.
class AbsoluteContinuityViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace infosedd
