// Copyright 2026 The renewal_ldp Authors
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

#ifndef RENEWAL_LDP_ERRORS_HPP
#define RENEWAL_LDP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace renewal_ldp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or tilt outside the admissible domain (e.g. mgf(c) = +inf).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// An optimizer failed to bracket or converge.
class OptimizerError : public Error {
 public:
  using Error::Error;
};

/// Target outside the attainable set (no minimizing tilt exists).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Simulation would exceed the arrival budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an allowed range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A measure refers to a different base law than the one supplied.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// The conditional tail {tau > s} cannot be sampled.
class TailSamplingError : public Error {
 public:
  using Error::Error;
};

/// The free-energy test function is outside Gamma (C_f >= 1).
class NotInGammaError : public Error {
 public:
  using Error::Error;
};

/// Malformed law spec, function spec or config value.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_ERRORS_HPP
