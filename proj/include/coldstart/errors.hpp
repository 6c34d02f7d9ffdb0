// Copyright 2026 The coldstart-dsmc Authors
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

namespace coldstart {

// Root of every error raised by the library. Callers that only need to
// report a failure can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operand is outside the domain of a model function (fuel flow below the
// AFR floor, nonpositive engine speed, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// |AFI| fell below the configured floor, so the spark channel has no usable
// input gain.
class SingularInputGainError : public Error {
 public:
  using Error::Error;
};

// A first-order transfer function was evaluated where tau*omega == 0 and k == 0.
class SingularGainError : public Error {
 public:
  using Error::Error;
};

// P(jw) is singular or its condition number exceeds the configured threshold.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class IdentificationError : public Error {
 public:
  using Error::Error;
};

// Bad configuration, malformed input file, or missing column. The message
// names the offending field path or cell.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Unrecoverable numeric failure during a closed-loop run.
class RuntimeAbort : public Error {
 public:
  RuntimeAbort(const std::string& what, std::size_t step, std::string loop)
      : Error(what), step_(step), loop_(std::move(loop)) {}
  std::size_t step() const { return step_; }
  const std::string& loop() const { return loop_; }

 private:
  std::size_t step_;
  std::string loop_;
};

}  // namespace coldstart
