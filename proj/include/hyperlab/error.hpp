// Copyright 2026 The Hyperlab Authors
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

namespace hyperlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: unknown generator, bad model declaration, empty region.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A finite resource (vertex budget, enumeration budget, depth) was exhausted.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A query left the enumerated word-metric ball.
class BallExceeded : public BudgetExceeded {
 public:
  BallExceeded(const std::string& what, int required_radius)
      : BudgetExceeded(what), required_radius_(required_radius) {}
  int required_radius() const noexcept { return required_radius_; }

 private:
  int required_radius_;
};

// An operation's mathematical precondition does not hold (no axis, x = y, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class CoincidentBoundaryPoints : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace hyperlab
