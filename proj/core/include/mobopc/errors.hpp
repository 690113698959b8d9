// Copyright 2026 The mobopc Authors
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

#ifndef MOBOPC_ERRORS_HPP
#define MOBOPC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mobopc {

/// Input data is malformed (non-finite values, shape mismatches, bad indices).
class InvalidDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed beyond its recovery policy (e.g. a Cholesky
/// factorisation that does not succeed after jitter escalation).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an API precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A structured text input (CSV, config file) could not be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mobopc

#endif  // MOBOPC_ERRORS_HPP
