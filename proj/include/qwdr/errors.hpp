// Copyright 2026 The QWDR Authors
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

#ifndef QWDR_ERRORS_HPP_
#define QWDR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qwdr {

// Invalid scenario or network description. The message names the offending
// field (e.g. "flows[2].route").
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact oracle was asked to enumerate more than it is built for.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hard simulation invariant (interference, queue ledger, abstention) broke.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qwdr

#endif  // QWDR_ERRORS_HPP_
