// Copyright 2026 The Tail Ledger Authors
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

#ifndef TAIL_LEDGER_STATUS_H_
#define TAIL_LEDGER_STATUS_H_

#include <stdexcept>
#include <string>

namespace tail_ledger {

// Base class for every error raised by the library. The CLI maps subclasses
// onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An enumeration or allocation bound would be exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// A ratio of expectations has an (underflowed) zero denominator.
class NumericDegeneracy : public Error {
 public:
  using Error::Error;
};

// The no-middle-frequencies hypothesis does not hold for the sample set.
class GapConditionUnsatisfied : public Error {
 public:
  using Error::Error;
};

// A one-vs-rest split is not linearly separable through the origin.
class SeparationFailure : public Error {
 public:
  using Error::Error;
};

class UnsupportedPrior : public Error {
 public:
  using Error::Error;
};

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_STATUS_H_
