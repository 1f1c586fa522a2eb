// Copyright 2026 The readrank Authors.
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

#ifndef READRANK_ERROR_H_
#define READRANK_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace readrank {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a record invariant or a file format. Carries one
// diagnostic per offending record so callers can report them all at once.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message)
      : Error(message), diagnostics_{std::move(message)} {}
  explicit ValidationError(std::vector<std::string> diagnostics);

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// A caller-side precondition failed (bad argument, empty input, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Statistic is undefined because an input has zero variance.
class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

}  // namespace readrank

#endif  // READRANK_ERROR_H_
