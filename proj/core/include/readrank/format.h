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

#ifndef READRANK_FORMAT_H_
#define READRANK_FORMAT_H_

#include <string>
#include <string_view>
#include <vector>

namespace readrank {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

// Fixed-point with `digits` after the decimal point.
std::string format_fixed(double value, int digits);

// Splits a simple CSV line on commas (no quoting), trimming spaces.
std::vector<std::string> split_csv(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace readrank

#endif  // READRANK_FORMAT_H_
