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

#ifndef READRANK_TOOLS_CONFIG_H_
#define READRANK_TOOLS_CONFIG_H_

#include <set>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

namespace readrank::cli {

// Bad command line or config key; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fills options of `app` that were not given on the command line from a
// flat JSON object. Keys are long option names; '_' and '-' are
// interchangeable. Arrays supply multiple values; null leaves the option
// unset. An unknown key or an unconvertible value raises UsageError; an
// unreadable or malformed file raises ValidationError.
void apply_json_config(CLI::App& app, const std::string& path);

// Sets `option` from the environment variable when it is still unset.
void apply_env_default(CLI::App& app, const std::string& option, const char* variable);

// Resolved option values of `app` as a compact JSON object, keyed by long
// name and led by "command" and "version". Options named in `excluded`
// (long names without dashes) and the help/config options are omitted.
std::string config_echo(const CLI::App& app, const std::set<std::string>& excluded);

}  // namespace readrank::cli

#endif  // READRANK_TOOLS_CONFIG_H_
