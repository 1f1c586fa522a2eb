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

#ifndef READRANK_TOOLS_FEATURE_IO_H_
#define READRANK_TOOLS_FEATURE_IO_H_

#include <istream>
#include <ostream>
#include <string_view>

#include "readrank/context.h"

namespace readrank::cli {

// Feature file: a JSON object
//   {"format": "readrank-features", "version": 1, "with_context": bool,
//    "config": {...}, "sentences": {"<id>": {"<feature>": value, ...}, ...}}
// Groups are recovered from feature names on load.
struct FeatureFile {
  FeatureStore store;
  bool with_context = false;
};

void write_feature_file(std::ostream& out, const FeatureFile& file,
                        std::string_view config_echo_json = {});
FeatureFile read_feature_file(std::istream& in, std::string_view source);

}  // namespace readrank::cli

#endif  // READRANK_TOOLS_FEATURE_IO_H_
