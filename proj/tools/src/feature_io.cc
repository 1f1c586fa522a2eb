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

#include "feature_io.h"

#include <string>

#include "json.hpp"
#include "readrank/error.h"
#include "readrank/features.h"

namespace readrank::cli {

using ordered_json = nlohmann::ordered_json;

void write_feature_file(std::ostream& out, const FeatureFile& file,
                        std::string_view config_echo_json) {
  ordered_json j;
  j["format"] = "readrank-features";
  j["version"] = 1;
  j["with_context"] = file.with_context;
  if (!config_echo_json.empty()) j["config"] = ordered_json::parse(config_echo_json);
  ordered_json sentences = ordered_json::object();
  for (const auto& [id, vec] : file.store) {
    ordered_json values = ordered_json::object();
    for (const auto& e : vec.entries()) values[e.name] = e.value;
    sentences[id] = std::move(values);
  }
  j["sentences"] = std::move(sentences);
  out << j.dump() << '\n';
}

FeatureFile read_feature_file(std::istream& in, std::string_view source) {
  const std::string where(source);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(where + ": malformed JSON: " + e.what());
  }
  FeatureFile file;
  try {
    if (j.at("format").get<std::string>() != "readrank-features" ||
        j.at("version").get<int>() != 1) {
      throw ValidationError(where + ": unsupported format or version");
    }
    file.with_context = j.at("with_context").get<bool>();
    for (const auto& [id, values] : j.at("sentences").items()) {
      FeatureVector vec;
      for (const auto& [name, value] : values.items()) {
        vec.add(name, group_of(name), value.get<double>());
      }
      file.store.emplace(id, std::move(vec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return file;
}

}  // namespace readrank::cli
