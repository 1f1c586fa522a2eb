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

#include "config.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "readrank/error.h"

namespace readrank::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw UsageError("config key '" + key + "': expected a string, number or boolean");
}

// Option text as a JSON bool, number or string.
nlohmann::ordered_json typed(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  const char* first = text.data();
  const char* last = first + text.size();
  long long i = 0;
  auto ri = std::from_chars(first, last, i);
  if (ri.ec == std::errc() && ri.ptr == last) return i;
  double d = 0.0;
  auto rd = std::from_chars(first, last, d);
  if (rd.ec == std::errc() && rd.ptr == last) return d;
  return text;
}

void set_option(CLI::Option* opt, const std::vector<std::string>& values,
                const std::string& origin) {
  try {
    for (const auto& v : values) opt->add_result(v);
    opt->run_callback();
  } catch (const CLI::Error& e) {
    throw UsageError(origin + ": " + e.what());
  }
}

}  // namespace

void apply_json_config(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError(path + ": config must be a JSON object");
  for (const auto& [raw_key, value] : j.items()) {
    std::string key = raw_key;
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    if (key == "config" || key == "help")
      throw UsageError("config key '" + raw_key + "' is not allowed");
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError(path + ": unknown config key '" + raw_key + "'");
    if (opt->count() > 0 || value.is_null()) continue;
    std::vector<std::string> values;
    if (value.is_array()) {
      for (const auto& v : value) values.push_back(scalar_text(v, raw_key));
    } else {
      values.push_back(scalar_text(value, raw_key));
    }
    set_option(opt, values, "config key '" + raw_key + "'");
  }
}

void apply_env_default(CLI::App& app, const std::string& option, const char* variable) {
  CLI::Option* opt = app.get_option_no_throw(option);
  if (opt == nullptr || opt->count() > 0) return;
  const char* value = std::getenv(variable);
  if (value == nullptr || *value == '\0') return;
  set_option(opt, {value}, std::string("environment variable ") + variable);
}

std::string config_echo(const CLI::App& app, const std::set<std::string>& excluded) {
  nlohmann::ordered_json j;
  j["command"] = app.get_name();
  j["version"] = kVersion;
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || excluded.count(name)) continue;
    const bool multi = opt->get_expected_max() > 1;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1 && !multi) {
        j[name] = typed(results.front());
      } else {
        auto& arr = j[name] = nlohmann::ordered_json::array();
        for (const auto& r : results) arr.push_back(typed(r));
      }
    } else if (opt->get_expected_max() == 0) {
      j[name] = false;  // unset flag
    } else if (multi) {
      j[name] = nlohmann::ordered_json::array();
    } else if (opt->get_default_str().empty()) {
      j[name] = nullptr;  // unset, resolved downstream
    } else {
      j[name] = typed(opt->get_default_str());
    }
  }
  return j.dump();
}

}  // namespace readrank::cli
