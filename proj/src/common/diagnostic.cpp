// Copyright 2026 The Moodlog Authors
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
#include "moodlog/diagnostic.hpp"

#include <algorithm>

namespace moodlog {

std::string_view to_string(Severity severity) {
  return severity == Severity::error ? "error" : "warning";
}

std::string to_string(const Diagnostic& d) {
  std::string out(to_string(d.severity));
  out += ' ';
  out += d.code;
  if (d.span.line > 0) out += ' ' + datalog::to_string(d.span);
  out += ": ";
  out += d.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return count(diagnostics, Severity::error) > 0;
}

std::size_t count(const std::vector<Diagnostic>& diagnostics, Severity severity) {
  return std::count_if(diagnostics.begin(), diagnostics.end(),
                       [&](const Diagnostic& d) { return d.severity == severity; });
}

nlohmann::json to_json(const Diagnostic& d) {
  nlohmann::json out = {{"severity", to_string(d.severity)}, {"code", d.code}, {"message", d.message}};
  if (d.span.line > 0) {
    out["span"] = {{"line", d.span.line},
                   {"column", d.span.column},
                   {"end_line", d.span.end_line},
                   {"end_column", d.span.end_column}};
  } else {
    out["span"] = nullptr;
  }
  return out;
}

nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : diagnostics) out.push_back(to_json(d));
  return out;
}

}  // namespace moodlog
