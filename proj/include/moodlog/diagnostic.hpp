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
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "moodlog/datalog/ast.hpp"

namespace moodlog {

enum class Severity { error, warning };

std::string_view to_string(Severity severity);

// A finding about a program or a patient record. Program findings use the
// lint catalog (L0 syntax, L1-L8); record findings use P1-P7.
struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  datalog::SourceSpan span;

  bool operator==(const Diagnostic&) const = default;
};

// "error L5 12:1: message" (the position is left out when unknown).
std::string to_string(const Diagnostic& diagnostic);

bool has_errors(const std::vector<Diagnostic>& diagnostics);
std::size_t count(const std::vector<Diagnostic>& diagnostics, Severity severity);

nlohmann::json to_json(const Diagnostic& diagnostic);
nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics);

}  // namespace moodlog
