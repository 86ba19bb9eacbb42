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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moodlog/datalog/ast.hpp"

namespace moodlog::datalog {

struct ParseError {
  SourceSpan span;
  std::string message;
};

std::string to_string(const ParseError& error);

struct ParseResult {
  Program program;
  std::vector<ParseError> errors;

  bool ok() const { return errors.empty(); }
};

// Parser gives up after this many errors in one source.
inline constexpr std::size_t kMaxParseErrors = 20;

// Parses the supported Datalog subset:
//
//   .decl R(a:symbol, b:number, c:float)
//   .input R      .output R
//   Head(x, count:T(x, _)) :- A(x), (B(x); C(x)), !D(x), x + 1 > 2.
//   Fact("a", 1).
//
// `count : { T(...) }` is accepted as an alternative aggregate spelling.
// Errors do not stop parsing; the parser resynchronises at the next `.` or
// directive and keeps collecting errors up to kMaxParseErrors.
ParseResult parse(std::string_view source);

// Parses a single ground atom such as `Diagnosis("No. 5", "Bipolar_I")`.
// A trailing `.` is optional.
std::optional<Atom> parse_ground_atom(std::string_view text, std::string* error = nullptr);

}  // namespace moodlog::datalog
