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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace moodlog::validator {

class DiffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Changes that turn `candidate` into `reference`. Rules compare equal when
// they match up to variable renaming and whitespace; literal order matters.
// Line counts cover non-blank lines that are not only a comment.
struct RuleDiff {
  std::vector<std::string> added;      // in reference only
  std::vector<std::string> removed;    // in candidate only
  std::vector<std::string> unchanged;
  std::size_t lines_added = 0;
  std::size_t lines_removed = 0;
  std::size_t lines_before = 0;
  std::size_t lines_after = 0;

  bool empty() const { return added.empty() && removed.empty(); }
};

// Throws DiffError naming the side that fails to parse.
RuleDiff diff_programs(std::string_view candidate, std::string_view reference);

// Rule text with variables renamed to V1, V2... in order of appearance.
std::string canonical_rule_text(std::string_view rule_source);

// Lines counted by diff_programs, whitespace-collapsed.
std::vector<std::string> significant_lines(std::string_view source);

}  // namespace moodlog::validator
