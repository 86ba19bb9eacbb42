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

namespace moodlog::cddr {

enum class Pole { depressive, manic, none };

std::string_view to_string(Pole pole);

// Symptom and history names understood by the bundled program. Names not
// listed here are unknown; non-mood symptoms are known but count towards
// neither pole.
struct SymptomVocabulary {
  std::vector<std::string> depressive_pole;
  std::vector<std::string> manic_pole;
  std::vector<std::string> affective_cluster;
  std::vector<std::string> manic_core;
  std::vector<std::string> non_mood;
  std::vector<std::string> history_conditions;

  bool is_known_symptom(std::string_view name) const;
  bool is_known_condition(std::string_view name) const;
  Pole pole_of(std::string_view symptom) const;
};

const SymptomVocabulary& vocabulary();

nlohmann::json to_json(const SymptomVocabulary& vocabulary);

}  // namespace moodlog::cddr
