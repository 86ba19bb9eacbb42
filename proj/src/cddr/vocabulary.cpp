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
#include "moodlog/cddr/vocabulary.hpp"

#include <algorithm>

namespace moodlog::cddr {

namespace {

bool listed(const std::vector<std::string>& names, std::string_view name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

SymptomVocabulary make_vocabulary() {
  SymptomVocabulary v;
  v.depressive_pole = {"depressed_mood",
                       "diminished_interest_pleasure",
                       "reduced_concentration",
                       "low_self_worth",
                       "hopelessness",
                       "recurrent_thoughts_death_suicide",
                       "disrupted_excessive_sleep",
                       "change_in_appetite_weight",
                       "psychomotor_disturbances",
                       "reduced_energy"};
  v.manic_pole = {"euphoria_irritability_expansiveness",
                  "increased_activity_energy",
                  "increased_talkativeness",
                  "racing_thoughts",
                  "increased_self_esteem",
                  "decreased_need_for_sleep",
                  "distractibility",
                  "impulsive_reckless_behavior",
                  "increased_sexual_sociability_goal_directed_activity"};
  v.affective_cluster = {"depressed_mood", "diminished_interest_pleasure"};
  v.manic_core = {"euphoria_irritability_expansiveness", "increased_activity_energy"};
  // Psychotic-spectrum symptoms that show up in mood-disorder intake data.
  v.non_mood = {"delusions",
                "hallucinations",
                "passivity_experiences",
                "disorganized_thinking",
                "disorganized_behavior",
                "negative_symptoms",
                "catatonia"};
  v.history_conditions = {"depressive", "manic", "mixed", "hypomanic"};
  return v;
}

}  // namespace

std::string_view to_string(Pole pole) {
  switch (pole) {
    case Pole::depressive: return "depressive";
    case Pole::manic: return "manic";
    case Pole::none: break;
  }
  return "none";
}

bool SymptomVocabulary::is_known_symptom(std::string_view name) const {
  return listed(depressive_pole, name) || listed(manic_pole, name) || listed(non_mood, name);
}

bool SymptomVocabulary::is_known_condition(std::string_view name) const {
  return listed(history_conditions, name);
}

Pole SymptomVocabulary::pole_of(std::string_view symptom) const {
  if (listed(depressive_pole, symptom)) return Pole::depressive;
  if (listed(manic_pole, symptom)) return Pole::manic;
  return Pole::none;
}

const SymptomVocabulary& vocabulary() {
  static const SymptomVocabulary v = make_vocabulary();
  return v;
}

nlohmann::json to_json(const SymptomVocabulary& v) {
  return {{"depressive_pole", v.depressive_pole}, {"manic_pole", v.manic_pole},
          {"affective_cluster", v.affective_cluster}, {"manic_core", v.manic_core},
          {"non_mood", v.non_mood}, {"history_conditions", v.history_conditions}};
}

}  // namespace moodlog::cddr
