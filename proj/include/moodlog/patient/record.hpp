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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "moodlog/datalog/fact_store.hpp"
#include "moodlog/diagnostic.hpp"

namespace moodlog::patient {

// Bad patient data: malformed files, JSON documents or rows.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Observation {
  std::string symptom;
  double weeks = 0;

  bool operator==(const Observation&) const = default;
};

struct HistoryEntry {
  std::string condition;
  std::int64_t count = 0;

  bool operator==(const HistoryEntry&) const = default;
};

// One patient's facts: Observed(id, symptom, weeks) and History(id, condition, count).
struct PatientRecord {
  std::string id;
  std::vector<Observation> observed;
  std::vector<HistoryEntry> history;

  bool operator==(const PatientRecord&) const = default;
};

// Current mood episodes.
struct EpisodeSet {
  bool depressive = false;
  bool manic = false;
  bool mixed = false;
  bool hypomanic = false;

  bool empty() const { return !depressive && !manic && !mixed && !hypomanic; }
  bool operator==(const EpisodeSet&) const = default;
};

inline constexpr std::string_view kEpisodeNames[] = {"depressive", "manic", "mixed", "hypomanic"};

// Names of the set flags in kEpisodeNames order.
std::vector<std::string> episode_names(const EpisodeSet& episodes);
// "depressive+hypomanic", or "-" for none.
std::string to_string(const EpisodeSet& episodes);
// Sets the flag called `name`; false for unknown names.
bool set_episode(EpisodeSet& episodes, std::string_view name);

// Expected outcome for a patient. An empty disorder string means "no clear
// diagnosis".
struct Label {
  std::optional<std::string> disorder;
  std::optional<EpisodeSet> episodes;

  bool operator==(const Label&) const = default;
};

struct PatientDataset {
  std::vector<PatientRecord> records;
  std::map<std::string, Label> labels;

  const PatientRecord* find(std::string_view id) const;
  const Label* label(std::string_view id) const;

  bool operator==(const PatientDataset&) const = default;
};

// Findings, all with an empty span:
//   P0 error    malformed record document (service requests)
//   P1 error    empty patient id
//   P2 error    negative or non-finite weeks
//   P3 error    duplicate symptom
//   P4 warning  unknown symptom
//   P5 warning  unknown history condition
//   P6 error    negative history count
//   P7 error    duplicate history condition
std::vector<Diagnostic> validate_record(const PatientRecord& record);

// Observed and History tuples, with both relations always present.
datalog::FactStore to_fact_store(const PatientRecord& record);
datalog::FactStore to_fact_store(const PatientDataset& dataset);

// {"id": ..., "observed": [{"symptom", "weeks"}], "history": [{"condition", "count"}]}
nlohmann::json to_json(const PatientRecord& record);
// Throws DataError naming the offending field. Missing lists are empty.
PatientRecord record_from_json(const nlohmann::json& document);

}  // namespace moodlog::patient
