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
#include "moodlog/patient/record.hpp"

#include <cmath>
#include <set>

#include "moodlog/cddr/vocabulary.hpp"

namespace moodlog::patient {

using datalog::Value;

std::vector<std::string> episode_names(const EpisodeSet& e) {
  std::vector<std::string> names;
  if (e.depressive) names.emplace_back(kEpisodeNames[0]);
  if (e.manic) names.emplace_back(kEpisodeNames[1]);
  if (e.mixed) names.emplace_back(kEpisodeNames[2]);
  if (e.hypomanic) names.emplace_back(kEpisodeNames[3]);
  return names;
}

std::string to_string(const EpisodeSet& e) {
  std::string out;
  for (const auto& name : episode_names(e)) {
    if (!out.empty()) out += '+';
    out += name;
  }
  return out.empty() ? "-" : out;
}

bool set_episode(EpisodeSet& e, std::string_view name) {
  if (name == kEpisodeNames[0]) e.depressive = true;
  else if (name == kEpisodeNames[1]) e.manic = true;
  else if (name == kEpisodeNames[2]) e.mixed = true;
  else if (name == kEpisodeNames[3]) e.hypomanic = true;
  else return false;
  return true;
}

const PatientRecord* PatientDataset::find(std::string_view id) const {
  for (const auto& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const Label* PatientDataset::label(std::string_view id) const {
  auto it = labels.find(std::string(id));
  return it == labels.end() ? nullptr : &it->second;
}

std::vector<Diagnostic> validate_record(const PatientRecord& record) {
  std::vector<Diagnostic> out;
  auto report = [&](Severity severity, const char* code, std::string message) {
    out.push_back({severity, code, std::move(message), {}});
  };
  const auto& vocab = cddr::vocabulary();
  if (record.id.empty()) report(Severity::error, "P1", "patient id is empty");

  std::set<std::string> symptoms;
  for (const auto& o : record.observed) {
    if (!std::isfinite(o.weeks) || o.weeks < 0) {
      report(Severity::error, "P2", "symptom '" + o.symptom + "' has invalid duration " + datalog::format_float(o.weeks));
    }
    if (!symptoms.insert(o.symptom).second) {
      report(Severity::error, "P3", "symptom '" + o.symptom + "' listed more than once");
    }
    if (!vocab.is_known_symptom(o.symptom)) {
      report(Severity::warning, "P4", "unknown symptom '" + o.symptom + "' matches no criterion");
    }
  }

  std::set<std::string> conditions;
  for (const auto& h : record.history) {
    if (!vocab.is_known_condition(h.condition)) {
      report(Severity::warning, "P5", "unknown history condition '" + h.condition + "'");
    }
    if (h.count < 0) {
      report(Severity::error, "P6", "history condition '" + h.condition + "' has negative count " +
                                        std::to_string(h.count));
    }
    if (!conditions.insert(h.condition).second) {
      report(Severity::error, "P7", "history condition '" + h.condition + "' listed more than once");
    }
  }
  return out;
}

namespace {

void add_record(const PatientRecord& record, datalog::FactStore& store) {
  auto& observed = store.relation("Observed");
  auto& history = store.relation("History");
  for (const auto& o : record.observed) {
    observed.insert({Value::symbol(record.id), Value::symbol(o.symptom), Value::floating(o.weeks)});
  }
  for (const auto& h : record.history) {
    history.insert({Value::symbol(record.id), Value::symbol(h.condition), Value::number(h.count)});
  }
}

}  // namespace

datalog::FactStore to_fact_store(const PatientRecord& record) {
  datalog::FactStore store;
  store.relation("Observed");
  store.relation("History");
  add_record(record, store);
  return store;
}

datalog::FactStore to_fact_store(const PatientDataset& dataset) {
  datalog::FactStore store;
  store.relation("Observed");
  store.relation("History");
  for (const auto& r : dataset.records) add_record(r, store);
  return store;
}

nlohmann::json to_json(const PatientRecord& record) {
  nlohmann::json observed = nlohmann::json::array();
  for (const auto& o : record.observed) observed.push_back({{"symptom", o.symptom}, {"weeks", o.weeks}});
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : record.history) history.push_back({{"condition", h.condition}, {"count", h.count}});
  return {{"id", record.id}, {"observed", observed}, {"history", history}};
}

namespace {

void check_keys(const nlohmann::json& object, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw DataError(where + ": unexpected field '" + key + "'");
  }
}

const nlohmann::json& field(const nlohmann::json& object, const char* name, const std::string& where) {
  auto it = object.find(name);
  if (it == object.end()) throw DataError(where + ": missing field '" + name + "'");
  return *it;
}

std::string string_field(const nlohmann::json& object, const char* name, const std::string& where) {
  const auto& v = field(object, name, where);
  if (!v.is_string()) throw DataError(where + "." + name + ": expected a string");
  return v.get<std::string>();
}

const nlohmann::json& list_field(const nlohmann::json& document, const char* name) {
  static const nlohmann::json empty = nlohmann::json::array();
  auto it = document.find(name);
  if (it == document.end() || it->is_null()) return empty;
  if (!it->is_array()) throw DataError(std::string(name) + ": expected a list");
  return *it;
}

}  // namespace

PatientRecord record_from_json(const nlohmann::json& document) {
  if (!document.is_object()) throw DataError("patient record must be an object");
  check_keys(document, {"id", "observed", "history"}, "record");
  PatientRecord record;
  record.id = document.contains("id") ? string_field(document, "id", "record") : "patient";

  const auto& observed = list_field(document, "observed");
  for (std::size_t i = 0; i < observed.size(); ++i) {
    std::string where = "observed[" + std::to_string(i) + "]";
    const auto& item = observed[i];
    if (!item.is_object()) throw DataError(where + ": expected an object");
    check_keys(item, {"symptom", "weeks"}, where);
    Observation o;
    o.symptom = string_field(item, "symptom", where);
    const auto& weeks = field(item, "weeks", where);
    if (!weeks.is_number()) throw DataError(where + ".weeks: expected a number");
    o.weeks = weeks.get<double>();
    record.observed.push_back(std::move(o));
  }

  const auto& history = list_field(document, "history");
  for (std::size_t i = 0; i < history.size(); ++i) {
    std::string where = "history[" + std::to_string(i) + "]";
    const auto& item = history[i];
    if (!item.is_object()) throw DataError(where + ": expected an object");
    check_keys(item, {"condition", "count"}, where);
    HistoryEntry h;
    h.condition = string_field(item, "condition", where);
    const auto& count = field(item, "count", where);
    if (!count.is_number_integer()) throw DataError(where + ".count: expected an integer");
    h.count = count.get<std::int64_t>();
    record.history.push_back(std::move(h));
  }
  return record;
}

}  // namespace moodlog::patient
