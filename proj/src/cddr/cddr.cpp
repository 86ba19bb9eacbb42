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
#include "moodlog/cddr/cddr.hpp"

#include <stdexcept>

#include "moodlog/assets.hpp"
#include "moodlog/datalog/evaluator.hpp"
#include "moodlog/patient/io.hpp"

namespace moodlog::cddr {

namespace dl = datalog;

std::string_view bundled_program() { return embedded_asset("cddr_mood.dl"); }

std::shared_ptr<const dl::StratifiedPlan> bundled_plan() {
  static const std::shared_ptr<const dl::StratifiedPlan> plan = dl::compile(bundled_program());
  return plan;
}

std::string_view bundled_dataset_table() { return embedded_asset("patients.tsv"); }

patient::PatientDataset bundled_dataset() {
  return patient::parse_patient_table(bundled_dataset_table(), "patients.tsv");
}

std::vector<std::string> disorders_of(const dl::FactStore& store, std::string_view patient) {
  std::vector<std::string> out;
  const dl::Relation* diagnosis = store.find("Diagnosis");
  if (!diagnosis) return out;
  for (const auto& t : *diagnosis) {
    if (t.size() == 2 && t[0].is_symbol() && t[0].as_symbol() == patient) {
      out.push_back(dl::format_value(t[1], false));
    }
  }
  return out;  // already sorted: the relation is an ordered set
}

patient::EpisodeSet episodes_of(const dl::FactStore& store, std::string_view patient) {
  patient::EpisodeSet out;
  for (std::size_t i = 0; i < std::size(kEpisodeRelations); ++i) {
    const dl::Relation* r = store.find(kEpisodeRelations[i]);
    if (r && r->contains({dl::Value::symbol(std::string(patient))})) {
      patient::set_episode(out, patient::kEpisodeNames[i]);
    }
  }
  return out;
}

Diagnoser::Diagnoser() : plan_(bundled_plan()) {}

Diagnoser::Diagnoser(std::shared_ptr<const dl::StratifiedPlan> plan) : plan_(std::move(plan)) {
  if (!plan_) throw std::invalid_argument("Diagnoser needs a program");
}

DiagnosisResult Diagnoser::diagnose(const patient::PatientRecord& record, dl::ProvenanceResult* provenance) const {
  DiagnosisResult result;
  result.patient = record.id;
  result.diagnostics = patient::validate_record(record);
  if (has_errors(result.diagnostics)) return result;

  dl::FactStore input = patient::to_fact_store(record);
  dl::FactStore out;
  if (provenance) {
    *provenance = dl::evaluate_with_provenance(*plan_, input);
    out = provenance->facts;
  } else {
    out = dl::evaluate(*plan_, input);
  }
  result.disorders = disorders_of(out, record.id);
  result.episodes = episodes_of(out, record.id);
  result.evaluated = true;
  return result;
}

patient::EpisodeSet Diagnoser::classify_episodes(const patient::PatientRecord& record) const {
  return diagnose(record).episodes;
}

std::vector<DiagnosisResult> Diagnoser::diagnose_all(const patient::PatientDataset& dataset) const {
  std::vector<DiagnosisResult> out;
  out.reserve(dataset.records.size());
  for (const auto& record : dataset.records) out.push_back(diagnose(record));
  return out;
}

DiagnosisResult diagnose(const patient::PatientRecord& record) { return Diagnoser().diagnose(record); }

patient::EpisodeSet classify_episodes(const patient::PatientRecord& record) {
  return Diagnoser().classify_episodes(record);
}

std::vector<DiagnosisResult> diagnose_all(const patient::PatientDataset& dataset) {
  return Diagnoser().diagnose_all(dataset);
}

validator::ScoreReport benchmark(const patient::PatientDataset& dataset) {
  return validator::score_candidate(bundled_program(), dataset);
}

validator::ScoreReport benchmark_episodes(const patient::PatientDataset& dataset, const Diagnoser& diagnoser) {
  validator::ScoreReport report;
  for (const auto& record : dataset.records) {
    const patient::Label* label = dataset.label(record.id);
    if (!label || !label->episodes) throw std::invalid_argument("no expected episodes for patient '" + record.id + "'");
    auto expected = patient::episode_names(*label->episodes);
    auto produced = patient::episode_names(diagnoser.classify_episodes(record));
    report.rows.push_back({record.id, patient::to_string(*label->episodes), produced,
                           validator::judge({expected.begin(), expected.end()}, {produced.begin(), produced.end()})});
  }
  return report;
}

}  // namespace moodlog::cddr
