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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "moodlog/datalog/analysis.hpp"
#include "moodlog/datalog/fact_store.hpp"
#include "moodlog/datalog/provenance.hpp"
#include "moodlog/diagnostic.hpp"
#include "moodlog/patient/record.hpp"
#include "moodlog/validator/score.hpp"

namespace moodlog::cddr {

inline constexpr std::string_view kBipolarI = "Bipolar_I";
inline constexpr std::string_view kBipolarII = "Bipolar_II";
inline constexpr std::string_view kSingleEpisode = "Single_Episode_Depressive_Disorder";
inline constexpr std::string_view kRecurrent = "Recurrent_Depressive_Disorder";
inline constexpr std::string_view kDisorders[] = {kBipolarI, kBipolarII, kSingleEpisode, kRecurrent};

// Relations holding the current episodes, in patient::kEpisodeNames order.
inline constexpr std::string_view kEpisodeRelations[] = {"DepressiveEpisode", "ManicEpisode", "MixedEpisode",
                                                         "HypomanicEpisode"};

// Source of the shipped diagnostic program.
std::string_view bundled_program();
// The shipped program, analyzed once and shared.
std::shared_ptr<const datalog::StratifiedPlan> bundled_plan();

// The shipped 30-patient dataset with expected disorders and episodes.
std::string_view bundled_dataset_table();
patient::PatientDataset bundled_dataset();

struct DiagnosisResult {
  std::string patient;
  std::vector<std::string> disorders;  // sorted
  patient::EpisodeSet episodes;
  std::vector<Diagnostic> diagnostics;  // from validate_record
  bool evaluated = false;               // false when the record had errors

  bool operator==(const DiagnosisResult&) const = default;
};

// Diagnosis tuples and episode flags of one patient in an evaluated store.
std::vector<std::string> disorders_of(const datalog::FactStore& store, std::string_view patient);
patient::EpisodeSet episodes_of(const datalog::FactStore& store, std::string_view patient);

// Runs a diagnostic program (the bundled one by default) over patient
// records. Safe to share between threads.
class Diagnoser {
 public:
  Diagnoser();
  explicit Diagnoser(std::shared_ptr<const datalog::StratifiedPlan> plan);

  const datalog::StratifiedPlan& plan() const { return *plan_; }

  // Records with validation errors are not evaluated. With `provenance`
  // set, the evaluation keeps derivations for explaining the result.
  DiagnosisResult diagnose(const patient::PatientRecord& record,
                           datalog::ProvenanceResult* provenance = nullptr) const;
  patient::EpisodeSet classify_episodes(const patient::PatientRecord& record) const;
  std::vector<DiagnosisResult> diagnose_all(const patient::PatientDataset& dataset) const;

 private:
  std::shared_ptr<const datalog::StratifiedPlan> plan_;
};

DiagnosisResult diagnose(const patient::PatientRecord& record);
patient::EpisodeSet classify_episodes(const patient::PatientRecord& record);
std::vector<DiagnosisResult> diagnose_all(const patient::PatientDataset& dataset);

// Scores the bundled program against the dataset's expected disorders.
validator::ScoreReport benchmark(const patient::PatientDataset& dataset);
// Compares current episodes against the expected episode labels.
validator::ScoreReport benchmark_episodes(const patient::PatientDataset& dataset, const Diagnoser& diagnoser = {});

}  // namespace moodlog::cddr
