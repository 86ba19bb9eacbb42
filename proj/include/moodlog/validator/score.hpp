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

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moodlog/datalog/analysis.hpp"
#include "moodlog/diagnostic.hpp"
#include "moodlog/patient/record.hpp"

namespace moodlog::validator {

// partial: the expected outcome is among several produced ones.
enum class Verdict { correct, partial, wrong, none };

std::string_view to_string(Verdict verdict);

// Empty sets mean "no clear diagnosis".
Verdict judge(const std::set<std::string>& expected, const std::set<std::string>& produced);

struct ScoreRow {
  std::string patient;
  std::string expected;               // "-" for none
  std::vector<std::string> produced;  // sorted
  Verdict verdict = Verdict::none;
};

struct ScoreReport {
  std::vector<ScoreRow> rows;
  std::vector<Diagnostic> diagnostics;  // lint warnings of the candidate

  std::size_t correct() const;
  std::size_t total() const { return rows.size(); }
  bool perfect() const { return correct() == total(); }
  // "30/30"
  std::string totals() const;
  // Patients per produced outcome; "-" counts patients with no output and
  // several outputs are joined with ','.
  std::map<std::string, std::size_t> breakdown() const;
  // Header, one row per patient, then "total" with totals() in the last column.
  std::string to_tsv() const;
};

class CandidateRefused : public std::runtime_error {
 public:
  explicit CandidateRefused(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Lints, then evaluates the candidate over all patients at once and compares
// Diagnosis tuples against the expected disorders. Throws CandidateRefused on
// lint errors and std::invalid_argument when a patient has no expected
// disorder.
ScoreReport score_candidate(std::string_view candidate, const patient::PatientDataset& dataset);

// Same without linting, for an already compiled program.
ScoreReport score_program(const datalog::StratifiedPlan& plan, const patient::PatientDataset& dataset);

}  // namespace moodlog::validator
