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
#include "moodlog/validator/score.hpp"

#include <algorithm>

#include "moodlog/datalog/evaluator.hpp"
#include "moodlog/validator/lint.hpp"

namespace moodlog::validator {

namespace dl = datalog;

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::correct: return "correct";
    case Verdict::partial: return "partial";
    case Verdict::wrong: return "wrong";
    case Verdict::none: break;
  }
  return "none";
}

Verdict judge(const std::set<std::string>& expected, const std::set<std::string>& produced) {
  if (expected == produced) return Verdict::correct;
  if (produced.empty()) return Verdict::none;
  if (!expected.empty() && std::includes(produced.begin(), produced.end(), expected.begin(), expected.end())) {
    return Verdict::partial;
  }
  return Verdict::wrong;
}

std::size_t ScoreReport::correct() const {
  return std::count_if(rows.begin(), rows.end(), [](const ScoreRow& r) { return r.verdict == Verdict::correct; });
}

std::string ScoreReport::totals() const {
  return std::to_string(correct()) + "/" + std::to_string(total());
}

namespace {

std::string joined(const std::vector<std::string>& names) {
  if (names.empty()) return "-";
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out;
}

}  // namespace

std::map<std::string, std::size_t> ScoreReport::breakdown() const {
  std::map<std::string, std::size_t> out;
  for (const auto& r : rows) ++out[joined(r.produced)];
  return out;
}

std::string ScoreReport::to_tsv() const {
  std::string out = "patient\texpected\tproduced\tverdict\n";
  for (const auto& r : rows) {
    out += r.patient + "\t" + r.expected + "\t" + joined(r.produced) + "\t" + std::string(to_string(r.verdict)) + "\n";
  }
  out += "total\t\t\t" + totals() + "\n";
  return out;
}

CandidateRefused::CandidateRefused(std::vector<Diagnostic> diagnostics)
    : std::runtime_error("candidate program has " + std::to_string(count(diagnostics, Severity::error)) +
                         " lint error(s)"),
      diagnostics_(std::move(diagnostics)) {}

ScoreReport score_program(const dl::StratifiedPlan& plan, const patient::PatientDataset& dataset) {
  for (const auto& record : dataset.records) {
    const patient::Label* label = dataset.label(record.id);
    if (!label || !label->disorder) throw std::invalid_argument("no expected disorder for patient '" + record.id + "'");
  }
  // Only relations the candidate declares are passed in; a candidate that
  // ignores History still gets scored.
  dl::FactStore all = patient::to_fact_store(dataset);
  dl::FactStore input;
  for (const auto& [name, relation] : all) {
    if (plan.program().find_declaration(name)) input.relation(name) = relation;
  }
  dl::FactStore result = dl::evaluate(plan, input);

  std::map<std::string, std::set<std::string>> produced;
  if (const dl::Relation* diagnosis = result.find("Diagnosis")) {
    for (const auto& t : *diagnosis) {
      if (t.size() == 2 && t[0].is_symbol()) produced[t[0].as_symbol()].insert(dl::format_value(t[1], false));
    }
  }

  ScoreReport report;
  for (const auto& record : dataset.records) {
    const std::string& expected = *dataset.label(record.id)->disorder;
    std::set<std::string> want;
    if (!expected.empty()) want.insert(expected);
    const auto& got = produced[record.id];
    report.rows.push_back({record.id, expected.empty() ? "-" : expected, {got.begin(), got.end()}, judge(want, got)});
  }
  return report;
}

ScoreReport score_candidate(std::string_view candidate, const patient::PatientDataset& dataset) {
  auto diagnostics = lint(candidate);
  if (has_errors(diagnostics)) throw CandidateRefused(std::move(diagnostics));
  auto plan = dl::compile(candidate);
  ScoreReport report = score_program(*plan, dataset);
  report.diagnostics = std::move(diagnostics);
  return report;
}

}  // namespace moodlog::validator
