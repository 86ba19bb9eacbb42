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
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "moodlog/cddr/cddr.hpp"
#include "moodlog/cddr/vocabulary.hpp"
#include "moodlog/datalog/evaluator.hpp"
#include "support/criteria_oracle.hpp"

namespace moodlog::cddr {
namespace {

using datalog::Tuple;
using datalog::Value;
using patient::PatientRecord;

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::set<std::string> expected_disorders(const patient::Label& label) {
  if (label.disorder->empty()) return {};
  return {*label.disorder};
}

TEST(Bundled, EveryShippedPatientMatchesItsLabel) {
  auto dataset = bundled_dataset();
  for (const auto& record : dataset.records) {
    auto result = diagnose(record);
    const auto* label = dataset.label(record.id);
    EXPECT_TRUE(result.evaluated);
    EXPECT_EQ(as_set(result.disorders), expected_disorders(*label)) << record.id;
    EXPECT_EQ(result.episodes, *label->episodes) << record.id;
  }
}

TEST(Bundled, Examples) {
  auto dataset = bundled_dataset();
  auto one = diagnose(*dataset.find("No. 1"));
  EXPECT_EQ(one.disorders, std::vector<std::string>{"Bipolar_II"});
  EXPECT_TRUE(one.episodes.empty());

  auto five = diagnose(*dataset.find("No. 5"));
  EXPECT_EQ(five.disorders, std::vector<std::string>{"Bipolar_I"});
  EXPECT_EQ(patient::to_string(five.episodes), "mixed");

  auto twenty_three = diagnose(*dataset.find("No. 23"));
  EXPECT_EQ(twenty_three.disorders, std::vector<std::string>{"Bipolar_II"});
  EXPECT_EQ(patient::to_string(twenty_three.episodes), "hypomanic");
}

TEST(Bundled, AgreesWithCriteriaOracle) {
  std::mt19937 rng(20261015);
  Diagnoser diagnoser;
  for (int i = 0; i < 1000; ++i) {
    PatientRecord record = testing::random_record(rng, "R" + std::to_string(i));
    auto result = diagnoser.diagnose(record);
    auto oracle = testing::criteria_oracle(record);
    ASSERT_TRUE(result.evaluated);
    ASSERT_EQ(as_set(result.disorders), oracle.disorders) << patient::to_json(record).dump();
    ASSERT_EQ(result.episodes, oracle.episodes) << patient::to_json(record).dump();
  }
}

TEST(Bundled, AtMostOneDisorderAndCompatibleEpisodes) {
  std::mt19937 rng(7);
  Diagnoser diagnoser;
  for (int i = 0; i < 1000; ++i) {
    auto result = diagnoser.diagnose(testing::random_record(rng, "P"));
    EXPECT_LE(result.disorders.size(), 1u);
    const auto& e = result.episodes;
    EXPECT_FALSE(e.mixed && (e.depressive || e.manic || e.hypomanic));
    EXPECT_FALSE(e.manic && e.hypomanic);
    if (e.manic || e.mixed) EXPECT_EQ(result.disorders, std::vector<std::string>{"Bipolar_I"});
  }
}

TEST(Bundled, ManicHistorySuppressesDepressiveDisorders) {
  auto dataset = bundled_dataset();
  PatientRecord two = *dataset.find("No. 2");
  EXPECT_EQ(diagnose(two).disorders, std::vector<std::string>{"Recurrent_Depressive_Disorder"});
  two.history.push_back({"manic", 1});
  EXPECT_EQ(diagnose(two).disorders, std::vector<std::string>{"Bipolar_I"});
  two.history.back() = {"hypomanic", 1};
  EXPECT_EQ(diagnose(two).disorders, std::vector<std::string>{"Bipolar_II"});
}

TEST(Bundled, HistoryAloneIsEnough) {
  auto disorders = [](std::vector<patient::HistoryEntry> history) {
    return diagnose(PatientRecord{"H", {}, std::move(history)}).disorders;
  };
  EXPECT_EQ(disorders({{"manic", 1}}), std::vector<std::string>{"Bipolar_I"});
  EXPECT_EQ(disorders({{"mixed", 2}}), std::vector<std::string>{"Bipolar_I"});
  EXPECT_EQ(disorders({{"hypomanic", 1}, {"depressive", 1}}), std::vector<std::string>{"Bipolar_II"});
  EXPECT_EQ(disorders({{"depressive", 1}}), std::vector<std::string>{"Single_Episode_Depressive_Disorder"});
  EXPECT_EQ(disorders({{"depressive", 3}}), std::vector<std::string>{"Recurrent_Depressive_Disorder"});
  EXPECT_TRUE(disorders({{"hypomanic", 1}}).empty());
  EXPECT_TRUE(disorders({{"manic", 0}, {"depressive", 0}}).empty());
  EXPECT_TRUE(disorders({}).empty());
}

TEST(Bundled, CurrentEpisodeAddsToHistory) {
  auto dataset = bundled_dataset();
  PatientRecord record = *dataset.find("No. 2");
  record.history.clear();
  EXPECT_EQ(diagnose(record).disorders, std::vector<std::string>{"Single_Episode_Depressive_Disorder"});
}

TEST(Bundled, ZeroDefaultCountsForManicOnlyPatient) {
  PatientRecord record{"M", {{"euphoria_irritability_expansiveness", 2}, {"increased_activity_energy", 2}}, {}};
  auto out = datalog::evaluate(*bundled_plan(), patient::to_fact_store(record));
  EXPECT_TRUE(out.contains("DepressiveSymptomCount", Tuple{Value::symbol("M"), Value::number(0)}));
  EXPECT_TRUE(out.contains("DepressiveEpisodeCount", Tuple{Value::symbol("M"), Value::number(0)}));
}

TEST(Bundled, RecordsWithErrorsAreNotEvaluated) {
  auto result = diagnose(PatientRecord{"E", {{"reduced_energy", -3}}, {{"manic", 1}}});
  EXPECT_FALSE(result.evaluated);
  EXPECT_TRUE(result.disorders.empty());
  ASSERT_EQ(result.diagnostics.size(), 1u);
  EXPECT_EQ(result.diagnostics[0].code, "P2");
}

TEST(Bundled, UnknownSymptomsAreIgnoredWithAWarning) {
  auto result = diagnose(PatientRecord{"U", {{"sneezing", 4}}, {{"manic", 1}}});
  EXPECT_TRUE(result.evaluated);
  EXPECT_EQ(result.disorders, std::vector<std::string>{"Bipolar_I"});
  ASSERT_EQ(result.diagnostics.size(), 1u);
  EXPECT_EQ(result.diagnostics[0].code, "P4");
}

TEST(Bundled, BatchEvaluationMatchesPerPatient) {
  auto dataset = bundled_dataset();
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto record = testing::random_record(rng, "B" + std::to_string(i));
    dataset.records.push_back(record);
  }
  auto batch = datalog::evaluate(*bundled_plan(), patient::to_fact_store(dataset));
  auto each = diagnose_all(dataset);
  ASSERT_EQ(each.size(), dataset.records.size());
  for (const auto& result : each) {
    EXPECT_EQ(result.disorders, disorders_of(batch, result.patient)) << result.patient;
    EXPECT_EQ(result.episodes, episodes_of(batch, result.patient)) << result.patient;
  }
}

TEST(Bundled, ProgramVocabularyMatchesCode) {
  auto out = datalog::evaluate(*bundled_plan(), patient::to_fact_store(PatientRecord{"V", {}, {}}));
  auto names = [&](const std::string& relation) {
    std::set<std::string> s;
    for (const auto& t : datalog::query(out, relation)) s.insert(t[0].as_symbol());
    return s;
  };
  const auto& v = vocabulary();
  EXPECT_EQ(names("DepressivePole"), as_set(v.depressive_pole));
  EXPECT_EQ(names("ManicPole"), as_set(v.manic_pole));
  EXPECT_EQ(names("AffectiveSymptom"), as_set(v.affective_cluster));
  EXPECT_EQ(names("ManicCoreSymptom"), as_set(v.manic_core));
  EXPECT_EQ(v.depressive_pole.size(), 10u);
  EXPECT_EQ(v.manic_pole.size(), 9u);
  for (const auto& s : v.non_mood) EXPECT_EQ(v.pole_of(s), Pole::none);
  EXPECT_EQ(v.pole_of("racing_thoughts"), Pole::manic);
  EXPECT_EQ(v.pole_of("hopelessness"), Pole::depressive);
  EXPECT_FALSE(v.is_known_symptom("sneezing"));
  EXPECT_TRUE(v.is_known_condition("mixed"));
}

TEST(Bundled, MixedEpisodeIsSettledBeforeDepressiveEpisode) {
  const auto& plan = *bundled_plan();
  EXPECT_GT(plan.stratum_of("DepressiveEpisode"), plan.stratum_of("MixedEpisode"));
  EXPECT_GT(plan.stratum_of("ManicEpisode"), plan.stratum_of("MixedEpisode"));
  EXPECT_GT(plan.stratum_of("HypomanicEpisode"), plan.stratum_of("ManicEpisode"));
  EXPECT_GT(plan.stratum_of("Diagnosis"), plan.stratum_of("EverHypomanic"));
}

TEST(Bundled, EveryDiagnosisReplays) {
  auto dataset = bundled_dataset();
  Diagnoser diagnoser;
  std::size_t explained = 0;
  for (const auto& record : dataset.records) {
    datalog::ProvenanceResult provenance;
    auto result = diagnoser.diagnose(record, &provenance);
    auto input = patient::to_fact_store(record);
    for (const auto& disorder : result.disorders) {
      datalog::GroundAtom fact{"Diagnosis", {Value::symbol(record.id), Value::symbol(disorder)}};
      auto tree = datalog::explain(fact, provenance.index);
      EXPECT_TRUE(datalog::replay(*tree, diagnoser.plan(), input, provenance.facts).empty()) << record.id;
      ++explained;
    }
  }
  EXPECT_EQ(explained, 26u);
}

TEST(Bundled, MixedEpisodeAppearsInPatientFiveExplanation) {
  auto five = *bundled_dataset().find("No. 5");
  datalog::ProvenanceResult provenance;
  Diagnoser().diagnose(five, &provenance);
  auto tree = datalog::explain({"Diagnosis", {Value::symbol("No. 5"), Value::symbol("Bipolar_I")}}, provenance.index);
  ASSERT_EQ(tree->children.size(), 1u);
  EXPECT_EQ(tree->children[0]->fact.relation, "MixedEpisode");
  EXPECT_EQ(tree->line, 159u);
}

TEST(Benchmark, Disorders) {
  auto report = benchmark(bundled_dataset());
  EXPECT_EQ(report.totals(), "30/30");
}

TEST(Benchmark, Episodes) {
  auto report = benchmark_episodes(bundled_dataset());
  EXPECT_EQ(report.totals(), "30/30");
  auto dataset = bundled_dataset();
  dataset.labels["No. 5"].episodes = patient::EpisodeSet{.depressive = true};
  auto flipped = benchmark_episodes(dataset);
  EXPECT_EQ(flipped.totals(), "29/30");
}

TEST(Benchmark, CustomProgram) {
  auto plan = datalog::compile(
      ".decl Observed(Patient:symbol, Symptom:symbol, Week:float)\n"
      ".decl History(Patient:symbol, Condition:symbol, Count:number)\n"
      ".decl ManicEpisode(Patient:symbol)\n"
      ".input Observed\n.input History\n"
      "ManicEpisode(P) :- Observed(P, \"euphoria_irritability_expansiveness\", _).\n");
  Diagnoser diagnoser(plan);
  auto report = benchmark_episodes(bundled_dataset(), diagnoser);
  EXPECT_LT(report.correct(), 30u);
}

}  // namespace
}  // namespace moodlog::cddr
