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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "moodlog/cddr/cddr.hpp"
#include "moodlog/cli/cli.hpp"
#include "moodlog/service/service.hpp"
#include "support/test_support.hpp"

namespace moodlog::cli {
namespace {

namespace fs = std::filesystem;
using moodlog::testing::fixture_path;
using moodlog::testing::read_fixture;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "moodlog");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, Usage) {
  EXPECT_EQ(run_cli({}).code, kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kUsage);
  EXPECT_EQ(run_cli({"check"}).code, kUsage);
  auto help = run_cli({"--help"});
  EXPECT_EQ(help.code, kSuccess);
  EXPECT_NE(help.out.find("diagnose"), std::string::npos);
}

TEST(Cli, CheckBundledProgram) {
  auto r = run_cli({"check", "default"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.err, "0 error(s), 0 warning(s)\n");
}

TEST(Cli, CheckCycle) {
  auto r = run_cli({"check", fixture_path("mixed_cycle.dl")});
  EXPECT_EQ(r.code, kFailure);
  EXPECT_EQ(r.err.rfind("error L5 16:1: cycle through negation", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("1 error(s), 0 warning(s)"), std::string::npos);
}

TEST(Cli, CheckWarningsStillSucceed) {
  auto r = run_cli({"check", "-"}, read_fixture("exclusivity_gap.dl"));
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_NE(r.err.find("warning L8 14:1"), std::string::npos);
}

TEST(Cli, CheckMissingFile) {
  auto r = run_cli({"check", "/nonexistent.dl"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST(Cli, RunWritesOutputs) {
  auto out = scratch_dir("moodlog_cli_run");
  auto r = run_cli({"run", fixture_path("edge_path.dl"), "--facts", fixture_path("edge"), "--out", out.string()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(r.out, "Path\t3\n");
  std::ifstream csv(out / "Path.csv");
  std::stringstream text;
  text << csv.rdbuf();
  EXPECT_EQ(text.str(), "1\t2\n1\t3\n2\t3\n");
  fs::remove_all(out);
}

TEST(Cli, RunErrors) {
  EXPECT_EQ(run_cli({"run", fixture_path("edge_path.dl"), "--facts", "/nonexistent", "--out", "/tmp"}).code, kUsage);
  EXPECT_EQ(run_cli({"run", fixture_path("mixed_cycle.dl"), "--facts", fixture_path("patient_a"), "--out", "/tmp"}).code,
            kFailure);
  EXPECT_EQ(run_cli({"run", fixture_path("edge_path.dl"), "--facts", fixture_path("edge")}).code, kUsage);
}

TEST(Cli, DiagnoseDataset) {
  auto r = run_cli({"diagnose", "--dataset", "default"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(r.out.rfind("No. 1 → Bipolar_II [episodes: -]\nNo. 2 → Recurrent_Depressive_Disorder [episodes: depressive]\n", 0),
            0u)
      << r.out;
  EXPECT_NE(r.out.find("No. 5 → Bipolar_I [episodes: mixed]\n"), std::string::npos);
  EXPECT_NE(r.out.find("No. 10 → - [episodes: "), std::string::npos);
}

TEST(Cli, DiagnoseMatchesService) {
  service::DiagnosisService service;
  auto lines = run_cli({"diagnose", "--dataset", "default"}).out;
  std::string expected;
  for (const auto& record : cddr::bundled_dataset().records) {
    auto body = service.diagnose(patient::to_json(record).dump()).body;
    std::string disorders;
    for (const auto& d : body["disorders"]) disorders += (disorders.empty() ? "" : ",") + d.get<std::string>();
    std::string episodes;
    for (const auto& e : body["episodes"]) episodes += (episodes.empty() ? "" : "+") + e.get<std::string>();
    expected += record.id + " → " + (disorders.empty() ? "-" : disorders) + " [episodes: " +
                (episodes.empty() ? "-" : episodes) + "]\n";
  }
  EXPECT_EQ(lines, expected);
}

TEST(Cli, DiagnoseOnePatientWithExplanation) {
  auto r = run_cli({"diagnose", "--dataset", "default", "--id", "No. 1", "--explain"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(r.out.rfind("No. 1 → Bipolar_II [episodes: -]\n  Diagnosis(\"No. 1\", \"Bipolar_II\") ⟵ #", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("History(\"No. 1\", \"hypomanic\", 1) ⟵ input"), std::string::npos);
}

TEST(Cli, DiagnoseJsonPatient) {
  auto r = run_cli({"diagnose", "--patient", fixture_path("patient_no5.json")});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(r.out, "No. 5 → Bipolar_I [episodes: mixed]\n");
}

TEST(Cli, DiagnoseInvalidPatient) {
  auto dir = scratch_dir("moodlog_cli_patient");
  std::ofstream(dir / "bad.json") << R"({"id": "X", "observed": [{"symptom": "reduced_energy", "weeks": -1}]})";
  auto r = run_cli({"diagnose", "--patient", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, kFailure);
  EXPECT_NE(r.err.find("X: error P2"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, DiagnoseErrors) {
  EXPECT_EQ(run_cli({"diagnose"}).code, kUsage);
  EXPECT_EQ(run_cli({"diagnose", "--dataset", "default", "--id", "No. 99"}).code, kUsage);
  EXPECT_EQ(run_cli({"diagnose", "--dataset", "default", "--patient", "x.json"}).code, kUsage);
  EXPECT_EQ(run_cli({"diagnose", "--dataset", "default", "--program", fixture_path("arity_error.dl")}).code, kFailure);
}

TEST(Cli, DiagnoseWithCandidateProgram) {
  auto r = run_cli({"diagnose", "--dataset", "default", "--id", "No. 5", "--program", fixture_path("history_only.dl")});
  ASSERT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out, "No. 5 → - [episodes: mixed]\n");
}

TEST(Cli, ExplainFacts) {
  auto r = run_cli({"explain", fixture_path("edge_path.dl"), "--facts", fixture_path("edge"), "--fact", "Path(1, 3)"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(r.out,
            "Path(1, 3) ⟵ #1@6 [x=1, y=3, z=2]\n"
            "  Path(1, 2) ⟵ #0@5 [x=1, y=2]\n"
            "    Edge(1, 2) ⟵ input\n"
            "  Edge(2, 3) ⟵ input\n");
}

TEST(Cli, ExplainJson) {
  auto r = run_cli({"explain", "--dataset", "default", "--fact", "Diagnosis(\"No. 5\", \"Bipolar_I\")", "--format",
                    "json"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(datalog::tree_from_json(doc).children[0]->fact.relation, "MixedEpisode");
}

TEST(Cli, ExplainErrors) {
  EXPECT_EQ(run_cli({"explain", "--dataset", "default", "--fact", "Diagnosis(\"No. 5\", \"Bipolar_II\")"}).code,
            kFailure);
  EXPECT_EQ(run_cli({"explain", "--dataset", "default", "--fact", "Diagnosis(("}).code, kUsage);
  EXPECT_EQ(run_cli({"explain", "--fact", "Path(1, 3)"}).code, kUsage);
  EXPECT_EQ(run_cli({"explain", "--dataset", "default", "--fact", "X(1)", "--format", "xml"}).code, kUsage);
}

TEST(Cli, BenchBundled) {
  auto r = run_cli({"bench", "--dataset", "default"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_TRUE(r.out.ends_with("total\t\t\t30/30\n"));
  EXPECT_EQ(r.err,
            "-\t4\nBipolar_I\t9\nBipolar_II\t8\nRecurrent_Depressive_Disorder\t4\n"
            "Single_Episode_Depressive_Disorder\t5\n");
  auto episodes = run_cli({"bench", "--dataset", "default", "--episodes"});
  EXPECT_EQ(episodes.code, kSuccess);
  EXPECT_TRUE(episodes.out.ends_with("total\t\t\t30/30\n"));
}

TEST(Cli, BenchFromFile) {
  auto r = run_cli({"bench", "--dataset", fixture_path("../../assets/patients.tsv")});
  EXPECT_EQ(r.code, kSuccess) << r.err;
}

TEST(Cli, BenchImperfectCandidate) {
  auto r = run_cli({"bench", "--dataset", "default", "--program", fixture_path("history_only.dl")});
  EXPECT_EQ(r.code, kFailure);
  EXPECT_NE(r.out.find("No. 5\tBipolar_I\t-\tnone\n"), std::string::npos);
  auto refused = run_cli({"bench", "--dataset", "default", "--program", fixture_path("arity_error.dl")});
  EXPECT_EQ(refused.code, kFailure);
  EXPECT_NE(refused.err.find("error L2"), std::string::npos);
  EXPECT_TRUE(refused.out.empty());
}

TEST(Cli, TranslateReplay) {
  auto r = run_cli({"translate", "--criteria", fixture_path("translate/mood_criteria.txt"), "--client", "replay",
                    "--transcript", fixture_path("translate/clean_transcript.jsonl")});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(r.out, read_fixture("mixed_before.dl"));
  auto checked = run_cli({"check", "-"}, r.out);
  EXPECT_EQ(checked.code, kSuccess);
}

TEST(Cli, TranslateReplayMismatch) {
  auto dir = scratch_dir("moodlog_cli_translate");
  std::ofstream(dir / "criteria.txt") << "Different criteria.\n";
  auto r = run_cli({"translate", "--criteria", (dir / "criteria.txt").string(), "--transcript",
                    fixture_path("translate/clean_transcript.jsonl")});
  EXPECT_EQ(r.code, kFailure);
  EXPECT_NE(r.err.find("does not match"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, TranslateErrors) {
  auto criteria = fixture_path("translate/mood_criteria.txt");
  EXPECT_EQ(run_cli({"translate", "--criteria", criteria}).code, kUsage);
  EXPECT_EQ(run_cli({"translate", "--criteria", criteria, "--transcript", "/nonexistent.jsonl"}).code, kUsage);
  EXPECT_EQ(run_cli({"translate", "--criteria", criteria, "--client", "carrier-pigeon"}).code, kUsage);
  ::unsetenv("MODEL_ENDPOINT");
  EXPECT_EQ(run_cli({"translate", "--criteria", criteria, "--client", "live"}).code, kUsage);
}

TEST(Cli, ServeRefusesBrokenProgram) {
  auto r = run_cli({"serve", "--program", fixture_path("mixed_cycle.dl"), "--port", "0"});
  EXPECT_EQ(r.code, kFailure);
  EXPECT_NE(r.err.find("refusing to start"), std::string::npos);
}

}  // namespace
}  // namespace moodlog::cli
