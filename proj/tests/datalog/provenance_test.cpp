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

#include "moodlog/datalog/provenance.hpp"
#include "support/test_support.hpp"

namespace moodlog::datalog {
namespace {

using moodlog::testing::atom_of;
using moodlog::testing::read_fixture;
using moodlog::testing::store_of;

class EdgePath : public ::testing::Test {
 protected:
  void SetUp() override {
    plan = compile(read_fixture("edge_path.dl"));
    input = store_of("Edge(1, 2). Edge(2, 3).");
    result = evaluate_with_provenance(*plan, input);
  }

  std::shared_ptr<const StratifiedPlan> plan;
  FactStore input;
  ProvenanceResult result;
};

TEST_F(EdgePath, SameStoreAsPlainEvaluation) { EXPECT_EQ(result.facts, evaluate(*plan, input)); }

TEST_F(EdgePath, RecursiveRuleJustifiesPath13) {
  auto tree = explain(atom_of("Path(1, 3)"), result.index);
  ASSERT_FALSE(tree->is_input());
  EXPECT_EQ(tree->rule->id, 1u);
  EXPECT_EQ(tree->line, 6u);
  ASSERT_EQ(tree->children.size(), 2u);
  EXPECT_EQ(tree->children[0]->fact, atom_of("Path(1, 2)"));
  EXPECT_EQ(tree->children[1]->fact, atom_of("Edge(2, 3)"));
  EXPECT_TRUE(tree->children[1]->is_input());
  EXPECT_EQ(tree->depth(), 2u);
  EXPECT_EQ(tree->bindings, (Bindings{{"x", Value::number(1)}, {"y", Value::number(3)}, {"z", Value::number(2)}}));
}

TEST_F(EdgePath, TextRendering) {
  auto tree = explain(atom_of("Path(1, 3)"), result.index);
  EXPECT_EQ(render_tree(*tree, TreeFormat::text),
            "Path(1, 3) ⟵ #1@6 [x=1, y=3, z=2]\n"
            "  Path(1, 2) ⟵ #0@5 [x=1, y=2]\n"
            "    Edge(1, 2) ⟵ input\n"
            "  Edge(2, 3) ⟵ input\n");
}

TEST_F(EdgePath, InputFactIsLeaf) {
  auto tree = explain(atom_of("Edge(1, 2)"), result.index);
  EXPECT_TRUE(tree->is_input());
  EXPECT_EQ(render_tree(*tree, TreeFormat::text), "Edge(1, 2) ⟵ input\n");
}

TEST_F(EdgePath, NotDerivedReasons) {
  try {
    explain(atom_of("Path(3, 1)"), result.index);
    FAIL();
  } catch (const NotDerived& e) {
    EXPECT_EQ(e.reason(), NotDerived::Reason::absent_tuple);
  }
  try {
    explain(atom_of("Route(1, 3)"), result.index);
    FAIL();
  } catch (const NotDerived& e) {
    EXPECT_EQ(e.reason(), NotDerived::Reason::unknown_relation);
  }
}

TEST_F(EdgePath, StructuredRoundTrip) {
  auto tree = explain(atom_of("Path(1, 3)"), result.index);
  auto doc = nlohmann::json::parse(render_tree(*tree, TreeFormat::structured));
  for (const char* field : {"fact", "rule", "line", "bindings", "children", "checks"}) {
    EXPECT_TRUE(doc.contains(field)) << field;
  }
  EXPECT_EQ(tree_from_json(doc), *tree);
}

TEST_F(EdgePath, EveryDerivedFactReplays) {
  std::size_t derived = 0;
  for (const Tuple& t : query(result.facts, "Path")) {
    GroundAtom fact{"Path", t};
    ASSERT_NE(result.index.find(fact), nullptr);
    auto tree = explain(fact, result.index);
    EXPECT_TRUE(replay(*tree, *plan, input, result.facts).empty());
    ++derived;
  }
  EXPECT_EQ(derived, result.index.justifications().size());
}

TEST(Provenance, ListingTwoDiagnosisTree) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore input = store_of(R"(
    Observed("PatientA", "SymptomA", 3.5). Observed("PatientA", "SymptomB", 3.5).
    History("PatientA", "ConditionC", 2).)");
  auto result = evaluate_with_provenance(*plan, input);
  auto tree = explain(atom_of(R"(Diagnosis("PatientA", "DisorderD"))"), result.index);
  ASSERT_EQ(tree->children.size(), 3u);
  EXPECT_EQ(tree->children[0]->fact, atom_of(R"(CoreCount("PatientA", 2))"));
  EXPECT_EQ(tree->children[1]->fact, atom_of(R"(TotalCount("PatientA", 2))"));
  EXPECT_EQ(tree->children[2]->fact, atom_of(R"(History("PatientA", "ConditionC", 2))"));
  ASSERT_EQ(tree->checks.size(), 3u);
  EXPECT_EQ(tree->checks[0].text, "2 >= 1");

  auto core = explain(atom_of(R"(CoreCount("PatientA", 2))"), result.index);
  ASSERT_EQ(core->checks.size(), 1u);
  const Check& c = core->checks[0];
  EXPECT_EQ(c.kind, CheckKind::count);
  ASSERT_TRUE(c.evidence.has_value());
  EXPECT_EQ(c.evidence->count, 2);
  EXPECT_EQ(c.evidence->tuples.size(), 2u);
  EXPECT_EQ(c.evidence->group_key, (Tuple{Value::symbol("PatientA")}));
  EXPECT_EQ(c.text, R"(count:Core("PatientA", _, _) = 2)");

  auto qual = explain(atom_of(R"(QualCount("PatientA", 0))"), result.index);
  ASSERT_EQ(qual->checks.size(), 1u);
  EXPECT_EQ(qual->checks[0].kind, CheckKind::absent);
  EXPECT_EQ(qual->checks[0].text, R"(!Qual("PatientA", _, _))");
  EXPECT_EQ(qual->checks[0].stratum, 0u);

  for (const auto& [fact, j] : result.index.justifications()) {
    auto t = explain(fact, result.index);
    auto problems = replay(*t, *plan, input, result.facts);
    EXPECT_TRUE(problems.empty()) << to_string(fact) << ": " << problems.front();
    EXPECT_EQ(tree_from_json(tree_to_json(*t)), *t);
  }
}

TEST(Provenance, AggregateEvidenceIsBounded) {
  std::string src = ".decl A(x:number, y:number)\n.decl C(x:number, n:number)\nC(x, count:A(x, _)) :- A(x, _).\n";
  for (int i = 0; i < 60; ++i) src += "A(1, " + std::to_string(i) + ").\n";
  auto plan = compile(src);
  auto result = evaluate_with_provenance(*plan, FactStore());
  auto tree = explain(atom_of("C(1, 60)"), result.index);
  const auto& ev = *tree->checks.at(0).evidence;
  EXPECT_EQ(ev.count, 60);
  EXPECT_TRUE(ev.truncated);
  EXPECT_EQ(ev.tuples.size(), kMaxAggregateEvidence);
}

TEST(Provenance, ReplayCatchesTampering) {
  auto plan = compile(read_fixture("edge_path.dl"));
  FactStore input = store_of("Edge(1, 2). Edge(2, 3).");
  auto result = evaluate_with_provenance(*plan, input);
  DerivationTree tree = *explain(atom_of("Path(1, 3)"), result.index);
  tree.bindings[2].second = Value::number(9);
  EXPECT_FALSE(replay(tree, *plan, input, result.facts).empty());
}

}  // namespace
}  // namespace moodlog::datalog
