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

#include <chrono>

#include <gtest/gtest.h>

#include "moodlog/datalog/evaluator.hpp"
#include "support/test_support.hpp"

namespace moodlog::datalog {
namespace {

using moodlog::testing::read_fixture;
using moodlog::testing::store_of;

Tuple T(std::initializer_list<Value> values) { return Tuple(values); }
Value S(const char* s) { return Value::symbol(s); }
Value N(std::int64_t n) { return Value::number(n); }

TEST(Evaluate, EdgePath) {
  auto plan = compile(read_fixture("edge_path.dl"));
  auto start = std::chrono::steady_clock::now();
  FactStore out = evaluate(*plan, store_of("Edge(1, 2). Edge(2, 3)."));
  auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(query(out, "Path"), (std::set<Tuple>{T({N(1), N(2)}), T({N(2), N(3)}), T({N(1), N(3)})}));
  EXPECT_EQ(query(out, "Edge").size(), 2u);
  EXPECT_LT(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count(), 10);
}

TEST(Evaluate, ListingTwoPatientA) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore out = evaluate(*plan, store_of(R"(
    Observed("PatientA", "SymptomA", 3.5). Observed("PatientA", "SymptomB", 3.5).
    History("PatientA", "ConditionC", 2).)"));
  EXPECT_EQ(query(out, "Diagnosis"), (std::set<Tuple>{T({S("PatientA"), S("DisorderD")})}));
  EXPECT_EQ(query(out, "CoreCount"), (std::set<Tuple>{T({S("PatientA"), N(2)})}));
  EXPECT_EQ(query(out, "QualCount"), (std::set<Tuple>{T({S("PatientA"), N(0)})}));
  EXPECT_EQ(query(out, "TotalCount"), (std::set<Tuple>{T({S("PatientA"), N(2)})}));
}

TEST(Evaluate, ListingTwoZeroDefault) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore out = evaluate(*plan, store_of(R"(Observed("PatientB", "SymptomC", 3.0).)"));
  EXPECT_EQ(query(out, "CoreCount"), (std::set<Tuple>{T({S("PatientB"), N(0)})}));
  EXPECT_EQ(query(out, "QualCount"), (std::set<Tuple>{T({S("PatientB"), N(1)})}));
  EXPECT_TRUE(query(out, "Diagnosis").empty());
}

TEST(Evaluate, ZeroDefaultNeverDoubles) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore out = evaluate(*plan, store_of(R"(
    Observed("a", "SymptomA", 2.0). Observed("a", "SymptomC", 1.0).
    Observed("b", "SymptomC", 5.0). Observed("c", "SymptomD", 0.5).)"));
  for (const char* rel : {"CoreCount", "QualCount"}) {
    std::map<Value, int> per_patient;
    for (const Tuple& t : query(out, rel)) ++per_patient[t[0]];
    EXPECT_EQ(per_patient.size(), query(out, "AllPatients").size());
    for (const auto& [p, n] : per_patient) EXPECT_EQ(n, 1) << rel << " " << format_value(p);
  }
}

TEST(Evaluate, ThresholdIsInclusive) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore out = evaluate(*plan, store_of(R"(Observed("p", "SymptomA", 2.0). Observed("p", "SymptomB", 1.9).)"));
  EXPECT_EQ(query(out, "CoreCount"), (std::set<Tuple>{T({S("p"), N(1)})}));
}

TEST(Evaluate, IntegersWidenIntoFloatColumns) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore out = evaluate(*plan, store_of(R"(Observed("p", "SymptomA", 3).)"));
  EXPECT_EQ(query(out, "Core"), (std::set<Tuple>{T({S("p"), S("SymptomA"), Value::floating(3.0)})}));
}

TEST(Evaluate, NeverDerivedRelationIsEmpty) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore out = evaluate(*plan, FactStore());
  EXPECT_TRUE(query(out, "Diagnosis").empty());
  EXPECT_THROW(query(out, "Nope"), UnknownRelation);
}

TEST(Evaluate, RejectsBadInput) {
  auto plan = compile(read_fixture("edge_path.dl"));
  EXPECT_THROW(evaluate(*plan, store_of("Edge(1).")), EvaluationError);
  EXPECT_THROW(evaluate(*plan, store_of("Edge(1, \"x\").")), EvaluationError);
  EXPECT_THROW(evaluate(*plan, store_of("Other(1).")), EvaluationError);
}

TEST(Evaluate, ProgramFactsAreInputs) {
  auto plan = compile(read_fixture("edge_path.dl") + "Edge(7, 8).\n");
  FactStore out = evaluate(*plan, FactStore());
  EXPECT_EQ(query(out, "Path"), (std::set<Tuple>{T({N(7), N(8)})}));
}

TEST(Evaluate, DuplicateFactsCollapse) {
  auto plan = compile(read_fixture("edge_path.dl"));
  FactStore out = evaluate(*plan, store_of("Edge(1, 2). Edge(1, 2)."));
  EXPECT_EQ(query(out, "Edge").size(), 1u);
}

TEST(Evaluate, DivisionByZero) {
  auto plan = compile(".decl A(x:number)\n.decl H(x:number)\nH(y) :- A(x), y = 10 / x.\nA(0).\n");
  try {
    evaluate(*plan, FactStore());
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("division by zero"), std::string::npos);
    EXPECT_EQ(e.span().line, 3u);
  }
}

TEST(Evaluate, IntegerAndFloatArithmetic) {
  auto plan = compile(
      ".decl A(x:number, y:float)\n.decl H(a:number, b:float, c:float)\n"
      "H(x / 2, y * 2, x + y) :- A(x, y).\nA(7, 1.25).\n");
  FactStore out = evaluate(*plan, FactStore());
  EXPECT_EQ(query(out, "H"), (std::set<Tuple>{T({N(3), Value::floating(2.5), Value::floating(8.25)})}));
}

TEST(Evaluate, CountsDistinctTuplesPerGroup) {
  auto plan = compile(
      ".decl E(x:number, y:number, z:number)\n.decl K(x:number)\n.decl C(x:number, n:number)\n.decl D(n:number)\n"
      "C(x, count:E(x, _, _)) :- K(x).\n"
      "D(n) :- n = count:E(_, y, y).\n"
      "E(1, 1, 1). E(1, 2, 1). E(1, 2, 2). E(2, 3, 3). K(1). K(2). K(3).\n");
  FactStore out = evaluate(*plan, FactStore());
  EXPECT_EQ(query(out, "C"), (std::set<Tuple>{T({N(1), N(3)}), T({N(2), N(1)}), T({N(3), N(0)})}));
  EXPECT_EQ(query(out, "D"), (std::set<Tuple>{T({N(3)})}));
}

TEST(Evaluate, NegationSeesFinishedLowerStratum) {
  auto plan = compile(
      ".decl E(x:number, y:number)\n.decl R(x:number, y:number)\n.decl N(x:number)\n.decl U(x:number)\n"
      "R(x, y) :- E(x, y).\nR(x, z) :- R(x, y), E(y, z).\n"
      "N(x) :- E(x, _).\nN(y) :- E(_, y).\n"
      "U(x) :- N(x), !R(1, x).\n"
      "E(1, 2). E(2, 3). E(4, 5).\n");
  FactStore out = evaluate(*plan, FactStore());
  EXPECT_EQ(query(out, "U"), (std::set<Tuple>{T({N(1)}), T({N(4)}), T({N(5)})}));
}

TEST(Evaluate, RepeatedVariableInAtom) {
  auto plan = compile(".decl E(x:number, y:number)\n.decl L(x:number)\nL(x) :- E(x, x).\nE(1, 1). E(1, 2).\n");
  FactStore out = evaluate(*plan, FactStore());
  EXPECT_EQ(query(out, "L"), (std::set<Tuple>{T({N(1)})}));
}

TEST(Evaluate, Determinism) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore in = store_of(R"(Observed("a", "SymptomA", 2.5). Observed("a", "SymptomD", 4.0). History("a", "ConditionC", 1).)");
  EXPECT_EQ(evaluate(*plan, in), evaluate(*plan, in));
}

TEST(Evaluate, Idempotence) {
  auto plan = compile(read_fixture("core_qualifying.dl"));
  FactStore in = store_of(R"(Observed("a", "SymptomA", 2.5). Observed("a", "SymptomB", 4.0). History("a", "ConditionC", 1).
    Observed("b", "SymptomC", 3.0).)");
  FactStore once = evaluate(*plan, in);
  EXPECT_EQ(evaluate(*plan, once), once);
}

TEST(Evaluate, CompareAcrossNumericTypes) {
  EXPECT_TRUE(compare_values(CompareOp::ge, Value::floating(2.0), N(2)));
  EXPECT_TRUE(compare_values(CompareOp::lt, Value::floating(1.5), N(2)));
  EXPECT_TRUE(compare_values(CompareOp::eq, N(3), Value::floating(3.0)));
  EXPECT_FALSE(compare_values(CompareOp::eq, S("3"), N(3)));
  EXPECT_TRUE(compare_values(CompareOp::lt, S("a"), S("b")));
}

}  // namespace
}  // namespace moodlog::datalog
