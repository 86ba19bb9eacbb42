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
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moodlog/datalog/ast.hpp"
#include "moodlog/datalog/fact_store.hpp"
#include "moodlog/datalog/parser.hpp"

namespace moodlog::datalog {

// Rewrites every rule body into disjunctive normal form: one rule per
// combination of branch choices, literals kept in source order.
Program expand_disjunctions(const Program& program);

enum class SemanticErrorKind {
  undeclared_relation,
  arity_mismatch,
  type_mismatch,
  unsafe_variable,
};

struct SemanticError {
  SemanticErrorKind kind;
  std::string message;
  SourceSpan span;
};

std::string to_string(const SemanticError& error);

// Datalog safety plus declaration, arity and type checking. Every variable
// in the head, in a constraint, under negation or inside arithmetic must be
// bound by a positive body atom, or by `X = <expr>` whose other side is
// itself bound. Requires a disjunction-expanded program.
std::vector<SemanticError> check_safety(const Program& program);

// Variables of `count:Target(...)` that also occur elsewhere in the rule.
std::vector<std::string> aggregate_group_variables(const Rule& rule, const CountAggregate& aggregate);

enum class DependencyKind { positive, negated, aggregated };

std::string_view to_string(DependencyKind kind);

// Edge `head` depends on `body` through rule `rule`.
struct Dependency {
  std::string head;
  std::string body;
  DependencyKind kind;
  std::size_t rule;
};

struct PlannedRule {
  std::size_t id = 0;
  Rule rule;
  std::vector<Literal> body;
  std::size_t stratum = 0;
};

struct Stratum {
  std::vector<std::string> relations;
  std::vector<std::size_t> rules;
};

// Rules grouped so every negated or aggregated dependency points to a
// strictly lower stratum. Immutable after construction.
class StratifiedPlan {
 public:
  StratifiedPlan(Program program, std::vector<PlannedRule> rules, std::vector<Stratum> strata,
                 std::vector<Dependency> dependencies);

  const Program& program() const { return program_; }
  const std::vector<PlannedRule>& rules() const { return rules_; }
  const std::vector<Stratum>& strata() const { return strata_; }
  const std::vector<Dependency>& dependencies() const { return dependencies_; }

  const Declaration& declaration(std::string_view relation) const;
  // Stratum of a declared relation; relations without rules sit in stratum 0.
  std::size_t stratum_of(std::string_view relation) const;

 private:
  Program program_;
  std::vector<PlannedRule> rules_;
  std::vector<Stratum> strata_;
  std::vector<Dependency> dependencies_;
  std::map<std::string, std::size_t, std::less<>> stratum_of_;
};

// A cycle through a negated or aggregated dependency.
class CycleError : public std::runtime_error {
 public:
  CycleError(std::vector<std::string> cycle, std::vector<SourceSpan> spans, std::string message)
      : std::runtime_error(std::move(message)), cycle_(std::move(cycle)), spans_(std::move(spans)) {}

  // Relations along the cycle, starting and ending at the same relation.
  const std::vector<std::string>& cycle() const { return cycle_; }
  // Spans of the rules contributing the cycle's edges.
  const std::vector<SourceSpan>& spans() const { return spans_; }

 private:
  std::vector<std::string> cycle_;
  std::vector<SourceSpan> spans_;
};

// Requires a safe, expanded program. Throws CycleError for every
// unstratifiable program (the first cycle found is reported).
StratifiedPlan stratify(const Program& program);

// Same as stratify but returns every offending cycle instead of throwing.
std::vector<CycleError> find_unstratifiable_cycles(const Program& program);

// parse + expand + check + stratify in one step.
class ProgramError : public std::runtime_error {
 public:
  ProgramError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

std::shared_ptr<const StratifiedPlan> compile(std::string_view source);

}  // namespace moodlog::datalog
