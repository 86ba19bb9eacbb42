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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "moodlog/datalog/analysis.hpp"
#include "moodlog/datalog/evaluator.hpp"
#include "moodlog/datalog/fact_store.hpp"

namespace moodlog::datalog {

struct GroundAtom {
  std::string relation;
  Tuple args;

  auto operator<=>(const GroundAtom&) const = default;
  bool operator==(const GroundAtom&) const = default;
};

std::string to_string(const GroundAtom& atom);
GroundAtom ground(const Atom& atom);  // requires constant arguments

// Counted tuples are kept only up to this many.
inline constexpr std::size_t kMaxAggregateEvidence = 50;

struct AggregateEvidence {
  std::string relation;
  Tuple group_key;
  std::int64_t count = 0;
  std::vector<Tuple> tuples;
  bool truncated = false;

  bool operator==(const AggregateEvidence&) const = default;
};

enum class CheckKind { constraint, absent, count };

std::string_view to_string(CheckKind kind);

struct Check {
  CheckKind kind = CheckKind::constraint;
  std::string text;
  std::size_t stratum = 0;                  // absent: stratum the relation was finished in
  std::optional<AggregateEvidence> evidence;  // count only

  bool operator==(const Check&) const = default;
};

struct Justification {
  std::size_t rule = 0;
  Bindings bindings;
  std::vector<GroundAtom> premises;  // one per positive body literal, in body order
  std::vector<Check> checks;
};

struct RuleInfo {
  std::string text;
  std::size_t line = 0;
};

class NotDerived : public std::runtime_error {
 public:
  enum class Reason { unknown_relation, absent_tuple };

  NotDerived(Reason reason, const std::string& message) : std::runtime_error(message), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

// Everything needed to explain facts of one evaluation.
class ProvenanceIndex {
 public:
  ProvenanceIndex() = default;
  ProvenanceIndex(std::map<GroundAtom, Justification> justified, FactStore inputs,
                  std::map<std::string, std::vector<ValueType>, std::less<>> relations, std::vector<RuleInfo> rules);

  const Justification* find(const GroundAtom& fact) const;
  bool is_input(const GroundAtom& fact) const;
  bool knows_relation(std::string_view relation) const { return relations_.contains(relation); }
  // Coerces numbers for float columns; nullopt for unknown relations or bad arity.
  std::optional<GroundAtom> normalize(const GroundAtom& fact) const;

  const RuleInfo& rule(std::size_t id) const { return rules_.at(id); }
  const std::map<GroundAtom, Justification>& justifications() const { return justified_; }
  const FactStore& inputs() const { return inputs_; }

 private:
  std::map<GroundAtom, Justification> justified_;
  FactStore inputs_;
  std::map<std::string, std::vector<ValueType>, std::less<>> relations_;
  std::vector<RuleInfo> rules_;
};

struct ProvenanceResult {
  FactStore facts;
  ProvenanceIndex index;
};

// Same fact store as evaluate(); the index keeps the first derivation of
// every derived tuple.
ProvenanceResult evaluate_with_provenance(const StratifiedPlan& plan, const FactStore& input);

struct DerivationTree {
  struct RuleRef {
    std::size_t id = 0;
    std::string text;
    bool operator==(const RuleRef&) const = default;
  };

  GroundAtom fact;
  std::optional<RuleRef> rule;  // empty for input facts
  std::size_t line = 0;
  Bindings bindings;
  std::vector<std::shared_ptr<const DerivationTree>> children;
  std::vector<Check> checks;

  bool is_input() const { return !rule.has_value(); }
  std::size_t depth() const;
  std::size_t node_count() const;
};

bool operator==(const DerivationTree& a, const DerivationTree& b);

// Throws NotDerived. Shared premises are shared subtrees.
std::shared_ptr<const DerivationTree> explain(const GroundAtom& fact, const ProvenanceIndex& index);

enum class TreeFormat { text, structured };

// text: one node per line, "fact ⟵ #rule@line [bindings]", two spaces of
// indentation per level. structured: JSON document.
std::string render_tree(const DerivationTree& tree, TreeFormat format);

nlohmann::json tree_to_json(const DerivationTree& tree);
DerivationTree tree_from_json(const nlohmann::json& document);

// Re-checks a tree against the program: head instantiation, premises,
// constraints, absences and counts. Returns the problems found.
std::vector<std::string> replay(const DerivationTree& tree, const StratifiedPlan& plan, const FactStore& input,
                                const FactStore& result);

}  // namespace moodlog::datalog
