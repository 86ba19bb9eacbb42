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

#include "moodlog/datalog/provenance.hpp"

#include <algorithm>
#include <functional>

namespace moodlog::datalog {

using nlohmann::json;

std::string to_string(const GroundAtom& atom) { return atom.relation + "(" + format_tuple(atom.args) + ")"; }

GroundAtom ground(const Atom& atom) {
  GroundAtom g{atom.relation, {}};
  for (const Term& t : atom.args) {
    if (!t.is<Constant>()) throw std::invalid_argument("atom '" + to_string(atom) + "' is not ground");
    g.args.push_back(t.as<Constant>().value);
  }
  return g;
}

std::string_view to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::constraint: return "constraint";
    case CheckKind::absent: return "absent";
    case CheckKind::count: return "count";
  }
  return "?";
}

ProvenanceIndex::ProvenanceIndex(std::map<GroundAtom, Justification> justified, FactStore inputs,
                                 std::map<std::string, std::vector<ValueType>, std::less<>> relations,
                                 std::vector<RuleInfo> rules)
    : justified_(std::move(justified)),
      inputs_(std::move(inputs)),
      relations_(std::move(relations)),
      rules_(std::move(rules)) {}

const Justification* ProvenanceIndex::find(const GroundAtom& fact) const {
  auto it = justified_.find(fact);
  return it == justified_.end() ? nullptr : &it->second;
}

bool ProvenanceIndex::is_input(const GroundAtom& fact) const { return inputs_.contains(fact.relation, fact.args); }

std::optional<GroundAtom> ProvenanceIndex::normalize(const GroundAtom& fact) const {
  auto it = relations_.find(fact.relation);
  if (it == relations_.end() || it->second.size() != fact.args.size()) return std::nullopt;
  GroundAtom out{fact.relation, {}};
  for (std::size_t i = 0; i < fact.args.size(); ++i) {
    auto v = coerce(fact.args[i], it->second[i]);
    if (!v) return std::nullopt;
    out.args.push_back(std::move(*v));
  }
  return out;
}

namespace {

Term substitute(const Term& term, const Bindings& bindings) {
  if (term.is<Variable>()) {
    for (const auto& [name, value] : bindings) {
      if (name == term.as<Variable>().name) return Term::constant(value);
    }
    return term;
  }
  if (term.is<ArithExpr>()) {
    const ArithExpr& e = term.as<ArithExpr>();
    return Term::arith(e.op, substitute(*e.lhs, bindings), substitute(*e.rhs, bindings));
  }
  if (term.is<CountAggregate>()) {
    Atom target = *term.as<CountAggregate>().target;
    for (Term& a : target.args) a = substitute(a, bindings);
    return Term::count(std::move(target));
  }
  return term;
}

std::string grounded(const Literal& literal, const Bindings& bindings) {
  if (literal.is_atom()) {
    Atom a = literal.atom();
    for (Term& t : a.args) t = substitute(t, bindings);
    return (literal.is_negated() ? "!" : "") + to_string(a);
  }
  const Constraint& c = literal.constraint();
  return to_string(substitute(c.lhs, bindings)) + " " + to_string(c.op) + " " + to_string(substitute(c.rhs, bindings));
}

void for_each_aggregate(const Term& term, const std::function<void(const CountAggregate&)>& fn) {
  if (term.is<CountAggregate>()) {
    fn(term.as<CountAggregate>());
  } else if (term.is<ArithExpr>()) {
    for_each_aggregate(*term.as<ArithExpr>().lhs, fn);
    for_each_aggregate(*term.as<ArithExpr>().rhs, fn);
  }
}

Check count_check(const CountAggregate& agg, const Rule& rule, const Bindings& bindings, const FactStore& store) {
  auto matches = aggregate_matches(agg, rule, bindings, store);
  AggregateEvidence ev;
  ev.relation = agg.target->relation;
  for (const std::string& v : aggregate_group_variables(rule, agg)) {
    for (const auto& [name, value] : bindings) {
      if (name == v) ev.group_key.push_back(value);
    }
  }
  ev.count = static_cast<std::int64_t>(matches.size());
  ev.truncated = matches.size() > kMaxAggregateEvidence;
  for (std::size_t i = 0; i < matches.size() && i < kMaxAggregateEvidence; ++i) ev.tuples.push_back(*matches[i]);
  Check c;
  c.kind = CheckKind::count;
  c.text = to_string(substitute(Term{agg}, bindings)) + " = " + std::to_string(ev.count);
  c.evidence = std::move(ev);
  return c;
}

std::vector<Check> checks_for(const StratifiedPlan& plan, const PlannedRule& rule, const Bindings& bindings,
                              const FactStore& store) {
  std::vector<Check> checks;
  auto add_counts = [&](const Term& t) {
    for_each_aggregate(t, [&](const CountAggregate& agg) {
      checks.push_back(count_check(agg, rule.rule, bindings, store));
    });
  };
  for (const Term& t : rule.rule.head.args) add_counts(t);
  for (const Literal& l : rule.body) {
    if (l.is_negated()) {
      Check c;
      c.kind = CheckKind::absent;
      c.text = grounded(l, bindings);
      c.stratum = plan.stratum_of(l.atom().relation);
      checks.push_back(std::move(c));
    } else if (l.is_constraint()) {
      add_counts(l.constraint().lhs);
      add_counts(l.constraint().rhs);
      Check c;
      c.kind = CheckKind::constraint;
      c.text = grounded(l, bindings);
      checks.push_back(std::move(c));
    }
  }
  return checks;
}

class Recorder : public DerivationObserver {
 public:
  void derived(const PlannedRule& rule, const Atom& head, const Tuple& tuple, const Bindings& bindings,
               const std::vector<const Tuple*>& matched) override {
    Justification j;
    j.rule = rule.id;
    j.bindings = bindings;
    std::sort(j.bindings.begin(), j.bindings.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      if (rule.body[i].is_positive()) j.premises.push_back(GroundAtom{rule.body[i].atom().relation, *matched[i]});
    }
    justified.emplace(GroundAtom{head.relation, tuple}, std::move(j));
  }

  std::map<GroundAtom, Justification> justified;
};

}  // namespace

ProvenanceResult evaluate_with_provenance(const StratifiedPlan& plan, const FactStore& input) {
  Recorder recorder;
  FactStore facts = evaluate(plan, input, &recorder);
  for (auto& [fact, j] : recorder.justified) {
    j.checks = checks_for(plan, plan.rules()[j.rule], j.bindings, facts);
  }
  std::map<std::string, std::vector<ValueType>, std::less<>> relations;
  for (const Declaration& d : plan.program().declarations) {
    auto& types = relations[d.name];
    for (const Param& p : d.params) types.push_back(p.type);
  }
  std::vector<RuleInfo> rules;
  for (const PlannedRule& r : plan.rules()) rules.push_back(RuleInfo{to_string(r.rule), static_cast<std::size_t>(r.rule.span.line)});
  ProvenanceIndex index(std::move(recorder.justified), prepare_input(plan, input), std::move(relations),
                        std::move(rules));
  return ProvenanceResult{std::move(facts), std::move(index)};
}

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

std::size_t DerivationTree::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c->depth() + 1);
  return d;
}

std::size_t DerivationTree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c->node_count();
  return n;
}

bool operator==(const DerivationTree& a, const DerivationTree& b) {
  if (a.fact != b.fact || a.rule != b.rule || a.line != b.line || a.bindings != b.bindings || a.checks != b.checks ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!(*a.children[i] == *b.children[i])) return false;
  }
  return true;
}

std::shared_ptr<const DerivationTree> explain(const GroundAtom& fact, const ProvenanceIndex& index) {
  if (!index.knows_relation(fact.relation)) {
    throw NotDerived(NotDerived::Reason::unknown_relation, "unknown relation '" + fact.relation + "'");
  }
  auto normalized = index.normalize(fact);
  if (!normalized) {
    throw NotDerived(NotDerived::Reason::absent_tuple, to_string(fact) + " does not match the declaration");
  }
  std::map<GroundAtom, std::shared_ptr<const DerivationTree>> memo;
  std::function<std::shared_ptr<const DerivationTree>(const GroundAtom&)> build =
      [&](const GroundAtom& f) -> std::shared_ptr<const DerivationTree> {
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    auto node = std::make_shared<DerivationTree>();
    node->fact = f;
    if (!index.is_input(f)) {
      const Justification* j = index.find(f);
      if (!j) throw NotDerived(NotDerived::Reason::absent_tuple, to_string(f) + " was not derived");
      const RuleInfo& info = index.rule(j->rule);
      node->rule = DerivationTree::RuleRef{j->rule, info.text};
      node->line = info.line;
      node->bindings = j->bindings;
      node->checks = j->checks;
      for (const GroundAtom& p : j->premises) node->children.push_back(build(p));
    }
    memo.emplace(f, node);
    return node;
  };
  return build(*normalized);
}

namespace {

json value_to_json(const Value& v) {
  if (v.is_symbol()) return v.as_symbol();
  if (v.is_number()) return v.as_number();
  return v.as_float();
}

Value value_from_json(const json& j) {
  if (j.is_string()) return Value::symbol(j.get<std::string>());
  if (j.is_number_integer()) return Value::number(j.get<std::int64_t>());
  if (j.is_number_float()) return Value::floating(j.get<double>());
  throw std::invalid_argument("unsupported value in tree document: " + j.dump());
}

json tuple_to_json(const Tuple& t) {
  json out = json::array();
  for (const Value& v : t) out.push_back(value_to_json(v));
  return out;
}

Tuple tuple_from_json(const json& j) {
  Tuple t;
  for (const json& v : j) t.push_back(value_from_json(v));
  return t;
}

void render_text(const DerivationTree& node, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += to_string(node.fact);
  if (node.is_input()) {
    out += " ⟵ input\n";
    return;
  }
  out += " ⟵ #" + std::to_string(node.rule->id) + "@" + std::to_string(node.line) + " [";
  for (std::size_t i = 0; i < node.bindings.size(); ++i) {
    if (i) out += ", ";
    out += node.bindings[i].first + "=" + format_value(node.bindings[i].second);
  }
  out += "]";
  if (!node.checks.empty()) {
    out += " {";
    for (std::size_t i = 0; i < node.checks.size(); ++i) {
      if (i) out += "; ";
      out += node.checks[i].text;
    }
    out += "}";
  }
  out += "\n";
  for (const auto& c : node.children) render_text(*c, depth + 1, out);
}

}  // namespace

json tree_to_json(const DerivationTree& tree) {
  json j;
  j["fact"] = {{"relation", tree.fact.relation}, {"args", tuple_to_json(tree.fact.args)}};
  if (tree.rule) {
    j["rule"] = {{"id", tree.rule->id}, {"text", tree.rule->text}};
    j["line"] = tree.line;
  } else {
    j["rule"] = nullptr;
    j["line"] = nullptr;
  }
  j["bindings"] = json::object();
  for (const auto& [name, value] : tree.bindings) j["bindings"][name] = value_to_json(value);
  j["children"] = json::array();
  for (const auto& c : tree.children) j["children"].push_back(tree_to_json(*c));
  j["checks"] = json::array();
  for (const Check& c : tree.checks) {
    json cj = {{"kind", std::string(to_string(c.kind))}, {"text", c.text}};
    if (c.kind == CheckKind::absent) cj["stratum"] = c.stratum;
    if (c.evidence) {
      cj["aggregate"] = {{"relation", c.evidence->relation},
                         {"group", tuple_to_json(c.evidence->group_key)},
                         {"count", c.evidence->count},
                         {"truncated", c.evidence->truncated}};
      json tuples = json::array();
      for (const Tuple& t : c.evidence->tuples) tuples.push_back(tuple_to_json(t));
      cj["aggregate"]["tuples"] = std::move(tuples);
    }
    j["checks"].push_back(std::move(cj));
  }
  return j;
}

DerivationTree tree_from_json(const json& j) {
  DerivationTree tree;
  tree.fact.relation = j.at("fact").at("relation").get<std::string>();
  tree.fact.args = tuple_from_json(j.at("fact").at("args"));
  if (!j.at("rule").is_null()) {
    tree.rule = DerivationTree::RuleRef{j["rule"].at("id").get<std::size_t>(), j["rule"].at("text").get<std::string>()};
    tree.line = j.at("line").get<std::size_t>();
  }
  for (const auto& [name, value] : j.at("bindings").items()) tree.bindings.emplace_back(name, value_from_json(value));
  for (const json& c : j.at("children")) tree.children.push_back(std::make_shared<DerivationTree>(tree_from_json(c)));
  for (const json& cj : j.at("checks")) {
    Check c;
    std::string kind = cj.at("kind").get<std::string>();
    if (kind == "constraint") {
      c.kind = CheckKind::constraint;
    } else if (kind == "absent") {
      c.kind = CheckKind::absent;
    } else if (kind == "count") {
      c.kind = CheckKind::count;
    } else {
      throw std::invalid_argument("unknown check kind '" + kind + "'");
    }
    c.text = cj.at("text").get<std::string>();
    if (cj.contains("stratum")) c.stratum = cj["stratum"].get<std::size_t>();
    if (cj.contains("aggregate")) {
      const json& a = cj["aggregate"];
      AggregateEvidence ev;
      ev.relation = a.at("relation").get<std::string>();
      ev.group_key = tuple_from_json(a.at("group"));
      ev.count = a.at("count").get<std::int64_t>();
      ev.truncated = a.at("truncated").get<bool>();
      for (const json& t : a.at("tuples")) ev.tuples.push_back(tuple_from_json(t));
      c.evidence = std::move(ev);
    }
    tree.checks.push_back(std::move(c));
  }
  return tree;
}

std::string render_tree(const DerivationTree& tree, TreeFormat format) {
  if (format == TreeFormat::structured) return tree_to_json(tree).dump(2);
  std::string out;
  render_text(tree, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

namespace {

bool matches(const Atom& atom, const Bindings& bindings, const GroundAtom& fact, const Rule& rule,
             const FactStore& store) {
  if (atom.relation != fact.relation || atom.args.size() != fact.args.size()) return false;
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (atom.args[i].is<Wildcard>()) continue;
    if (!compare_values(CompareOp::eq, evaluate_term(atom.args[i], rule, bindings, store), fact.args[i])) return false;
  }
  return true;
}

void replay_node(const DerivationTree& node, const StratifiedPlan& plan, const FactStore& input,
                 const FactStore& result, std::vector<std::string>& problems) {
  const std::string where = to_string(node.fact);
  if (node.is_input()) {
    if (!input.contains(node.fact.relation, node.fact.args)) problems.push_back(where + ": leaf is not an input fact");
    return;
  }
  if (node.rule->id >= plan.rules().size()) {
    problems.push_back(where + ": unknown rule id");
    return;
  }
  const PlannedRule& pr = plan.rules()[node.rule->id];
  const Rule& rule = pr.rule;
  try {
    const Declaration& decl = plan.declaration(rule.head.relation);
    GroundAtom head{rule.head.relation, {}};
    for (std::size_t i = 0; i < rule.head.args.size(); ++i) {
      Value v = evaluate_term(rule.head.args[i], rule, node.bindings, result);
      head.args.push_back(coerce(v, decl.params[i].type).value_or(v));
    }
    if (head != node.fact) problems.push_back(where + ": head instantiates to " + to_string(head));

    std::size_t child = 0;
    for (const Literal& l : pr.body) {
      if (l.is_positive()) {
        if (child >= node.children.size() ||
            !matches(l.atom(), node.bindings, node.children[child]->fact, rule, result)) {
          problems.push_back(where + ": premise " + to_string(l) + " has no matching child");
        }
        ++child;
      } else if (l.is_negated()) {
        const Relation* r = result.find(l.atom().relation);
        bool present = false;
        if (r) {
          for (const Tuple& t : *r) {
            if (matches(l.atom(), node.bindings, GroundAtom{l.atom().relation, t}, rule, result)) {
              present = true;
              break;
            }
          }
        }
        if (present) problems.push_back(where + ": negated literal " + to_string(l) + " holds");
      } else {
        const Constraint& c = l.constraint();
        if (!compare_values(c.op, evaluate_term(c.lhs, rule, node.bindings, result),
                            evaluate_term(c.rhs, rule, node.bindings, result))) {
          problems.push_back(where + ": constraint " + to_string(l) + " fails");
        }
      }
    }
    if (child != node.children.size()) problems.push_back(where + ": wrong number of children");
  } catch (const std::exception& e) {
    problems.push_back(where + ": " + e.what());
  }
  for (const auto& c : node.children) replay_node(*c, plan, input, result, problems);
}

}  // namespace

std::vector<std::string> replay(const DerivationTree& tree, const StratifiedPlan& plan, const FactStore& input,
                                const FactStore& result) {
  std::vector<std::string> problems;
  FactStore prepared = prepare_input(plan, input);
  replay_node(tree, plan, prepared, result, problems);
  return problems;
}

}  // namespace moodlog::datalog
