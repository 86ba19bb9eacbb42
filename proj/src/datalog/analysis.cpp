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

#include "moodlog/datalog/analysis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <set>

namespace moodlog::datalog {

// ---------------------------------------------------------------------------
// Disjunction expansion
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<Literal>> expand(const Conjunction& conjunction) {
  std::vector<std::vector<Literal>> acc(1);
  for (const BodyElement& e : conjunction) {
    if (e.is_literal()) {
      for (auto& partial : acc) partial.push_back(e.literal());
      continue;
    }
    std::vector<std::vector<Literal>> next;
    for (const auto& partial : acc) {
      for (const Conjunction& branch : e.disjunction().branches) {
        for (auto& tail : expand(branch)) {
          auto combined = partial;
          combined.insert(combined.end(), tail.begin(), tail.end());
          next.push_back(std::move(combined));
        }
      }
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

Program expand_disjunctions(const Program& program) {
  Program out;
  out.declarations = program.declarations;
  out.inputs = program.inputs;
  out.outputs = program.outputs;
  out.facts = program.facts;
  for (const Rule& rule : program.rules) {
    if (rule.is_conjunctive()) {
      out.rules.push_back(rule);
      continue;
    }
    for (auto& literals : expand(rule.body)) {
      Rule r;
      r.head = rule.head;
      r.span = rule.span;
      for (auto& l : literals) r.body.push_back(BodyElement{std::move(l)});
      out.rules.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Safety and typing
// ---------------------------------------------------------------------------

std::string to_string(const SemanticError& error) {
  return to_string(error.span) + ": " + error.message;
}

namespace {

void collect_outside(const Term& term, const Atom* skip, std::vector<std::string>& out) {
  if (term.is<CountAggregate>()) {
    if (term.as<CountAggregate>().target.get() == skip) return;
    for (const Term& t : term.as<CountAggregate>().target->args) collect_outside(t, skip, out);
    return;
  }
  if (term.is<ArithExpr>()) {
    collect_outside(*term.as<ArithExpr>().lhs, skip, out);
    collect_outside(*term.as<ArithExpr>().rhs, skip, out);
    return;
  }
  collect_variables(term, out);
}

void for_each_aggregate(const Term& term, const std::function<void(const CountAggregate&)>& fn) {
  if (term.is<CountAggregate>()) {
    fn(term.as<CountAggregate>());
  } else if (term.is<ArithExpr>()) {
    for_each_aggregate(*term.as<ArithExpr>().lhs, fn);
    for_each_aggregate(*term.as<ArithExpr>().rhs, fn);
  }
}

void for_each_aggregate(const Rule& rule, const std::function<void(const CountAggregate&)>& fn) {
  for (const Term& t : rule.head.args) for_each_aggregate(t, fn);
  for (const BodyElement& e : rule.body) {
    if (!e.is_literal() || !e.literal().is_constraint()) continue;
    for_each_aggregate(e.literal().constraint().lhs, fn);
    for_each_aggregate(e.literal().constraint().rhs, fn);
  }
}

}  // namespace

std::vector<std::string> aggregate_group_variables(const Rule& rule, const CountAggregate& aggregate) {
  const Atom* skip = aggregate.target.get();
  std::vector<std::string> elsewhere;
  for (const Term& t : rule.head.args) collect_outside(t, skip, elsewhere);
  for (const BodyElement& e : rule.body) {
    if (!e.is_literal()) continue;
    const Literal& l = e.literal();
    if (l.is_atom()) {
      collect_variables(l.atom(), elsewhere);
    } else {
      collect_outside(l.constraint().lhs, skip, elsewhere);
      collect_outside(l.constraint().rhs, skip, elsewhere);
    }
  }
  std::vector<std::string> target_vars;
  collect_variables(*aggregate.target, target_vars);
  std::vector<std::string> group;
  for (const std::string& v : target_vars) {
    if (std::find(elsewhere.begin(), elsewhere.end(), v) != elsewhere.end()) group.push_back(v);
  }
  return group;
}

namespace {

bool numeric(ValueType t) { return t != ValueType::symbol; }

class SafetyChecker {
 public:
  SafetyChecker(const Program& program, std::vector<SemanticError>& errors)
      : program_(program), errors_(errors) {}

  void check_program() {
    std::set<std::string> seen;
    for (const Declaration& d : program_.declarations) {
      if (!seen.insert(d.name).second) {
        report(SemanticErrorKind::undeclared_relation, "relation '" + d.name + "' is declared more than once", d.span);
      }
    }
    for (const auto* list : {&program_.inputs, &program_.outputs}) {
      for (const RelationRef& r : *list) {
        if (!program_.find_declaration(r.name)) {
          report(SemanticErrorKind::undeclared_relation, "I/O directive names undeclared relation '" + r.name + "'",
                 r.span);
        }
      }
    }
    for (const Atom& fact : program_.facts) check_fact(fact);
    for (const Rule& rule : program_.rules) check_rule(rule);
  }

 private:
  void report(SemanticErrorKind kind, std::string message, const SourceSpan& span) {
    errors_.push_back(SemanticError{kind, std::move(message), span});
  }

  // Declared and arity-correct, or nullptr after reporting.
  const Declaration* resolve(const Atom& atom) {
    const Declaration* d = program_.find_declaration(atom.relation);
    if (!d) {
      report(SemanticErrorKind::undeclared_relation, "relation '" + atom.relation + "' is not declared", atom.span);
      return nullptr;
    }
    if (d->arity() != atom.args.size()) {
      report(SemanticErrorKind::arity_mismatch,
             "relation '" + atom.relation + "' has arity " + std::to_string(d->arity()) + " but is used with " +
                 std::to_string(atom.args.size()) + " argument(s)",
             atom.span);
      return nullptr;
    }
    return d;
  }

  void check_constant(const Value& v, const Param& param, const Atom& atom) {
    if (!coerce(v, param.type)) {
      report(SemanticErrorKind::type_mismatch,
             "constant " + format_value(v) + " does not fit attribute '" + param.name + ":" +
                 std::string(type_name(param.type)) + "' of '" + atom.relation + "'",
             atom.span);
    }
  }

  void check_fact(const Atom& fact) {
    const Declaration* d = resolve(fact);
    for (std::size_t i = 0; i < fact.args.size(); ++i) {
      const Term& t = fact.args[i];
      if (!t.is<Constant>()) {
        report(SemanticErrorKind::unsafe_variable, "fact argument '" + to_string(t) + "' is not a constant", fact.span);
      } else if (d) {
        check_constant(t.as<Constant>().value, d->params[i], fact);
      }
    }
  }

  // ---- per-rule state ----
  const Rule* rule_ = nullptr;
  std::map<std::string, ValueType> types_;
  std::set<std::string> bound_;
  std::set<std::string> reported_unsafe_;

  void check_rule(const Rule& rule) {
    if (!rule.is_conjunctive()) throw std::invalid_argument("check_safety requires an expanded program");
    rule_ = &rule;
    types_.clear();
    bound_.clear();
    reported_unsafe_.clear();
    const std::vector<Literal> body = rule.literals();

    const Declaration* head_decl = resolve(rule.head);
    for (const Term& t : rule.head.args) {
      if (t.is<Wildcard>()) report(SemanticErrorKind::unsafe_variable, "wildcard '_' in rule head", rule.head.span);
    }

    // Body atoms: only plain terms; positive ones bind and type variables.
    for (const Literal& l : body) {
      if (!l.is_atom()) continue;
      const Declaration* d = resolve(l.atom());
      check_plain_args(l.atom(), d, l.is_positive());
    }
    for_each_aggregate(rule, [&](const CountAggregate& agg) {
      const Declaration* d = resolve(*agg.target);
      check_plain_args(*agg.target, d, false);
    });

    // Variables bound through `X = expr`.
    for (bool changed = true; changed;) {
      changed = false;
      for (const Literal& l : body) {
        if (!l.is_constraint() || l.constraint().op != CompareOp::eq) continue;
        const Constraint& c = l.constraint();
        changed |= try_bind(c.lhs, c.rhs) || try_bind(c.rhs, c.lhs);
      }
    }

    // Safety.
    for (const Term& t : rule.head.args) require_bound(t, "the head");
    for (const Literal& l : body) {
      if (l.is_negated()) {
        for (const Term& t : l.atom().args) require_bound(t, "a negated literal");
      } else if (l.is_constraint()) {
        require_bound(l.constraint().lhs, "a constraint");
        require_bound(l.constraint().rhs, "a constraint");
      }
    }

    // Types.
    if (head_decl) {
      for (std::size_t i = 0; i < rule.head.args.size(); ++i) {
        std::optional<ValueType> t = type_of(rule.head.args[i], rule.head.span);
        const Param& p = head_decl->params[i];
        if (t && !(*t == p.type || (*t == ValueType::number && p.type == ValueType::floating))) {
          report(SemanticErrorKind::type_mismatch,
                 "head argument '" + to_string(rule.head.args[i]) + "' has type " + std::string(type_name(*t)) +
                     " but attribute '" + p.name + "' of '" + rule.head.relation + "' is " +
                     std::string(type_name(p.type)),
                 rule.head.span);
        }
      }
    }
    for (const Literal& l : body) {
      if (!l.is_constraint()) continue;
      const Constraint& c = l.constraint();
      auto lt = type_of(c.lhs, l.span);
      auto rt = type_of(c.rhs, l.span);
      if (lt && rt && numeric(*lt) != numeric(*rt)) {
        report(SemanticErrorKind::type_mismatch,
               "constraint '" + to_string(l) + "' compares " + std::string(type_name(*lt)) + " with " +
                   std::string(type_name(*rt)),
               l.span);
      }
    }
  }

  void check_plain_args(const Atom& atom, const Declaration* d, bool binds) {
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      const Term& t = atom.args[i];
      if (t.is<ArithExpr>() || t.is<CountAggregate>()) {
        report(SemanticErrorKind::type_mismatch,
               "expression '" + to_string(t) + "' is not allowed as an argument of body atom '" + atom.relation + "'",
               atom.span);
        continue;
      }
      if (binds && t.is<Variable>()) bound_.insert(t.as<Variable>().name);
      if (!d) continue;
      const Param& p = d->params[i];
      if (t.is<Constant>()) {
        check_constant(t.as<Constant>().value, p, atom);
      } else if (t.is<Variable>()) {
        note_type(t.as<Variable>().name, p.type, atom);
      }
    }
  }

  void note_type(const std::string& var, ValueType type, const Atom& atom) {
    auto [it, inserted] = types_.emplace(var, type);
    if (!inserted && it->second != type) {
      report(SemanticErrorKind::type_mismatch,
             "variable '" + var + "' is used both as " + std::string(type_name(it->second)) + " and as " +
                 std::string(type_name(type)) + " (in '" + atom.relation + "')",
             atom.span);
    }
  }

  std::vector<std::string> free_variables(const Term& t) const {
    std::vector<std::string> out;
    free_variables(t, out);
    return out;
  }

  void free_variables(const Term& t, std::vector<std::string>& out) const {
    if (t.is<CountAggregate>()) {
      for (const std::string& v : aggregate_group_variables(*rule_, t.as<CountAggregate>())) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
    } else if (t.is<ArithExpr>()) {
      free_variables(*t.as<ArithExpr>().lhs, out);
      free_variables(*t.as<ArithExpr>().rhs, out);
    } else {
      collect_variables(t, out);
    }
  }

  bool try_bind(const Term& target, const Term& source) {
    if (!target.is<Variable>()) return false;
    const std::string& name = target.as<Variable>().name;
    if (bound_.contains(name)) return false;
    for (const std::string& v : free_variables(source)) {
      if (!bound_.contains(v)) return false;
    }
    bound_.insert(name);
    if (auto t = type_of(source, rule_->span, /*quiet=*/true)) types_.emplace(name, *t);
    return true;
  }

  void require_bound(const Term& t, std::string_view where) {
    for (const std::string& v : free_variables(t)) {
      if (bound_.contains(v) || !reported_unsafe_.insert(v).second) continue;
      report(SemanticErrorKind::unsafe_variable,
             "variable '" + v + "' in " + std::string(where) + " is not bound by a positive body literal",
             rule_->span);
    }
  }

  std::optional<ValueType> type_of(const Term& t, const SourceSpan& span, bool quiet = false) {
    if (t.is<Constant>()) return t.as<Constant>().value.type();
    if (t.is<CountAggregate>()) return ValueType::number;
    if (t.is<Variable>()) {
      auto it = types_.find(t.as<Variable>().name);
      return it == types_.end() ? std::nullopt : std::optional(it->second);
    }
    if (t.is<ArithExpr>()) {
      const ArithExpr& e = t.as<ArithExpr>();
      auto l = type_of(*e.lhs, span, quiet);
      auto r = type_of(*e.rhs, span, quiet);
      for (const auto& side : {l, r}) {
        if (side == ValueType::symbol) {
          if (!quiet) {
            report(SemanticErrorKind::type_mismatch, "arithmetic on a symbol in '" + to_string(t) + "'", span);
          }
          return std::nullopt;
        }
      }
      if (!l || !r) return std::nullopt;
      return (*l == ValueType::floating || *r == ValueType::floating) ? ValueType::floating : ValueType::number;
    }
    return std::nullopt;
  }

  const Program& program_;
  std::vector<SemanticError>& errors_;
};

}  // namespace

std::vector<SemanticError> check_safety(const Program& program) {
  std::vector<SemanticError> errors;
  SafetyChecker(program, errors).check_program();
  return errors;
}

// ---------------------------------------------------------------------------
// Stratification
// ---------------------------------------------------------------------------

std::string_view to_string(DependencyKind kind) {
  switch (kind) {
    case DependencyKind::positive: return "positive";
    case DependencyKind::negated: return "negated";
    case DependencyKind::aggregated: return "aggregated";
  }
  return "?";
}

StratifiedPlan::StratifiedPlan(Program program, std::vector<PlannedRule> rules, std::vector<Stratum> strata,
                               std::vector<Dependency> dependencies)
    : program_(std::move(program)),
      rules_(std::move(rules)),
      strata_(std::move(strata)),
      dependencies_(std::move(dependencies)) {
  for (std::size_t s = 0; s < strata_.size(); ++s) {
    for (const std::string& r : strata_[s].relations) stratum_of_[r] = s;
  }
}

const Declaration& StratifiedPlan::declaration(std::string_view relation) const {
  const Declaration* d = program_.find_declaration(relation);
  if (!d) throw UnknownRelation(std::string(relation));
  return *d;
}

std::size_t StratifiedPlan::stratum_of(std::string_view relation) const {
  auto it = stratum_of_.find(relation);
  return it == stratum_of_.end() ? 0 : it->second;
}

namespace {

std::vector<Dependency> dependencies_of(const Program& program) {
  std::vector<Dependency> deps;
  for (std::size_t i = 0; i < program.rules.size(); ++i) {
    const Rule& rule = program.rules[i];
    for (const BodyElement& e : rule.body) {
      if (!e.is_literal() || !e.literal().is_atom()) continue;
      const Literal& l = e.literal();
      deps.push_back(Dependency{rule.head.relation, l.atom().relation,
                                l.is_negated() ? DependencyKind::negated : DependencyKind::positive, i});
    }
    for_each_aggregate(rule, [&](const CountAggregate& agg) {
      deps.push_back(Dependency{rule.head.relation, agg.target->relation, DependencyKind::aggregated, i});
    });
  }
  return deps;
}

struct Graph {
  std::vector<std::string> nodes;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<const Dependency*>> out;

  Graph(const Program& program, const std::vector<Dependency>& deps) {
    auto add = [&](const std::string& name) {
      if (index.emplace(name, nodes.size()).second) nodes.push_back(name);
    };
    for (const Declaration& d : program.declarations) add(d.name);
    for (const Dependency& d : deps) {
      add(d.head);
      add(d.body);
    }
    out.resize(nodes.size());
    for (const Dependency& d : deps) out[index.at(d.head)].push_back(&d);
  }

  // Tarjan; components come out dependencies-first.
  std::vector<std::vector<std::size_t>> components() const {
    std::vector<int> order(nodes.size(), -1), low(nodes.size(), 0);
    std::vector<bool> on_stack(nodes.size(), false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> result;
    int counter = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
      order[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (const Dependency* d : out[v]) {
        std::size_t w = index.at(d->body);
        if (order[w] < 0) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
      }
      if (low[v] == order[v]) {
        std::vector<std::size_t> component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        result.push_back(std::move(component));
      }
    };
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (order[v] < 0) visit(v);
    }
    return result;
  }
};

std::string edge_label(const Dependency& d) {
  switch (d.kind) {
    case DependencyKind::negated: return "!" + d.body;
    case DependencyKind::aggregated: return "count:" + d.body;
    default: return d.body;
  }
}

// Builds the cycle closed by `bad` (head -> body) inside one component.
CycleError make_cycle_error(const Program& program, const Graph& g, const std::vector<std::size_t>& comp_of,
                            const Dependency& bad) {
  std::size_t start = g.index.at(bad.body), goal = g.index.at(bad.head);
  std::map<std::size_t, const Dependency*> parent;
  std::deque<std::size_t> queue{start};
  std::set<std::size_t> seen{start};
  while (!queue.empty() && !seen.contains(goal) ) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (const Dependency* d : g.out[v]) {
      std::size_t w = g.index.at(d->body);
      if (comp_of[w] != comp_of[start] || !seen.insert(w).second) continue;
      parent[w] = d;
      queue.push_back(w);
    }
  }
  std::vector<const Dependency*> path{&bad};
  if (start != goal) {
    std::vector<const Dependency*> back;
    for (std::size_t v = goal; v != start; v = g.index.at(parent.at(v)->head)) back.push_back(parent.at(v));
    path.insert(path.end(), back.rbegin(), back.rend());
  }
  std::vector<std::string> cycle{bad.head};
  std::vector<SourceSpan> spans;
  std::string text = bad.head;
  for (const Dependency* d : path) {
    cycle.push_back(d->body);
    text += " -> " + edge_label(*d);
    SourceSpan span = program.rules[d->rule].span;
    if (std::find(spans.begin(), spans.end(), span) == spans.end()) spans.push_back(span);
  }
  std::string kind = bad.kind == DependencyKind::negated ? "negation" : "aggregation";
  std::string message = "cycle through " + kind + ": " + text;
  for (const SourceSpan& s : spans) message += " (rule at line " + std::to_string(s.line) + ")";
  return CycleError(std::move(cycle), std::move(spans), std::move(message));
}

}  // namespace

std::vector<CycleError> find_unstratifiable_cycles(const Program& program) {
  std::vector<Dependency> deps = dependencies_of(program);
  Graph g(program, deps);
  auto comps = g.components();
  std::vector<std::size_t> comp_of(g.nodes.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (std::size_t v : comps[c]) comp_of[v] = c;
  }
  std::vector<CycleError> errors;
  std::set<std::size_t> reported;
  for (const Dependency& d : deps) {
    if (d.kind == DependencyKind::positive) continue;
    std::size_t c = comp_of[g.index.at(d.head)];
    if (c != comp_of[g.index.at(d.body)] || !reported.insert(c).second) continue;
    errors.push_back(make_cycle_error(program, g, comp_of, d));
  }
  return errors;
}

StratifiedPlan stratify(const Program& program) {
  if (auto cycles = find_unstratifiable_cycles(program); !cycles.empty()) throw cycles.front();

  std::vector<Dependency> deps = dependencies_of(program);
  Graph g(program, deps);
  auto comps = g.components();
  std::vector<std::size_t> level(g.nodes.size(), 0);
  std::size_t max_level = 0;
  for (const auto& comp : comps) {
    std::size_t lvl = 0;
    for (std::size_t v : comp) {
      for (const Dependency* d : g.out[v]) {
        std::size_t w = g.index.at(d->body);
        if (std::find(comp.begin(), comp.end(), w) != comp.end()) continue;
        lvl = std::max(lvl, level[w] + (d->kind == DependencyKind::positive ? 0 : 1));
      }
    }
    for (std::size_t v : comp) level[v] = lvl;
    max_level = std::max(max_level, lvl);
  }

  std::vector<Stratum> strata(max_level + 1);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) strata[level[v]].relations.push_back(g.nodes[v]);

  std::vector<PlannedRule> rules;
  for (std::size_t i = 0; i < program.rules.size(); ++i) {
    const Rule& r = program.rules[i];
    std::size_t s = level[g.index.at(r.head.relation)];
    rules.push_back(PlannedRule{i, r, r.literals(), s});
    strata[s].rules.push_back(i);
  }
  return StratifiedPlan(program, std::move(rules), std::move(strata), std::move(deps));
}

ProgramError::ProgramError(std::vector<std::string> problems)
    : std::runtime_error(problems.empty() ? std::string("invalid program") : problems.front()),
      problems_(std::move(problems)) {}

std::shared_ptr<const StratifiedPlan> compile(std::string_view source) {
  ParseResult parsed = parse(source);
  std::vector<std::string> problems;
  for (const ParseError& e : parsed.errors) problems.push_back(to_string(e));
  if (!problems.empty()) throw ProgramError(std::move(problems));
  Program expanded = expand_disjunctions(parsed.program);
  for (const SemanticError& e : check_safety(expanded)) problems.push_back(to_string(e));
  if (!problems.empty()) throw ProgramError(std::move(problems));
  try {
    return std::make_shared<const StratifiedPlan>(stratify(expanded));
  } catch (const CycleError& e) {
    throw ProgramError({e.what()});
  }
}

}  // namespace moodlog::datalog
