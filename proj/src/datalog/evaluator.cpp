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

#include "moodlog/datalog/evaluator.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace moodlog::datalog {

bool compare_values(CompareOp op, const Value& lhs, const Value& rhs) {
  std::partial_ordering order = std::partial_ordering::unordered;
  if (lhs.is_symbol() && rhs.is_symbol()) {
    order = lhs.as_symbol() <=> rhs.as_symbol();
  } else if (lhs.is_number() && rhs.is_number()) {
    order = lhs.as_number() <=> rhs.as_number();
  } else if (lhs.is_numeric() && rhs.is_numeric()) {
    order = lhs.as_double() <=> rhs.as_double();
  }
  switch (op) {
    case CompareOp::eq: return order == 0;
    case CompareOp::ne: return order != 0;
    case CompareOp::lt: return order < 0;
    case CompareOp::le: return order <= 0;
    case CompareOp::gt: return order > 0;
    case CompareOp::ge: return order >= 0;
  }
  return false;
}

namespace {

Value apply_arith(ArithOp op, const Value& a, const Value& b, const Rule& rule) {
  if (a.is_symbol() || b.is_symbol()) {
    throw EvaluationError("arithmetic on symbol value in rule '" + to_string(rule) + "'", rule.span);
  }
  if (a.is_number() && b.is_number()) {
    std::int64_t x = a.as_number(), y = b.as_number();
    switch (op) {
      case ArithOp::add: return Value::number(x + y);
      case ArithOp::sub: return Value::number(x - y);
      case ArithOp::mul: return Value::number(x * y);
      case ArithOp::div:
        if (y == 0) throw EvaluationError("division by zero in rule '" + to_string(rule) + "'", rule.span);
        return Value::number(x / y);
    }
  }
  double x = a.as_double(), y = b.as_double();
  switch (op) {
    case ArithOp::add: return Value::floating(x + y);
    case ArithOp::sub: return Value::floating(x - y);
    case ArithOp::mul: return Value::floating(x * y);
    case ArithOp::div:
      if (y == 0.0) throw EvaluationError("division by zero in rule '" + to_string(rule) + "'", rule.span);
      return Value::floating(x / y);
  }
  return Value();
}

// Value usable as an index key for a column of `type`.
std::optional<Value> key_for(const Value& v, ValueType type) { return coerce(v, type); }

// ---------------------------------------------------------------------------
// Compiled form of one rule variant
// ---------------------------------------------------------------------------

struct CountPlan {
  std::string relation;
  Relation::Columns key_columns;
  std::vector<std::size_t> key_slots;        // slot index, or npos for constants
  std::vector<Value> key_constants;
  std::vector<ValueType> key_types;
  std::vector<std::pair<std::size_t, std::size_t>> equal_columns;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Expr {
  enum class Kind { constant, slot, arith, count } kind = Kind::constant;
  Value constant;
  std::size_t index = 0;  // slot or count plan
  ArithOp op = ArithOp::add;
  std::vector<Expr> operands;
};

struct Step {
  enum class Kind { scan, negate, filter, bind } kind = Kind::scan;
  std::size_t literal = 0;
  // scan / negate
  std::string relation;
  bool delta = false;
  Relation::Columns key_columns;
  std::vector<Expr> key_exprs;
  std::vector<ValueType> key_types;
  std::vector<std::pair<std::size_t, std::size_t>> bind_columns;  // column -> slot
  std::vector<std::pair<std::size_t, std::size_t>> equal_columns;
  // filter / bind
  CompareOp op = CompareOp::eq;
  Expr lhs, rhs;
  std::size_t slot = 0;
};

struct CompiledRule {
  const PlannedRule* planned = nullptr;
  std::vector<std::string> slot_names;
  std::vector<CountPlan> counts;
  std::vector<Step> steps;
  std::vector<Expr> head;
  std::vector<ValueType> head_types;
};

class RuleCompiler {
 public:
  RuleCompiler(const StratifiedPlan& plan, const PlannedRule& rule) : plan_(plan), rule_(rule) {
    out_.planned = &rule;
  }

  CompiledRule compile(std::optional<std::size_t> delta_literal) {
    const auto& body = rule_.body;
    std::vector<std::size_t> atoms;
    if (delta_literal) atoms.push_back(*delta_literal);
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i].is_positive() && i != delta_literal) atoms.push_back(i);
    }
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (!body[i].is_positive()) others.push_back(i);
    }

    emit_ready(others);
    for (std::size_t i : atoms) {
      emit_scan(i, delta_literal == i);
      emit_ready(others);
    }
    if (!others.empty()) throw std::logic_error("unschedulable literal in rule '" + to_string(rule_.rule) + "'");

    const Declaration& head_decl = plan_.declaration(rule_.rule.head.relation);
    for (std::size_t i = 0; i < rule_.rule.head.args.size(); ++i) {
      out_.head.push_back(compile_term(rule_.rule.head.args[i]));
      out_.head_types.push_back(head_decl.params[i].type);
    }
    return std::move(out_);
  }

 private:
  std::optional<std::size_t> slot_of(const std::string& name) const {
    auto it = std::find(out_.slot_names.begin(), out_.slot_names.end(), name);
    if (it == out_.slot_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - out_.slot_names.begin());
  }

  std::size_t new_slot(const std::string& name) {
    out_.slot_names.push_back(name);
    return out_.slot_names.size() - 1;
  }

  bool bound(const std::string& name) const { return slot_of(name).has_value(); }

  std::vector<std::string> free_vars(const Term& t) const {
    std::vector<std::string> out;
    free_vars(t, out);
    return out;
  }

  void free_vars(const Term& t, std::vector<std::string>& out) const {
    if (t.is<CountAggregate>()) {
      for (auto& v : aggregate_group_variables(rule_.rule, t.as<CountAggregate>())) out.push_back(v);
    } else if (t.is<ArithExpr>()) {
      free_vars(*t.as<ArithExpr>().lhs, out);
      free_vars(*t.as<ArithExpr>().rhs, out);
    } else if (t.is<Variable>()) {
      out.push_back(t.as<Variable>().name);
    }
  }

  bool all_bound(const Term& t) const {
    auto vars = free_vars(t);
    return std::all_of(vars.begin(), vars.end(), [&](const std::string& v) { return bound(v); });
  }

  Expr compile_term(const Term& t) {
    Expr e;
    if (t.is<Constant>()) {
      e.kind = Expr::Kind::constant;
      e.constant = t.as<Constant>().value;
    } else if (t.is<Variable>()) {
      e.kind = Expr::Kind::slot;
      e.index = *slot_of(t.as<Variable>().name);
    } else if (t.is<ArithExpr>()) {
      e.kind = Expr::Kind::arith;
      e.op = t.as<ArithExpr>().op;
      e.operands.push_back(compile_term(*t.as<ArithExpr>().lhs));
      e.operands.push_back(compile_term(*t.as<ArithExpr>().rhs));
    } else if (t.is<CountAggregate>()) {
      e.kind = Expr::Kind::count;
      e.index = compile_count(t.as<CountAggregate>());
    } else {
      throw std::logic_error("wildcard in value position");
    }
    return e;
  }

  std::size_t compile_count(const CountAggregate& agg) {
    const Atom& target = *agg.target;
    const Declaration& decl = plan_.declaration(target.relation);
    std::vector<std::string> group = aggregate_group_variables(rule_.rule, agg);
    CountPlan cp;
    cp.relation = target.relation;
    std::map<std::string, std::size_t> first_column;
    for (std::size_t c = 0; c < target.args.size(); ++c) {
      const Term& t = target.args[c];
      ValueType type = decl.params[c].type;
      if (t.is<Constant>()) {
        cp.key_columns.push_back(c);
        cp.key_slots.push_back(npos);
        cp.key_constants.push_back(t.as<Constant>().value);
        cp.key_types.push_back(type);
      } else if (t.is<Variable>()) {
        const std::string& name = t.as<Variable>().name;
        if (std::find(group.begin(), group.end(), name) != group.end()) {
          cp.key_columns.push_back(c);
          cp.key_slots.push_back(*slot_of(name));
          cp.key_constants.push_back(Value());
          cp.key_types.push_back(type);
        } else if (auto [it, inserted] = first_column.emplace(name, c); !inserted) {
          cp.equal_columns.emplace_back(it->second, c);
        }
      }
    }
    out_.counts.push_back(std::move(cp));
    return out_.counts.size() - 1;
  }

  void emit_scan(std::size_t literal, bool delta) {
    const Atom& atom = rule_.body[literal].atom();
    const Declaration& decl = plan_.declaration(atom.relation);
    Step s;
    s.kind = Step::Kind::scan;
    s.literal = literal;
    s.relation = atom.relation;
    s.delta = delta;
    std::map<std::string, std::size_t> fresh;  // variable -> first column in this atom
    for (std::size_t c = 0; c < atom.args.size(); ++c) {
      const Term& t = atom.args[c];
      if (t.is<Constant>()) {
        s.key_columns.push_back(c);
        s.key_exprs.push_back(compile_term(t));
        s.key_types.push_back(decl.params[c].type);
      } else if (t.is<Variable>()) {
        const std::string& name = t.as<Variable>().name;
        if (auto it = fresh.find(name); it != fresh.end()) {
          s.equal_columns.emplace_back(it->second, c);
        } else if (bound(name)) {
          s.key_columns.push_back(c);
          s.key_exprs.push_back(compile_term(t));
          s.key_types.push_back(decl.params[c].type);
        } else {
          fresh.emplace(name, c);
        }
      }
    }
    for (const auto& [name, column] : fresh) s.bind_columns.emplace_back(column, new_slot(name));
    out_.steps.push_back(std::move(s));
  }

  void emit_ready(std::vector<std::size_t>& pending) {
    for (bool progress = true; progress;) {
      progress = false;
      for (auto it = pending.begin(); it != pending.end(); ++it) {
        if (try_emit(rule_.body[*it], *it)) {
          pending.erase(it);
          progress = true;
          break;
        }
      }
    }
  }

  bool try_emit(const Literal& l, std::size_t index) {
    if (l.is_negated()) {
      const Atom& atom = l.atom();
      for (const Term& t : atom.args) {
        if (!all_bound(t)) return false;
      }
      const Declaration& decl = plan_.declaration(atom.relation);
      Step s;
      s.kind = Step::Kind::negate;
      s.literal = index;
      s.relation = atom.relation;
      for (std::size_t c = 0; c < atom.args.size(); ++c) {
        if (atom.args[c].is<Wildcard>()) continue;
        s.key_columns.push_back(c);
        s.key_exprs.push_back(compile_term(atom.args[c]));
        s.key_types.push_back(decl.params[c].type);
      }
      out_.steps.push_back(std::move(s));
      return true;
    }
    const Constraint& c = l.constraint();
    bool lhs_ready = all_bound(c.lhs), rhs_ready = all_bound(c.rhs);
    if (lhs_ready && rhs_ready) {
      Step s;
      s.kind = Step::Kind::filter;
      s.literal = index;
      s.op = c.op;
      s.lhs = compile_term(c.lhs);
      s.rhs = compile_term(c.rhs);
      out_.steps.push_back(std::move(s));
      return true;
    }
    if (c.op != CompareOp::eq) return false;
    const Term* target = nullptr;
    const Term* source = nullptr;
    if (c.lhs.is<Variable>() && rhs_ready) {
      target = &c.lhs;
      source = &c.rhs;
    } else if (c.rhs.is<Variable>() && lhs_ready) {
      target = &c.rhs;
      source = &c.lhs;
    } else {
      return false;
    }
    Step s;
    s.kind = Step::Kind::bind;
    s.literal = index;
    s.rhs = compile_term(*source);
    s.slot = new_slot(target->as<Variable>().name);
    out_.steps.push_back(std::move(s));
    return true;
  }

  const StratifiedPlan& plan_;
  const PlannedRule& rule_;
  CompiledRule out_;
};

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

class Executor {
 public:
  Executor(const CompiledRule& rule, const FactStore& full, const FactStore* delta, FactStore& pending,
           DerivationObserver* observer)
      : rule_(rule),
        full_(full),
        delta_(delta),
        pending_(pending),
        observer_(observer),
        slots_(rule.slot_names.size()),
        matched_(rule.planned->body.size(), nullptr) {}

  void run() { step(0); }

 private:
  const Relation* relation(const std::string& name, bool delta) const {
    const Relation* r = delta ? delta_->find(name) : full_.find(name);
    return r;
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::constant: return e.constant;
      case Expr::Kind::slot: return slots_[e.index];
      case Expr::Kind::arith:
        return apply_arith(e.op, eval(e.operands[0]), eval(e.operands[1]), rule_.planned->rule);
      case Expr::Kind::count: return Value::number(count(rule_.counts[e.index]));
    }
    return Value();
  }

  std::int64_t count(const CountPlan& cp) {
    const Relation* r = full_.find(cp.relation);
    if (!r) return 0;
    Tuple key;
    for (std::size_t i = 0; i < cp.key_columns.size(); ++i) {
      Value v = cp.key_slots[i] == npos ? cp.key_constants[i] : slots_[cp.key_slots[i]];
      auto k = key_for(v, cp.key_types[i]);
      if (!k) return 0;
      key.push_back(std::move(*k));
    }
    const auto& matches = r->lookup(cp.key_columns, key);
    if (cp.equal_columns.empty()) return static_cast<std::int64_t>(matches.size());
    std::int64_t n = 0;
    for (const Tuple* t : matches) {
      bool ok = std::all_of(cp.equal_columns.begin(), cp.equal_columns.end(),
                            [&](const auto& p) { return (*t)[p.first] == (*t)[p.second]; });
      n += ok;
    }
    return n;
  }

  bool make_key(const Step& s, Tuple& key) {
    key.clear();
    for (std::size_t i = 0; i < s.key_exprs.size(); ++i) {
      auto k = key_for(eval(s.key_exprs[i]), s.key_types[i]);
      if (!k) return false;
      key.push_back(std::move(*k));
    }
    return true;
  }

  void step(std::size_t index) {
    if (index == rule_.steps.size()) {
      emit();
      return;
    }
    const Step& s = rule_.steps[index];
    switch (s.kind) {
      case Step::Kind::scan: {
        const Relation* r = relation(s.relation, s.delta);
        if (!r || r->empty()) return;
        Tuple key;
        if (!make_key(s, key)) return;
        const auto& matches = r->lookup(s.key_columns, key);
        for (const Tuple* t : matches) {
          bool ok = std::all_of(s.equal_columns.begin(), s.equal_columns.end(),
                                [&](const auto& p) { return (*t)[p.first] == (*t)[p.second]; });
          if (!ok) continue;
          for (const auto& [column, slot] : s.bind_columns) slots_[slot] = (*t)[column];
          matched_[s.literal] = t;
          step(index + 1);
        }
        matched_[s.literal] = nullptr;
        return;
      }
      case Step::Kind::negate: {
        const Relation* r = full_.find(s.relation);
        if (r && !r->empty()) {
          Tuple key;
          if (make_key(s, key) && !r->lookup(s.key_columns, key).empty()) return;
        }
        step(index + 1);
        return;
      }
      case Step::Kind::filter:
        if (compare_values(s.op, eval(s.lhs), eval(s.rhs))) step(index + 1);
        return;
      case Step::Kind::bind:
        slots_[s.slot] = eval(s.rhs);
        step(index + 1);
        return;
    }
  }

  void emit() {
    const Rule& rule = rule_.planned->rule;
    Tuple tuple;
    tuple.reserve(rule_.head.size());
    for (std::size_t i = 0; i < rule_.head.size(); ++i) {
      Value v = eval(rule_.head[i]);
      auto c = coerce(v, rule_.head_types[i]);
      if (!c) {
        throw EvaluationError("value " + format_value(v) + " does not fit column " + std::to_string(i + 1) + " of '" +
                                  rule.head.relation + "' in rule '" + to_string(rule) + "'",
                              rule.span);
      }
      tuple.push_back(std::move(*c));
    }
    const std::string& head = rule.head.relation;
    if (full_.contains(head, tuple) || pending_.contains(head, tuple)) return;
    if (observer_) {
      Bindings bindings;
      for (std::size_t i = 0; i < slots_.size(); ++i) bindings.emplace_back(rule_.slot_names[i], slots_[i]);
      observer_->derived(*rule_.planned, rule.head, tuple, bindings, matched_);
    }
    pending_.insert(head, std::move(tuple));
  }

  const CompiledRule& rule_;
  const FactStore& full_;
  const FactStore* delta_;
  FactStore& pending_;
  DerivationObserver* observer_;
  std::vector<Value> slots_;
  std::vector<const Tuple*> matched_;
};

struct RuleVariants {
  CompiledRule full;
  std::vector<CompiledRule> deltas;  // one per positive literal over a same-stratum relation
};

}  // namespace

FactStore prepare_input(const StratifiedPlan& plan, const FactStore& input) {
  const Program& program = plan.program();
  FactStore store;
  for (const Declaration& d : program.declarations) store.relation(d.name);
  for (const auto& [name, relation] : input) {
    const Declaration* d = program.find_declaration(name);
    if (!d) {
      if (relation.empty()) continue;
      throw EvaluationError("input relation '" + name + "' is not declared");
    }
    Relation& target = store.relation(name);
    for (const Tuple& t : relation) {
      if (t.size() != d->arity()) {
        throw EvaluationError("input tuple " + name + "(" + format_tuple(t) + ")" + " has arity " + std::to_string(t.size()) +
                              ", expected " + std::to_string(d->arity()));
      }
      Tuple coerced;
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto v = coerce(t[i], d->params[i].type);
        if (!v) {
          throw EvaluationError("input tuple " + name + "(" + format_tuple(t) + ")" + ": value " + format_value(t[i]) +
                                " is not of type " + std::string(type_name(d->params[i].type)));
        }
        coerced.push_back(std::move(*v));
      }
      target.insert(std::move(coerced));
    }
  }
  for (const Atom& fact : program.facts) {
    const Declaration& d = plan.declaration(fact.relation);
    Tuple t;
    for (std::size_t i = 0; i < fact.args.size(); ++i) {
      auto v = coerce(fact.args[i].as<Constant>().value, d.params[i].type);
      if (!v) throw EvaluationError("fact " + to_string(fact) + " does not match its declaration", fact.span);
      t.push_back(std::move(*v));
    }
    store.insert(fact.relation, std::move(t));
  }
  return store;
}

FactStore evaluate(const StratifiedPlan& plan, const FactStore& input, DerivationObserver* observer) {
  FactStore store = prepare_input(plan, input);

  for (const Stratum& stratum : plan.strata()) {
    std::set<std::string, std::less<>> local(stratum.relations.begin(), stratum.relations.end());
    std::vector<RuleVariants> variants;
    for (std::size_t id : stratum.rules) {
      const PlannedRule& pr = plan.rules()[id];
      RuleVariants v;
      v.full = RuleCompiler(plan, pr).compile(std::nullopt);
      for (std::size_t i = 0; i < pr.body.size(); ++i) {
        if (pr.body[i].is_positive() && local.contains(pr.body[i].atom().relation)) {
          v.deltas.push_back(RuleCompiler(plan, pr).compile(i));
        }
      }
      variants.push_back(std::move(v));
    }

    FactStore pending;
    for (const RuleVariants& v : variants) Executor(v.full, store, nullptr, pending, observer).run();

    while (pending.total_size() > 0) {
      for (const auto& [name, relation] : pending) {
        for (const Tuple& t : relation) store.insert(name, t);
      }
      FactStore delta = std::move(pending);
      pending = FactStore();
      for (const RuleVariants& v : variants) {
        for (const CompiledRule& c : v.deltas) {
          const auto& step = c.steps;
          auto scan = std::find_if(step.begin(), step.end(), [](const Step& s) { return s.delta; });
          const Relation* d = delta.find(scan->relation);
          if (!d || d->empty()) continue;
          Executor(c, store, &delta, pending, observer).run();
        }
      }
    }
  }
  return store;
}

std::vector<const Tuple*> aggregate_matches(const CountAggregate& aggregate, const Rule& rule, const Bindings& bindings,
                                            const FactStore& store) {
  const Atom& target = *aggregate.target;
  std::vector<std::string> group = aggregate_group_variables(rule, aggregate);
  std::vector<const Tuple*> out;
  const Relation* r = store.find(target.relation);
  if (!r) return out;
  for (const Tuple& t : *r) {
    if (t.size() != target.args.size()) continue;
    std::map<std::string, Value> local;
    bool ok = true;
    for (std::size_t c = 0; c < t.size() && ok; ++c) {
      const Term& a = target.args[c];
      if (a.is<Constant>()) {
        ok = compare_values(CompareOp::eq, a.as<Constant>().value, t[c]);
      } else if (a.is<Variable>()) {
        const std::string& name = a.as<Variable>().name;
        if (std::find(group.begin(), group.end(), name) != group.end()) {
          ok = compare_values(CompareOp::eq, evaluate_term(a, rule, bindings, store), t[c]);
        } else if (auto [it, inserted] = local.emplace(name, t[c]); !inserted) {
          ok = it->second == t[c];
        }
      }
    }
    if (ok) out.push_back(&t);
  }
  return out;
}

Value evaluate_term(const Term& term, const Rule& rule, const Bindings& bindings, const FactStore& store) {
  if (term.is<Constant>()) return term.as<Constant>().value;
  if (term.is<Variable>()) {
    const std::string& name = term.as<Variable>().name;
    for (const auto& [n, v] : bindings) {
      if (n == name) return v;
    }
    throw EvaluationError("variable '" + name + "' is unbound", rule.span);
  }
  if (term.is<ArithExpr>()) {
    const ArithExpr& e = term.as<ArithExpr>();
    return apply_arith(e.op, evaluate_term(*e.lhs, rule, bindings, store),
                       evaluate_term(*e.rhs, rule, bindings, store), rule);
  }
  if (term.is<CountAggregate>()) {
    auto matches = aggregate_matches(term.as<CountAggregate>(), rule, bindings, store);
    return Value::number(static_cast<std::int64_t>(matches.size()));
  }
  throw EvaluationError("wildcard has no value", rule.span);
}

}  // namespace moodlog::datalog
