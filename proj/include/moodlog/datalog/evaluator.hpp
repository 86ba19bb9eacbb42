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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "moodlog/datalog/analysis.hpp"
#include "moodlog/datalog/fact_store.hpp"

namespace moodlog::datalog {

// Raised for bad input facts and for runtime faults inside a rule
// (division by zero, arithmetic on a symbol).
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& message, SourceSpan span = {})
      : std::runtime_error(message), span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

using Bindings = std::vector<std::pair<std::string, Value>>;

// Notified once per newly derived tuple, in derivation order.
class DerivationObserver {
 public:
  virtual ~DerivationObserver() = default;

  // `matched[i]` is the tuple that satisfied body literal i when that
  // literal is a positive atom, nullptr otherwise.
  virtual void derived(const PlannedRule& rule, const Atom& head, const Tuple& tuple, const Bindings& bindings,
                       const std::vector<const Tuple*>& matched) = 0;
};

// Input facts are checked against the declarations (ints widen into float
// columns). The program's own ground facts are added to the input. The
// result holds every declared relation, empty ones included.
FactStore evaluate(const StratifiedPlan& plan, const FactStore& input, DerivationObserver* observer = nullptr);

// Validated and coerced copy of `input` merged with the program's facts.
FactStore prepare_input(const StratifiedPlan& plan, const FactStore& input);

// Exact comparison across number and float; symbols compare only with symbols.
bool compare_values(CompareOp op, const Value& lhs, const Value& rhs);

// Tuples of the aggregate's target matching the group variables in
// `bindings` (local variables repeated inside the target must agree).
std::vector<const Tuple*> aggregate_matches(const CountAggregate& aggregate, const Rule& rule, const Bindings& bindings,
                                            const FactStore& store);

// Evaluates a ground term under `bindings`. Aggregates are counted in `store`.
Value evaluate_term(const Term& term, const Rule& rule, const Bindings& bindings, const FactStore& store);

}  // namespace moodlog::datalog
