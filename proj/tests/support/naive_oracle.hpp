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

#include "moodlog/datalog/ast.hpp"
#include "moodlog/datalog/fact_store.hpp"

namespace moodlog::testing {

// Reference evaluator used only by tests. Works on the parsed program
// directly (disjunction groups included), computes strata on its own and
// re-fires every rule against the whole store until nothing changes.
// Deliberately simple: nested loops, no indexes, no delta relations.
datalog::FactStore naive_evaluate(const datalog::Program& program, const datalog::FactStore& input);

}  // namespace moodlog::testing
