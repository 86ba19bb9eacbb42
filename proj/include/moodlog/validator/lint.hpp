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

#include <string>
#include <string_view>
#include <vector>

#include "moodlog/diagnostic.hpp"

namespace moodlog::validator {

// Static checks on a candidate program. Never throws.
//
//   L0 error    syntax error
//   L1 error    undeclared relation
//   L2 error    arity mismatch
//   L3 error    type mismatch
//   L4 error    unsafe variable
//   L5 error    cycle through negation or aggregation
//   L6 warning  output relation that nothing derives
//   L7 warning  input relation that no rule reads
//   L8 warning  two Diagnosis rules for different disorders that can fire
//               for the same patient
std::vector<Diagnostic> lint(std::string_view source);

}  // namespace moodlog::validator
