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

#include <iosfwd>

namespace moodlog::cli {

enum ExitCode { kSuccess = 0, kFailure = 1, kUsage = 2 };

// Entry point of the `moodlog` tool. Exit codes: 0 success, 1 domain
// failure (lint errors, failed benchmark, engine errors), 2 usage or I/O
// problems.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace moodlog::cli
