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

namespace moodlog {

// Text files compiled into the binary (see cmake/embed_assets.cmake).
// Throws std::out_of_range for unknown names.
std::string_view embedded_asset(std::string_view name);
std::vector<std::string> embedded_asset_names();

}  // namespace moodlog
