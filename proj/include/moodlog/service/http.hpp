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

#include "httplib.h"

#include "moodlog/service/service.hpp"

namespace moodlog::service {

// Routes POST /diagnose, POST /explain, GET /program and GET /health. With a
// non-empty `cors_origin`, responses allow that origin and OPTIONS
// preflights are answered.
void install_routes(httplib::Server& server, DiagnosisService& service, const std::string& cors_origin = "");

}  // namespace moodlog::service
