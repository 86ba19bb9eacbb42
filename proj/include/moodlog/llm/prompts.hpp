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

#include "json.hpp"

#include "moodlog/patient/record.hpp"

namespace moodlog::llm {

struct Message {
  std::string role;  // "system" or "user"
  std::string content;

  bool operator==(const Message&) const = default;
};

nlohmann::json to_json(const std::vector<Message>& messages);
std::vector<Message> messages_from_json(const nlohmann::json& document);

// A rendered prompt. The example is sent as part of the system message.
struct PromptBundle {
  std::string system;
  std::string example;
  std::string task;

  std::vector<Message> messages() const;
  bool operator==(const PromptBundle&) const = default;
};

// One worked translation shown to the model.
struct TranslationExample {
  std::string disorder;
  std::string criteria;
  std::vector<std::string> symptoms;
  std::string program;
};

// The shipped example: a small schizophrenia program.
TranslationExample default_example();

// Throws std::invalid_argument for empty criteria or an example without a
// program. Symptom and condition lists come from the cddr vocabulary.
PromptBundle render_translation_prompt(std::string_view criteria, const TranslationExample& example);

// One block per patient listing its Observed and History facts. Throws
// std::invalid_argument for an empty dataset.
PromptBundle render_diagnosis_prompt(const patient::PatientDataset& dataset);

}  // namespace moodlog::llm
