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
#include "moodlog/llm/prompts.hpp"

#include <stdexcept>

#include "moodlog/assets.hpp"
#include "moodlog/cddr/vocabulary.hpp"
#include "moodlog/datalog/value.hpp"

namespace moodlog::llm {

namespace {

constexpr std::string_view kTranslationSystem =
    "You are an expert at translating mental health diagnostic criteria into Soufflé Datalog code.\n"
    "Translate the given criterion into a .dl program using Soufflé syntax as follows.\n"
    "The patient information is given as input to the program as `Observed` and `History` relations.\n"
    "The patient diagnosis is returned as output from the program as `Diagnosis` relation.\n"
    "- `.decl Observed(Patient:symbol, Symptom:symbol, Week:float)` describes that Patient has experienced "
    "Symptom for Week number of weeks.\n"
    "- `.decl History(Patient:symbol, Condition:symbol, Count:number)` describes that Patient has experienced "
    "Condition for Count number of times.\n"
    "- `.decl Diagnosis(Patient:symbol, Disorder:symbol)` describes that Patient has been diagnosed with "
    "Disorder.\n";

constexpr std::string_view kTranslationTask =
    "Now, translate the following criteria into Souffle .dl code for Bipolar I, Bipolar II, Single Episode "
    "Depressive Disorder, and Recurrent Depressive Disorder.\n";

constexpr std::string_view kDiagnosisSystem =
    "You are an expert at diagnosing patients according to the ICD-11 Clinical Descriptions and Diagnostic "
    "Requirements (CDDR).\n"
    "The patient data are represented by a list of current symptoms denoted as `Observed` and a list of history "
    "denoted as `History`.\n"
    "`Observed` matches the patient with the symptom and the number of weeks it has been observed.\n"
    "`History` matches the patient with the condition and the number of times it existed.\n"
    "No record for a patient means that there is no related data for them.\n"
    "The considered disorders are: Bipolar I, Bipolar II, Single Episode Depressive Disorder, and Recurrent "
    "Depressive Disorder.\n";

constexpr std::string_view kDiagnosisTask =
    "For brevity, please output only the diagnosis for the following patients.\n"
    "Patients with no clear diagnosis should be indicated as such.\n";

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string trimmed(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trimmed(text.substr(start, end - start));
    if (!line.empty()) out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

std::string quoted(const std::string& s) { return datalog::format_value(datalog::Value::symbol(s)); }

}  // namespace

nlohmann::json to_json(const std::vector<Message>& messages) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& m : messages) out.push_back({{"role", m.role}, {"content", m.content}});
  return out;
}

std::vector<Message> messages_from_json(const nlohmann::json& document) {
  if (!document.is_array()) throw std::invalid_argument("messages must be a list");
  std::vector<Message> out;
  for (const auto& m : document) {
    if (!m.is_object() || !m.contains("role") || !m.contains("content") || !m["role"].is_string() ||
        !m["content"].is_string()) {
      throw std::invalid_argument("message needs string 'role' and 'content'");
    }
    out.push_back({m["role"].get<std::string>(), m["content"].get<std::string>()});
  }
  return out;
}

std::vector<Message> PromptBundle::messages() const {
  std::string system_text = system;
  if (!example.empty()) system_text += "\n" + example;
  return {{"system", system_text}, {"user", task}};
}

TranslationExample default_example() {
  return {"Schizophrenia", trimmed(embedded_asset("schizophrenia_criteria.txt")),
          lines(embedded_asset("schizophrenia_symptoms.txt")), trimmed(embedded_asset("schizophrenia.dl"))};
}

PromptBundle render_translation_prompt(std::string_view criteria, const TranslationExample& example) {
  if (trimmed(criteria).empty()) throw std::invalid_argument("translation prompt needs criteria");
  if (trimmed(example.program).empty()) throw std::invalid_argument("one-shot prompt needs an example program");

  const auto& vocab = cddr::vocabulary();
  std::vector<std::string> symptoms = vocab.depressive_pole;
  symptoms.insert(symptoms.end(), vocab.manic_pole.begin(), vocab.manic_pole.end());

  PromptBundle bundle;
  bundle.system = std::string(kTranslationSystem);
  bundle.example = "For context, here is an example of " + example.disorder +
                   " criterion translated into Soufflé .dl code.\n"
                   "- " + example.disorder + " criterion: " + trimmed(example.criteria) + "\n"
                   "- Relevant symptom names for `Observed` relation: " + join(example.symptoms, ", ") + "\n"
                   "- Soufflé .dl code:\n```\n" + trimmed(example.program) + "\n```\n";
  bundle.task = std::string(kTranslationTask) +
                "- Criteria: " + trimmed(criteria) + "\n"
                "- Relevant symptom names for `Observed` relation: " + join(symptoms, ", ") + "\n"
                "- Relevant condition names for `History` relation: " + join(vocab.history_conditions, ", ") + "\n";
  return bundle;
}

PromptBundle render_diagnosis_prompt(const patient::PatientDataset& dataset) {
  if (dataset.records.empty()) throw std::invalid_argument("diagnosis prompt needs at least one patient");
  PromptBundle bundle;
  bundle.system = std::string(kDiagnosisSystem);
  bundle.task = std::string(kDiagnosisTask);
  for (const auto& r : dataset.records) {
    std::vector<std::string> observed;
    for (const auto& o : r.observed) {
      observed.push_back("Observed(" + quoted(r.id) + ", " + quoted(o.symptom) + ", " +
                         datalog::format_float(o.weeks) + ")");
    }
    std::vector<std::string> history;
    for (const auto& h : r.history) {
      history.push_back("History(" + quoted(r.id) + ", " + quoted(h.condition) + ", " + std::to_string(h.count) + ")");
    }
    bundle.task += "\nPatient " + quoted(r.id) + ":\n";
    bundle.task += "- `Observed`: " + (observed.empty() ? std::string("none") : join(observed, ", ")) + "\n";
    bundle.task += "- `History`: " + (history.empty() ? std::string("none") : join(history, ", ")) + "\n";
  }
  return bundle;
}

}  // namespace moodlog::llm
