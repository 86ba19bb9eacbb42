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
#include "moodlog/service/service.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>

#include <random>

#include "moodlog/cddr/vocabulary.hpp"
#include "moodlog/datalog/parser.hpp"
#include "moodlog/validator/lint.hpp"

namespace moodlog::service {

namespace dl = datalog;
using nlohmann::json;

std::string sha256_hex(std::string_view text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

StartupError::StartupError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error("program has " + std::to_string(count(diagnostics, Severity::error)) + " error(s)"),
      diagnostics_(std::move(diagnostics)) {}

namespace {

Reply error_reply(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

Reply bad_request(std::vector<Diagnostic> diagnostics) {
  return {400, {{"errors", to_json(diagnostics)}}};
}

Reply bad_document(const std::string& message) {
  return bad_request({{Severity::error, "P0", message, {}}});
}

std::string random_prefix() {
  std::random_device device;
  std::uniform_int_distribution<std::uint32_t> dist;
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", dist(device));
  return buf;
}

}  // namespace

DiagnosisService::DiagnosisService(ServiceOptions options)
    : source_(options.program_source.empty() ? std::string(cddr::bundled_program()) : options.program_source),
      hash_(sha256_hex(source_)),
      lint_(validator::lint(source_)),
      diagnoser_(has_errors(lint_) ? throw StartupError(lint_) : dl::compile(source_)),
      capacity_(options.cache_capacity == 0 ? 1 : options.cache_capacity),
      id_prefix_(random_prefix()) {
  if (options.preload) {
    std::vector<Diagnostic> problems;
    for (const auto& record : options.preload->records) {
      for (auto d : patient::validate_record(record)) {
        if (d.severity != Severity::error) continue;
        d.message = record.id + ": " + d.message;
        problems.push_back(std::move(d));
      }
    }
    if (!problems.empty()) throw StartupError(std::move(problems));
    preloaded_ = std::make_shared<const dl::ProvenanceResult>(
        dl::evaluate_with_provenance(diagnoser_.plan(), patient::to_fact_store(*options.preload)));
  }
}

std::string DiagnosisService::next_id() {
  std::lock_guard lock(mutex_);
  return id_prefix_ + "-" + std::to_string(++counter_);
}

void DiagnosisService::remember(const std::string& id, Entry entry) {
  std::lock_guard lock(mutex_);
  order_.push_front(id);
  cache_[id] = {std::move(entry), order_.begin()};
  while (cache_.size() > capacity_) {
    cache_.erase(order_.back());
    order_.pop_back();
  }
}

std::optional<DiagnosisService::Entry> DiagnosisService::recall(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(id);
  if (it == cache_.end()) return std::nullopt;
  order_.splice(order_.begin(), order_, it->second.second);
  return it->second.first;
}

std::size_t DiagnosisService::cached_responses() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

Reply DiagnosisService::diagnose(std::string_view body) {
  json document = json::parse(body, nullptr, false);
  if (document.is_discarded()) return bad_document("request body is not valid JSON");
  patient::PatientRecord record;
  try {
    record = patient::record_from_json(document);
  } catch (const patient::DataError& e) {
    return bad_document(e.what());
  }

  auto provenance = std::make_shared<dl::ProvenanceResult>();
  cddr::DiagnosisResult result;
  try {
    result = diagnoser_.diagnose(record, provenance.get());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
  if (!result.evaluated) return bad_request(result.diagnostics);

  std::string id = next_id();
  Entry entry{provenance, {}};
  json explanations = json::object();
  for (const auto& disorder : result.disorders) {
    std::string key = id + ":" + std::to_string(entry.explanations.size());
    entry.explanations[key] = {"Diagnosis", {dl::Value::symbol(record.id), dl::Value::symbol(disorder)}};
    explanations[disorder] = key;
  }
  json episode_explanations = json::object();
  auto episodes = patient::episode_names(result.episodes);
  for (std::size_t i = 0; i < std::size(cddr::kEpisodeRelations); ++i) {
    std::string name(patient::kEpisodeNames[i]);
    if (std::find(episodes.begin(), episodes.end(), name) == episodes.end()) continue;
    std::string key = id + ":" + std::to_string(entry.explanations.size());
    entry.explanations[key] = {std::string(cddr::kEpisodeRelations[i]), {dl::Value::symbol(record.id)}};
    episode_explanations[name] = key;
  }
  remember(id, std::move(entry));

  return {200,
          {{"id", id},
           {"patient", record.id},
           {"disorders", result.disorders},
           {"episodes", episodes},
           {"explanations", explanations},
           {"episode_explanations", episode_explanations},
           {"warnings", to_json(result.diagnostics)},
           {"record", patient::to_json(record)}}};
}

Reply DiagnosisService::explain(std::string_view body) {
  json document = json::parse(body, nullptr, false);
  if (document.is_discarded() || !document.is_object()) return error_reply(400, "request body must be a JSON object");

  std::shared_ptr<const dl::ProvenanceResult> provenance;
  dl::GroundAtom fact;
  if (auto it = document.find("id"); it != document.end()) {
    if (!it->is_string()) return error_reply(400, "'id' must be a string");
    std::string key = it->get<std::string>();
    auto colon = key.rfind(':');
    auto entry = colon == std::string::npos ? std::nullopt : recall(key.substr(0, colon));
    if (!entry) return error_reply(404, "unknown or expired explanation id '" + key + "'");
    auto found = entry->explanations.find(key);
    if (found == entry->explanations.end()) return error_reply(404, "unknown explanation id '" + key + "'");
    provenance = entry->provenance;
    fact = found->second;
  } else if (auto it = document.find("fact"); it != document.end()) {
    if (!it->is_string()) return error_reply(400, "'fact' must be a string such as Diagnosis(\"No. 5\", \"Bipolar_I\")");
    std::string error;
    auto atom = dl::parse_ground_atom(it->get<std::string>(), &error);
    if (!atom) return error_reply(400, "cannot parse fact: " + error);
    if (!preloaded_) return error_reply(404, "no patient dataset is loaded; use an explanation id");
    provenance = preloaded_;
    fact = dl::ground(*atom);
  } else {
    return error_reply(400, "expected 'id' or 'fact'");
  }

  try {
    return {200, dl::tree_to_json(*dl::explain(fact, provenance->index))};
  } catch (const dl::NotDerived& e) {
    return error_reply(404, e.what());
  }
}

Reply DiagnosisService::program() const {
  json strata = json::array();
  const auto& plan = diagnoser_.plan();
  for (std::size_t i = 0; i < plan.strata().size(); ++i) {
    strata.push_back({{"stratum", i}, {"relations", plan.strata()[i].relations},
                      {"rules", plan.strata()[i].rules.size()}});
  }
  return {200,
          {{"source", source_},
           {"program_hash", hash_},
           {"lint", to_json(lint_)},
           {"strata", strata},
           {"vocabulary", cddr::to_json(cddr::vocabulary())}}};
}

Reply DiagnosisService::health() const {
  return {200, {{"status", "ok"}, {"program_hash", hash_}}};
}

}  // namespace moodlog::service
