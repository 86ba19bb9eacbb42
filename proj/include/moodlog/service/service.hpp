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

#include <cstddef>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "moodlog/cddr/cddr.hpp"
#include "moodlog/datalog/provenance.hpp"
#include "moodlog/diagnostic.hpp"
#include "moodlog/patient/record.hpp"

namespace moodlog::service {

// Hex SHA-256 of `text`.
std::string sha256_hex(std::string_view text);

// The configured program does not lint clean.
class StartupError : public std::runtime_error {
 public:
  explicit StartupError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct ServiceOptions {
  std::string program_source;  // empty: the bundled program
  // Patients whose facts can be explained with the `fact` form of /explain.
  std::optional<patient::PatientDataset> preload;
  std::size_t cache_capacity = 256;
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

// Request handling independent of the HTTP transport. All members are safe
// to call concurrently.
class DiagnosisService {
 public:
  // Throws StartupError for a program with lint errors or a preload dataset
  // with invalid records.
  explicit DiagnosisService(ServiceOptions options = {});

  Reply diagnose(std::string_view body);
  Reply explain(std::string_view body);
  Reply program() const;
  Reply health() const;

  const std::string& program_hash() const { return hash_; }
  std::size_t cached_responses() const;

 private:
  struct Entry {
    std::shared_ptr<const datalog::ProvenanceResult> provenance;
    std::map<std::string, datalog::GroundAtom> explanations;
  };

  std::string next_id();
  void remember(const std::string& id, Entry entry);
  std::optional<Entry> recall(const std::string& id);

  std::string source_;
  std::string hash_;
  std::vector<Diagnostic> lint_;
  cddr::Diagnoser diagnoser_;
  std::shared_ptr<const datalog::ProvenanceResult> preloaded_;

  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<std::string> order_;  // most recent first
  std::map<std::string, std::pair<Entry, std::list<std::string>::iterator>> cache_;
  std::string id_prefix_;
  std::size_t counter_ = 0;
};

}  // namespace moodlog::service
