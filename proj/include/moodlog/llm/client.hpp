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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "moodlog/llm/prompts.hpp"

namespace moodlog::llm {

// Network failure, bad HTTP status or malformed reply.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transcript exhausted, unreadable or out of step with the requests.
class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string complete(const std::vector<Message>& messages) = 0;
};

// Transcript files hold one JSON object per line:
//   {"request": [{"role": ..., "content": ...}, ...], "response": "..."}
struct TranscriptEntry {
  std::vector<Message> request;
  std::string response;

  bool operator==(const TranscriptEntry&) const = default;
};

std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& path);
void append_transcript(const std::filesystem::path& path, const TranscriptEntry& entry);

// Answers requests from a transcript, in order. A request that differs from
// the recorded one is an error.
class ReplayClient : public ModelClient {
 public:
  explicit ReplayClient(std::vector<TranscriptEntry> entries) : entries_(std::move(entries)) {}
  static ReplayClient from_file(const std::filesystem::path& path) { return ReplayClient(load_transcript(path)); }

  std::string complete(const std::vector<Message>& messages) override;
  std::size_t remaining() const { return entries_.size() - next_; }

 private:
  std::vector<TranscriptEntry> entries_;
  std::size_t next_ = 0;
};

// OpenAI-style chat completion endpoint.
struct LiveOptions {
  std::string endpoint;  // e.g. http://localhost:8000/v1/chat/completions
  std::string key;       // sent as a bearer token when set
  std::string model;
  nlohmann::json parameters = nlohmann::json::object();  // passed through (temperature, ...)
  std::chrono::seconds timeout{120};

  // Reads MODEL_ENDPOINT and MODEL_KEY; throws TransportError without an endpoint.
  static LiveOptions from_environment();
};

class LiveClient : public ModelClient {
 public:
  explicit LiveClient(LiveOptions options);
  std::string complete(const std::vector<Message>& messages) override;

 private:
  LiveOptions options_;
  std::string base_;
  std::string path_;
};

// Forwards to another client and appends every exchange to a transcript.
class RecordingClient : public ModelClient {
 public:
  RecordingClient(ModelClient& inner, std::filesystem::path transcript)
      : inner_(inner), transcript_(std::move(transcript)) {}
  std::string complete(const std::vector<Message>& messages) override;

 private:
  ModelClient& inner_;
  std::filesystem::path transcript_;
};

// Body of the first fenced code block, or the whole reply when there is none.
std::string extract_program(std::string_view reply);

// Sends the bundle and returns the extracted program text. Throws
// TransportError for an empty reply.
std::string request_translation(const PromptBundle& bundle, ModelClient& client);

}  // namespace moodlog::llm
