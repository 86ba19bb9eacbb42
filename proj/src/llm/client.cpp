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
#include "moodlog/llm/client.hpp"

#include <cstdlib>
#include <fstream>

#include "httplib.h"

namespace moodlog::llm {

namespace {

std::string trimmed(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

}  // namespace

std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ReplayError(path.string() + ": cannot open transcript");
  std::vector<TranscriptEntry> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trimmed(line).empty()) continue;
    try {
      auto doc = nlohmann::json::parse(line);
      entries.push_back({messages_from_json(doc.at("request")), doc.at("response").get<std::string>()});
    } catch (const std::exception& e) {
      throw ReplayError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return entries;
}

void append_transcript(const std::filesystem::path& path, const TranscriptEntry& entry) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw ReplayError(path.string() + ": cannot write transcript");
  nlohmann::json doc = {{"request", to_json(entry.request)}, {"response", entry.response}};
  out << doc.dump() << '\n';
}

std::string ReplayClient::complete(const std::vector<Message>& messages) {
  if (next_ >= entries_.size()) {
    throw ReplayError("transcript exhausted after " + std::to_string(entries_.size()) + " exchange(s)");
  }
  const TranscriptEntry& entry = entries_[next_];
  if (entry.request != messages) {
    throw ReplayError("request " + std::to_string(next_ + 1) + " does not match the transcript");
  }
  ++next_;
  return entry.response;
}

LiveOptions LiveOptions::from_environment() {
  LiveOptions options;
  const char* endpoint = std::getenv("MODEL_ENDPOINT");
  if (!endpoint || !*endpoint) throw TransportError("MODEL_ENDPOINT is not set");
  options.endpoint = endpoint;
  if (const char* key = std::getenv("MODEL_KEY")) options.key = key;
  return options;
}

LiveClient::LiveClient(LiveOptions options) : options_(std::move(options)) {
  const std::string& url = options_.endpoint;
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw TransportError("endpoint '" + url + "' has no scheme");
  auto slash = url.find('/', scheme + 3);
  base_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/v1/chat/completions" : url.substr(slash);
}

std::string LiveClient::complete(const std::vector<Message>& messages) {
  nlohmann::json body = options_.parameters;
  if (!body.is_object()) throw TransportError("model parameters must be an object");
  body["messages"] = to_json(messages);
  if (!options_.model.empty()) body["model"] = options_.model;

  httplib::Client client(base_);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  httplib::Headers headers;
  if (!options_.key.empty()) headers.emplace("Authorization", "Bearer " + options_.key);

  auto response = client.Post(path_, headers, body.dump(), "application/json");
  if (!response) throw TransportError(base_ + path_ + ": " + httplib::to_string(response.error()));
  if (response->status != 200) {
    throw TransportError(base_ + path_ + ": HTTP " + std::to_string(response->status));
  }
  try {
    auto doc = nlohmann::json::parse(response->body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception& e) {
    throw TransportError(base_ + path_ + ": malformed reply: " + e.what());
  }
}

std::string RecordingClient::complete(const std::vector<Message>& messages) {
  std::string reply = inner_.complete(messages);
  append_transcript(transcript_, {messages, reply});
  return reply;
}

std::string extract_program(std::string_view reply) {
  auto open = reply.find("```");
  if (open != std::string_view::npos) {
    auto body = reply.find('\n', open);
    if (body != std::string_view::npos) {
      auto close = reply.find("```", body + 1);
      if (close != std::string_view::npos) return std::string(reply.substr(body + 1, close - body - 1));
    }
  }
  return std::string(reply);
}

std::string request_translation(const PromptBundle& bundle, ModelClient& client) {
  std::string reply = client.complete(bundle.messages());
  if (trimmed(reply).empty()) throw TransportError("model returned an empty reply");
  std::string program = extract_program(reply);
  if (trimmed(program).empty()) throw TransportError("model reply holds an empty code block");
  return program;
}

}  // namespace moodlog::llm
