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
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "httplib.h"

#include "moodlog/llm/client.hpp"
#include "moodlog/validator/lint.hpp"
#include "support/test_support.hpp"

namespace moodlog::llm {
namespace {

using moodlog::testing::fixture_path;
using moodlog::testing::read_fixture;

std::vector<Message> request(const std::string& text) { return {{"system", "s"}, {"user", text}}; }

class TempFile {
 public:
  explicit TempFile(const std::string& name) : path_(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove(path_);
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

TEST(Replay, AnswersInOrder) {
  ReplayClient client({{request("a"), "one"}, {request("b"), "two"}});
  EXPECT_EQ(client.remaining(), 2u);
  EXPECT_EQ(client.complete(request("a")), "one");
  EXPECT_EQ(client.complete(request("b")), "two");
  EXPECT_EQ(client.remaining(), 0u);
  EXPECT_THROW(client.complete(request("c")), ReplayError);
}

TEST(Replay, MismatchIsAnError) {
  ReplayClient client({{request("a"), "one"}});
  EXPECT_THROW(client.complete(request("b")), ReplayError);
  EXPECT_EQ(client.remaining(), 1u);
}

TEST(Replay, ShippedTranscriptsMatchTheRenderedPrompt) {
  auto criteria = read_fixture("translate/mood_criteria.txt");
  auto bundle = render_translation_prompt(criteria, default_example());

  auto clean = ReplayClient::from_file(fixture_path("translate/clean_transcript.jsonl"));
  std::string program = request_translation(bundle, clean);
  EXPECT_EQ(program, read_fixture("mixed_before.dl"));
  EXPECT_FALSE(has_errors(validator::lint(program)));

  auto faulty = ReplayClient::from_file(fixture_path("translate/arity_transcript.jsonl"));
  auto diags = validator::lint(request_translation(bundle, faulty));
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "L2");
}

TEST(Transcript, AppendAndLoad) {
  TempFile file("moodlog_transcript.jsonl");
  TranscriptEntry first{request("a"), "line one\nline two"};
  TranscriptEntry second{request("b\t\"quoted\""), ""};
  append_transcript(file.path(), first);
  append_transcript(file.path(), second);
  EXPECT_EQ(load_transcript(file.path()), (std::vector<TranscriptEntry>{first, second}));
}

TEST(Transcript, Errors) {
  EXPECT_THROW(load_transcript("/nonexistent/t.jsonl"), ReplayError);
  TempFile file("moodlog_bad_transcript.jsonl");
  std::ofstream(file.path()) << "{\"request\": []}\n";
  EXPECT_THROW(load_transcript(file.path()), ReplayError);
  std::ofstream(file.path()) << "not json\n";
  EXPECT_THROW(load_transcript(file.path()), ReplayError);
}

TEST(Recording, WritesEveryExchange) {
  TempFile file("moodlog_recording.jsonl");
  ReplayClient inner({{request("a"), "one"}});
  RecordingClient recorder(inner, file.path());
  EXPECT_EQ(recorder.complete(request("a")), "one");
  auto replayed = ReplayClient::from_file(file.path());
  EXPECT_EQ(replayed.complete(request("a")), "one");
}

TEST(ExtractProgram, FirstFencedBlock) {
  EXPECT_EQ(extract_program("Here:\n```souffle\nA(1).\n```\nand\n```\nB(2).\n```\n"), "A(1).\n");
  EXPECT_EQ(extract_program("```\n```"), "");
  EXPECT_EQ(extract_program("A(1)."), "A(1).");
  EXPECT_EQ(extract_program("```\nunterminated"), "```\nunterminated");
}

TEST(RequestTranslation, EmptyRepliesAreTransportErrors) {
  auto bundle = render_translation_prompt("x", default_example());
  ReplayClient blank({{bundle.messages(), "  \n"}});
  EXPECT_THROW(request_translation(bundle, blank), TransportError);
  ReplayClient empty_block({{bundle.messages(), "Sure:\n```\n\n```\n"}});
  EXPECT_THROW(request_translation(bundle, empty_block), TransportError);
}

class FakeEndpoint : public ::testing::Test {
 protected:
  void SetUp() override {
    server.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_body = nlohmann::json::parse(req.body);
      last_auth = req.get_header_value("Authorization");
      res.status = status;
      res.set_content(reply, "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  void TearDown() override {
    server.stop();
    thread.join();
  }
  LiveOptions options() {
    LiveOptions o;
    o.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    o.timeout = std::chrono::seconds(5);
    return o;
  }

  httplib::Server server;
  std::thread thread;
  int port = 0;
  int status = 200;
  std::string reply = R"({"choices": [{"message": {"role": "assistant", "content": "```\nA(1).\n```"}}]})";
  nlohmann::json last_body;
  std::string last_auth;
};

TEST_F(FakeEndpoint, SendsMessagesModelAndParameters) {
  auto o = options();
  o.key = "secret";
  o.model = "test-model";
  o.parameters = {{"temperature", 0}};
  LiveClient client(o);
  EXPECT_EQ(client.complete(request("hello")), "```\nA(1).\n```");
  EXPECT_EQ(last_auth, "Bearer secret");
  EXPECT_EQ(last_body["model"], "test-model");
  EXPECT_EQ(last_body["temperature"], 0);
  EXPECT_EQ(messages_from_json(last_body["messages"]), request("hello"));
}

TEST_F(FakeEndpoint, NoKeyNoHeader) {
  LiveClient client(options());
  client.complete(request("x"));
  EXPECT_EQ(last_auth, "");
  EXPECT_FALSE(last_body.contains("model"));
}

TEST_F(FakeEndpoint, HttpErrorStatus) {
  status = 503;
  LiveClient client(options());
  EXPECT_THROW(client.complete(request("x")), TransportError);
}

TEST_F(FakeEndpoint, MalformedReply) {
  reply = R"({"choices": []})";
  LiveClient client(options());
  EXPECT_THROW(client.complete(request("x")), TransportError);
}

TEST_F(FakeEndpoint, RecordThenReplay) {
  TempFile file("moodlog_live_recording.jsonl");
  LiveClient live(options());
  RecordingClient recorder(live, file.path());
  auto bundle = render_translation_prompt("x", default_example());
  EXPECT_EQ(request_translation(bundle, recorder), "A(1).\n");
  auto replay = ReplayClient::from_file(file.path());
  EXPECT_EQ(request_translation(bundle, replay), "A(1).\n");
}

TEST(LiveClient, UnreachableEndpoint) {
  LiveOptions o;
  o.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  o.timeout = std::chrono::seconds(2);
  LiveClient client(o);
  EXPECT_THROW(client.complete(request("x")), TransportError);
}

TEST(LiveClient, BadEndpoint) {
  LiveOptions o;
  o.endpoint = "localhost:8000";
  EXPECT_THROW(LiveClient{o}, TransportError);
}

TEST(LiveClient, Environment) {
  ::unsetenv("MODEL_ENDPOINT");
  EXPECT_THROW(LiveOptions::from_environment(), TransportError);
  ::setenv("MODEL_ENDPOINT", "http://127.0.0.1:9/x", 1);
  ::setenv("MODEL_KEY", "k", 1);
  auto o = LiveOptions::from_environment();
  EXPECT_EQ(o.endpoint, "http://127.0.0.1:9/x");
  EXPECT_EQ(o.key, "k");
  ::unsetenv("MODEL_ENDPOINT");
  ::unsetenv("MODEL_KEY");
}

}  // namespace
}  // namespace moodlog::llm
