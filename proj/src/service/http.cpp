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
#include "moodlog/service/http.hpp"

namespace moodlog::service {

namespace {

void send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

}  // namespace

void install_routes(httplib::Server& server, DiagnosisService& service, const std::string& cors_origin) {
  server.Post("/diagnose", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.diagnose(req.body));
  });
  server.Post("/explain", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.explain(req.body));
  });
  server.Get("/program", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.program());
  });
  server.Get("/health", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.health());
  });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    send(res, {500, {{"error", message}}});
  });

  if (cors_origin.empty()) return;
  server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin}, {"Vary", "Origin"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

}  // namespace moodlog::service
