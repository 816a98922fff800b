// Copyright 2026 The DialogForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP chat protocol for the reference runtime:
//   POST   /v1/sessions                 {hint?}  -> {session_id, messages}
//   POST   /v1/sessions/{id}/messages   {text}   -> {messages, closed}
//   DELETE /v1/sessions/{id}

#ifndef DIALOGFORGE_RUNTIME_HTTP_HPP
#define DIALOGFORGE_RUNTIME_HTTP_HPP

#include <memory>
#include <string>

#include "httplib.h"
#include "dialogforge/runtime/runtime.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(BindError);

inline void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void SendError(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  SendJson(res, status, Json{{"error", {{"code", code}, {"message", message}}}});
}

/// Registers the chat routes for `runtime` on `server`.
inline void MountChatRoutes(httplib::Server& server, BotRuntime& runtime) {
  server.Post("/v1/sessions", [&runtime](const httplib::Request& req, httplib::Response& res) {
    std::string hint;
    if (!req.body.empty()) {
      auto body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object()) return SendError(res, 400, "SyntaxError", "body must be a JSON object");
      if (body.contains("hint") && body["hint"].is_string()) hint = body["hint"].get<std::string>();
    }
    auto start = runtime.Start(hint);
    SendJson(res, 200, Json{{"session_id", start.session_id}, {"messages", start.messages}});
  });
  server.Post(R"(/v1/sessions/([^/]+)/messages)", [&runtime](const httplib::Request& req, httplib::Response& res) {
    auto body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("text") || !body["text"].is_string())
      return SendError(res, 400, "SchemaError", "body must be {\"text\": string}");
    try {
      auto r = runtime.Step(req.matches[1], body["text"].get<std::string>());
      SendJson(res, 200, Json{{"messages", r.messages}, {"closed", r.closed}});
    } catch (const SessionClosed& e) {
      SendError(res, 404, e.code(), e.what());
    }
  });
  server.Delete(R"(/v1/sessions/([^/]+))", [&runtime](const httplib::Request& req, httplib::Response& res) {
    runtime.End(req.matches[1]);
    res.status = 204;
  });
  server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) { SendJson(res, 200, Json{{"ok", true}}); });
}

/// Owns an HTTP server running on a background thread.
class BackgroundServer {
 public:
  BackgroundServer() : server_(std::make_unique<httplib::Server>()) {}
  ~BackgroundServer() { Stop(); }
  BackgroundServer(const BackgroundServer&) = delete;
  BackgroundServer& operator=(const BackgroundServer&) = delete;

  httplib::Server& server() { return *server_; }

  /// Binds (port 0 picks a free port) and starts serving. Throws BindError.
  int Start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
      bound = server_->bind_to_any_port(host);
    } else if (!server_->bind_to_port(host, port)) {
      bound = -1;
    }
    if (bound < 0) throw BindError("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
  }

  void Stop() {
    if (thread_.joinable()) {
      server_->stop();
      thread_.join();
    }
  }

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

/// ChatClient over the HTTP chat protocol. A connection per call keeps the
/// client safe for concurrent sessions.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(std::string base_url, int timeout_seconds = 10)
      : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

  ChatStart StartSession(const std::string& hint) override {
    auto body = Call("POST", "/v1/sessions", Json{{"hint", hint}});
    return {body.at("session_id").get<std::string>(), body.at("messages").get<std::vector<std::string>>()};
  }

  ChatReply Send(const std::string& session_id, const std::string& text) override {
    auto body = Call("POST", "/v1/sessions/" + session_id + "/messages", Json{{"text", text}});
    return {body.at("messages").get<std::vector<std::string>>(), body.at("closed").get<bool>()};
  }

  void EndSession(const std::string& session_id) override { Call("DELETE", "/v1/sessions/" + session_id, Json()); }

 private:
  Json Call(const std::string& method, const std::string& path, const Json& body) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    httplib::Result res = method == "DELETE" ? client.Delete(path)
                                             : client.Post(path, body.dump(), "application/json");
    if (!res) throw TransportError(method + " " + path + ": " + httplib::to_string(res.error()));
    if (res->status >= 300)
      throw TransportError(method + " " + path + ": HTTP " + std::to_string(res->status) + " " + res->body);
    if (res->body.empty()) return Json::object();
    auto parsed = Json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) throw TransportError(method + " " + path + ": malformed response body");
    return parsed;
  }

  std::string base_url_;
  int timeout_seconds_;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_RUNTIME_HTTP_HPP
