// Copyright 2026 The Podjudge Authors.
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

#include "podjudge/server.h"

#include <charconv>

#include <fmt/format.h>

#include "httplib.h"
#include "podjudge/errors.h"

namespace podjudge {

using nlohmann::json;

namespace {

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json ParseBody(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("request body is not JSON: {}", e.what()));
  }
}

// Runs `fn` and maps library errors onto status codes.
template <typename Fn>
void Guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFoundError& e) {
    Reply(res, 404, {{"error", e.what()}});
  } catch (const ConflictError& e) {
    Reply(res, 409, {{"error", e.what()}});
  } catch (const ValidationError& e) {
    Reply(res, 400, {{"error", e.what()}});
  } catch (const ArgumentError& e) {
    Reply(res, 400, {{"error", e.what()}});
  } catch (const std::exception& e) {
    Reply(res, 500, {{"error", e.what()}});
  }
}

}  // namespace

ListenAddress ParseListenAddress(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ArgumentError(fmt::format("listen address '{}' is not host:port", text));
  }
  ListenAddress out;
  out.host = std::string(text.substr(0, colon));
  const auto port = text.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), out.port);
  if (ec != std::errc() || ptr != port.data() + port.size() || out.port < 0 ||
      out.port > 65535) {
    throw ArgumentError(fmt::format("bad port in listen address '{}'", text));
  }
  return out;
}

AnnotationServer::AnnotationServer(AnnotationStore& store,
                                   std::optional<std::filesystem::path> static_dir)
    : store_(store), server_(std::make_unique<httplib::Server>()) {
  Route();
  if (static_dir && !server_->set_mount_point("/", static_dir->string())) {
    throw ConfigError(fmt::format("static directory '{}' does not exist", static_dir->string()));
  }
}

AnnotationServer::~AnnotationServer() { Stop(); }

void AnnotationServer::Route() {
  server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  server_->Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      const json body = ParseBody(req);
      if (!body.is_object() || !body.contains("user_id") || !body.at("user_id").is_string()) {
        throw ValidationError("body needs a string 'user_id'");
      }
      std::uint64_t seed = 0;
      if (body.contains("seed")) {
        if (!body.at("seed").is_number_unsigned()) {
          throw ValidationError("'seed' must be a non-negative integer");
        }
        seed = body.at("seed").get<std::uint64_t>();
      }
      const auto session = store_.CreateSession(body.at("user_id").get<std::string>(), seed);
      Reply(res, 201, ClientPayload(session));
    });
  });

  server_->Get(R"(/api/sessions/([A-Za-z0-9_-]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guarded(res, [&] { Reply(res, 200, ClientPayload(store_.Get(req.matches[1]))); });
               });

  server_->Post(R"(/api/sessions/([A-Za-z0-9_-]+)/annotations)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  Guarded(res, [&] {
                    const auto item = ParseSubmission(ParseBody(req));
                    const std::string token = req.matches[1];
                    store_.Submit(token, item);
                    const auto session = store_.Get(token);
                    // The stored record carries model ids; the reply does not.
                    Reply(res, 200, {{"stored", true}, {"completed", session.completed}});
                  });
                });

  server_->Post("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      const json body = ParseBody(req);
      if (!body.is_object() || !body.contains("out_path") || !body.at("out_path").is_string()) {
        throw ValidationError("body needs a string 'out_path'");
      }
      const auto path = store_.ResolveExportPath(body.at("out_path").get<std::string>());
      Reply(res, 200, {{"count", store_.Export(path)}});
    });
  });
}

void AnnotationServer::Listen(const ListenAddress& address) {
  if (!server_->bind_to_port(address.host, address.port)) {
    throw TransportError(fmt::format("cannot bind {}:{}", address.host, address.port));
  }
  ListenAfterBind();
}

int AnnotationServer::BindToAnyPort(const std::string& host) {
  const int port = server_->bind_to_any_port(host);
  if (port < 0) throw TransportError(fmt::format("cannot bind {}", host));
  return port;
}

void AnnotationServer::ListenAfterBind() { server_->listen_after_bind(); }

void AnnotationServer::Stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void AnnotationServer::WaitUntilReady() const { server_->wait_until_ready(); }

}  // namespace podjudge
