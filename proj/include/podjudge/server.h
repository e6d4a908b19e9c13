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

// HTTP front end for the annotation store.
//   POST /api/sessions                    {user_id, seed}
//   GET  /api/sessions/{token}
//   POST /api/sessions/{token}/annotations
//   POST /api/export                      {out_path}
//   GET  /healthz
// NotFoundError -> 404, ValidationError/ArgumentError -> 400,
// ConflictError -> 409.

#ifndef PODJUDGE_SERVER_H_
#define PODJUDGE_SERVER_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "podjudge/annotation.h"

namespace httplib {
class Server;
}

namespace podjudge {

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

// "host:port"; ArgumentError when malformed.
ListenAddress ParseListenAddress(std::string_view text);

class AnnotationServer {
 public:
  // `static_dir`, when given, is served under "/".
  AnnotationServer(AnnotationStore& store,
                   std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Blocks until Stop(). TransportError if the address cannot be bound.
  void Listen(const ListenAddress& address);
  // Binds an ephemeral port and returns it; follow with ListenAfterBind().
  int BindToAnyPort(const std::string& host);
  void ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  void Route();

  AnnotationStore& store_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace podjudge

#endif  // PODJUDGE_SERVER_H_
