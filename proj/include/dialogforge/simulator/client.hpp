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

#ifndef DIALOGFORGE_SIMULATOR_CLIENT_HPP
#define DIALOGFORGE_SIMULATOR_CLIENT_HPP

#include <string>
#include <vector>

#include "dialogforge/common.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(TransportError);

struct ChatStart {
  std::string session_id;
  /// Greeting messages produced when the session opens.
  std::vector<std::string> messages;
};

struct ChatReply {
  std::vector<std::string> messages;
  bool closed = false;
};

/// Conversation channel to a bot. Implementations must tolerate concurrent
/// calls on distinct sessions; one session is driven by one episode.
/// Transport failures surface as TransportError.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// `hint` identifies the conversation (the goal id) so that seeded bots
  /// behave the same regardless of session scheduling.
  virtual ChatStart StartSession(const std::string& hint) = 0;
  virtual ChatReply Send(const std::string& session_id, const std::string& text) = 0;
  virtual void EndSession(const std::string& session_id) = 0;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_SIMULATOR_CLIENT_HPP
