#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cb2/protocol.hpp"
#include "cb2/session.hpp"

namespace cb2 {

/// The server could not be reached, or did not answer, in time.
class ConnectTimeout : public SessionError {
 public:
  using SessionError::SessionError;
};

/// The lobby refused the join; `reason()` is the server's reason code.
class JoinRejected : public SessionError {
 public:
  explicit JoinRejected(std::string reason) : SessionError("join rejected: " + reason), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

struct ConnectOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string lobby_id = "main";
  std::string display_name = "bot";
  std::vector<Role> qualifications{Role::Leader, Role::Follower};
  bool is_bot = true;
  bool record = true;
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds pair_timeout{120000};
  std::chrono::milliseconds step_timeout{600000};
};

/// Networked session: joins a lobby, blocks until paired, then plays one game.
class NetSession final : public Session {
 public:
  ~NetSession() override;

  Role role() const override;
  GameId game_id() const override;
  StepResult initial() override;
  StepResult step(const Action& action) override;

  /// Sends LeaveGame and closes the connection.
  void leave();
  /// Tutorial prompts received so far.
  const std::vector<msg::TutorialPrompt>& prompts() const;

  struct Impl;
  explicit NetSession(std::unique_ptr<Impl> impl);

 private:
  std::unique_ptr<Impl> impl_;
};

std::unique_ptr<NetSession> connect(const ConnectOptions& options);

/// Editor attached to a scenario room: receives the room's events and pushes edits.
class EditorSession {
 public:
  ~EditorSession();

  /// Next event of the room, waiting at most `timeout`.
  std::optional<GameEvent> next_event(std::chrono::milliseconds timeout);
  /// Applies an edit between actions; returns the refusal reason, if any.
  std::optional<std::string> push(const StateEdit& edit, std::chrono::milliseconds timeout = std::chrono::seconds(10));

  struct Impl;
  explicit EditorSession(std::unique_ptr<Impl> impl);

 private:
  std::unique_ptr<Impl> impl_;
};

/// Throws JoinRejected with the ack reason when the room refuses the editor.
std::unique_ptr<EditorSession> attach_editor(const std::string& host, int port, const std::string& lobby_id,
                                             GameId game_id,
                                             std::chrono::milliseconds timeout = std::chrono::seconds(5));

}  // namespace cb2
