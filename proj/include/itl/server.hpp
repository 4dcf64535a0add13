// Copyright 2026 The ITL Authors. All Rights Reserved.
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

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "itl/dialogue.hpp"
#include "itl/protocol.hpp"

namespace itl {

using Clock = std::chrono::steady_clock;
using ConnectionId = std::uint64_t;

struct StoreConfig {
  std::string domain_path;
  std::string kb_path;
  std::string lexicon_path;
  bool omniscient = false;  // every session exposes raw world atoms
  std::chrono::milliseconds grace{30000};
};

// All sessions of one service. Sessions share nothing; each has its own lock,
// so its frames are handled strictly in arrival order.
class SessionStore {
 public:
  explicit SessionStore(StoreConfig config);
  SessionStore(StoreConfig config, KnowledgeBase kb, WorldModel world, Lexicon lexicon);

  // Handles one client line and returns the reply frames in order. Malformed
  // input yields an error frame and leaves every session untouched.
  std::vector<wire::Frame> handle(std::string_view line, ConnectionId conn, Clock::time_point now = Clock::now());
  std::vector<std::string> handle_line(std::string_view line, ConnectionId conn, Clock::time_point now = Clock::now());

  // Starts the grace period of every session attached to `conn`.
  void disconnect(ConnectionId conn, Clock::time_point now = Clock::now());
  // Tears down sessions detached for longer than the grace period.
  std::size_t reap(Clock::time_point now = Clock::now());

  std::size_t size() const;
  bool contains(const std::string& id) const;
  // Copy of a session's state, for inspection.
  std::optional<SessionState> state(const std::string& id) const;

 private:
  struct TurnSnapshot {
    std::size_t transcript_lines = 0;
    std::string kb;
  };
  struct Entry {
    mutable std::mutex mutex;
    SessionState state;
    bool omniscient = false;
    std::optional<ConnectionId> owner;
    std::optional<Clock::time_point> detached_at;
    std::vector<TurnSnapshot> history;  // index 0 is the state before the first turn
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  wire::StateSnapshot snapshot(const std::string& id, const Entry& e) const;

  StoreConfig config_;
  KnowledgeBase kb_;
  WorldModel world_;
  Lexicon lexicon_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

struct ServerConfig {
  std::string bind = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  StoreConfig store;
  std::size_t max_line = 1 << 16;
  std::chrono::milliseconds reap_interval{1000};
};

// Line-delimited frames over TCP, one thread per connection.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts accepting; throws Error("IoError", ...) if the port is taken.
  void start();
  void stop();
  void wait();
  std::uint16_t port() const { return port_; }
  SessionStore& store() { return store_; }

 private:
  void accept_loop();
  void serve_connection(int fd, ConnectionId id);

  ServerConfig config_;
  SessionStore store_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::thread reaper_;
  std::mutex stop_mutex_;
  std::condition_variable stop_cv_;
  std::mutex conn_mutex_;
  std::map<ConnectionId, int> connections_;
  std::vector<std::thread> workers_;
  ConnectionId next_connection_ = 1;
};

// Runs a server until the process is interrupted.
int serve(const ServerConfig& config);

}  // namespace itl
