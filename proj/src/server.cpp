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

#include "itl/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <csignal>
#include <cstring>
#include <iostream>

#include "itl/error.hpp"
#include "itl/knowledge_base.hpp"

namespace itl {

using nlohmann::json;

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

wire::SessionInfo info(const std::string& id, const SessionState& s) {
  std::size_t turns = 0;
  for (const auto& line : s.transcript) turns += line.rfind("H: ", 0) == 0;
  return {id, to_string(s.phase), turns, s.transcript};
}

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

std::string too_long(std::size_t max_line) {
  return wire::serialize(
             wire::ErrorFrame{"", "FrameTooLong", "frame exceeds " + std::to_string(max_line) + " bytes"}) +
         "\n";
}

}  // namespace

SessionStore::SessionStore(StoreConfig config)
    : SessionStore(config, load_kb_file(config.kb_path), load_domain_file(config.domain_path),
                   load_lexicon_file(config.lexicon_path)) {}

SessionStore::SessionStore(StoreConfig config, KnowledgeBase kb, WorldModel world, Lexicon lexicon)
    : config_(std::move(config)), kb_(std::move(kb)), world_(std::move(world)), lexicon_(std::move(lexicon)) {}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error("UnknownSession", "no session '" + id + "'");
  return it->second;
}

wire::StateSnapshot SessionStore::snapshot(const std::string& id, const Entry& e) const {
  wire::StateSnapshot f{id, observe(e.state.kb, e.state.world.percept()).to_strings(), std::nullopt};
  if (e.omniscient) f.raw_atoms = e.state.world.state.to_strings();
  return f;
}

std::vector<wire::Frame> SessionStore::handle(std::string_view line, ConnectionId conn, Clock::time_point) {
  std::string session;
  try {
    wire::Frame frame = wire::parse_frame(line);
    return std::visit(
        Overloaded{
            [&](const wire::CreateSession& f) -> std::vector<wire::Frame> {
              auto e = std::make_shared<Entry>();
              e->state = new_session(kb_, world_, lexicon_);
              e->omniscient = f.omniscient || config_.omniscient;
              e->owner = conn;
              e->history.push_back({0, save_kb(e->state.kb)});
              {
                std::lock_guard lock(mutex_);
                session = "s" + std::to_string(next_id_++);
                sessions_[session] = e;
              }
              std::lock_guard lock(e->mutex);
              return {info(session, e->state), wire::PhaseChange{session, to_string(e->state.phase)},
                      snapshot(session, *e)};
            },
            [&](const wire::Attach& f) -> std::vector<wire::Frame> {
              session = f.session;
              auto e = find(f.session);
              std::lock_guard lock(e->mutex);
              e->owner = conn;
              e->detached_at.reset();
              return {info(session, e->state), snapshot(session, *e)};
            },
            [&](const wire::HumanUtterance& f) -> std::vector<wire::Frame> {
              session = f.session;
              auto e = find(f.session);
              std::lock_guard lock(e->mutex);
              if (e->owner != conn) throw Error("NotAttached", "connection is not attached to '" + session + "'");
              auto r = step(std::move(e->state), f.text);
              e->state = std::move(r.session);
              e->history.push_back({e->state.transcript.size(), save_kb(e->state.kb)});
              std::vector<wire::Frame> out;
              json acts = json::array();
              for (const auto& a : r.acts) acts.push_back(io::to_json(a));
              out.push_back(wire::RobotUtterance{session, r.reply, acts});
              for (const auto& ev : r.events) {
                if (ev.type == "kb_delta") out.push_back(wire::KbDelta{session, ev.kind, ev.payload});
                if (ev.type == "phase") out.push_back(wire::PhaseChange{session, ev.kind});
              }
              out.push_back(snapshot(session, *e));
              return out;
            },
            [&](const wire::KbAt& f) -> std::vector<wire::Frame> {
              session = f.session;
              auto e = find(f.session);
              std::lock_guard lock(e->mutex);
              if (f.turn >= e->history.size())
                throw Error("OutOfRange", "session '" + session + "' has " + std::to_string(e->history.size() - 1) +
                                              " turns");
              return {wire::KbSnapshot{session, f.turn, json::parse(e->history[f.turn].kb)}};
            },
            [&](const auto& f) -> std::vector<wire::Frame> {
              throw Error("UnexpectedFrame", "'" + wire::type_of(f) + "' is a server frame");
            }},
        frame);
  } catch (const Error& e) {
    return {wire::ErrorFrame{session, e.code(), e.what()}};
  } catch (const std::exception& e) {
    return {wire::ErrorFrame{session, "Internal", e.what()}};
  }
}

std::vector<std::string> SessionStore::handle_line(std::string_view line, ConnectionId conn, Clock::time_point now) {
  std::vector<std::string> out;
  for (const auto& f : handle(line, conn, now)) out.push_back(wire::serialize(f));
  return out;
}

void SessionStore::disconnect(ConnectionId conn, Clock::time_point now) {
  std::lock_guard lock(mutex_);
  for (auto& [_, e] : sessions_) {
    std::lock_guard entry_lock(e->mutex);
    if (e->owner == conn) {
      e->owner.reset();
      e->detached_at = now;
    }
  }
}

std::size_t SessionStore::reap(Clock::time_point now) {
  std::lock_guard lock(mutex_);
  std::size_t removed = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool expired;
    {
      std::lock_guard entry_lock(it->second->mutex);
      expired = it->second->detached_at && now - *it->second->detached_at > config_.grace;
    }
    if (expired) {
      it = sessions_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

bool SessionStore::contains(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return sessions_.count(id) != 0;
}

std::optional<SessionState> SessionStore::state(const std::string& id) const {
  std::shared_ptr<Entry> e;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    e = it->second;
  }
  std::lock_guard lock(e->mutex);
  return e->state;
}

Server::Server(ServerConfig config) : config_(config), store_(config.store) {}

Server::~Server() { stop(); }

void Server::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error("IoError", std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(config_.port);
  if (::inet_pton(AF_INET, config_.bind.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw Error("IoError", "bad bind address '" + config_.bind + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 64) < 0) {
    std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error("IoError", "cannot listen on " + config_.bind + ":" + std::to_string(config_.port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
  reaper_ = std::thread([this] {
    std::unique_lock lock(stop_mutex_);
    while (running_) {
      stop_cv_.wait_for(lock, config_.reap_interval);
      store_.reap();
    }
  });
}

void Server::accept_loop() {
  while (running_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (!running_) break;
      continue;
    }
    std::lock_guard lock(conn_mutex_);
    ConnectionId id = next_connection_++;
    connections_[id] = fd;
    workers_.emplace_back([this, fd, id] { serve_connection(fd, id); });
  }
}

void Server::serve_connection(int fd, ConnectionId id) {
  std::string buffer;
  bool overlong = false;
  char chunk[4096];
  while (running_) {
    ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    bool alive = true;
    while (alive && (pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (overlong) {
        overlong = false;
        continue;
      }
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line.size() > config_.max_line) {
        alive = send_all(fd, too_long(config_.max_line));
        continue;
      }
      std::string out;
      for (const auto& f : store_.handle_line(line, id)) out += f + "\n";
      alive = send_all(fd, out);
    }
    if (!alive) break;
    if (buffer.size() > config_.max_line) {
      buffer.clear();
      if (!overlong && !send_all(fd, too_long(config_.max_line))) break;
      overlong = true;
    }
  }
  store_.disconnect(id);
  std::lock_guard lock(conn_mutex_);
  if (connections_.erase(id)) ::close(fd);
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  stop_cv_.notify_all();
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (acceptor_.joinable()) acceptor_.join();
  if (reaper_.joinable()) reaper_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(conn_mutex_);
    for (auto& [_, fd] : connections_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void Server::wait() {
  if (acceptor_.joinable()) acceptor_.join();
}

int serve(const ServerConfig& config) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  Server server(config);
  server.start();
  std::cout << "listening on " << config.bind << ":" << server.port() << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  return 0;
}

}  // namespace itl
