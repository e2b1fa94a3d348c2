#include "poca/external_objective.hpp"

#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace poca {

using nlohmann::json;

ExternalObjective::ExternalObjective(ConfigSpace space, WorkerOptions options)
    : space_(std::move(space)), options_(std::move(options)) {
  if (options_.command.empty()) throw std::invalid_argument("worker command must not be empty");
  if (options_.max_inflight == 0) options_.max_inflight = 1;

  // A dying worker must surface as an EvaluationError, not a SIGPIPE kill.
  std::signal(SIGPIPE, SIG_IGN);

  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
    throw std::runtime_error("pipe() failed");

  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("fork() failed");
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", options_.command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }

  pid_ = pid;
  stdin_fd_ = to_child[1];
  stdout_fd_ = from_child[0];
  ::close(to_child[0]);
  ::close(from_child[1]);

  reader_ = std::thread([this] { reader_loop(); });

  json hello;
  hello["type"] = "hello";
  hello["protocol_version"] = 1;
  hello["space"] = space_.to_json();
  try {
    write_line(hello.dump());
  } catch (const EvaluationError&) {
    // Worker died before the handshake; evaluate() will report it.
  }
}

ExternalObjective::~ExternalObjective() {
  try {
    write_line(json{{"type", "shutdown"}}.dump());
  } catch (...) {
  }
  if (stdin_fd_ >= 0) ::close(stdin_fd_);
  if (reader_.joinable()) reader_.join();
  if (stdout_fd_ >= 0) ::close(stdout_fd_);
  if (pid_ > 0) {
    const auto pid = static_cast<pid_t>(pid_);
    int status = 0;
    for (int i = 0; i < 200; ++i) {  // ~2 s grace, then kill
      if (::waitpid(pid, &status, WNOHANG) != 0) return;
      ::usleep(10'000);
    }
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
  }
}

bool ExternalObjective::alive() const {
  std::lock_guard lock(mutex_);
  return !dead_;
}

void ExternalObjective::write_line(const std::string& line) {
  std::lock_guard lock(write_mutex_);
  std::string buf = line;
  buf.push_back('\n');
  std::size_t off = 0;
  while (off < buf.size()) {
    const ssize_t n = ::write(stdin_fd_, buf.data() + off, buf.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EvaluationError(std::string("write to worker failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

void ExternalObjective::fail_all_locked(const std::string& reason) {
  dead_ = true;
  death_reason_ = reason;
  for (auto& [id, slot] : pending_) {
    if (!slot.done) {
      slot.done = true;
      slot.is_error = true;
      slot.message = reason;
    }
  }
  cv_.notify_all();
}

void ExternalObjective::reader_loop() {
  std::string buffer;
  char chunk[4096];
  for (;;) {
    const ssize_t n = ::read(stdout_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      std::lock_guard lock(mutex_);
      fail_all_locked(std::string("read from worker failed: ") + std::strerror(errno));
      return;
    }
    if (n == 0) {
      std::lock_guard lock(mutex_);
      fail_all_locked("worker exited");
      return;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));

    std::size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      const std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (line.empty()) continue;

      json msg = json::parse(line, nullptr, false);
      if (msg.is_discarded() || !msg.is_object() || !msg.contains("type")) {
        std::lock_guard lock(mutex_);
        fail_all_locked("malformed worker message: " + line);
        return;
      }
      const std::string type = msg["type"].get<std::string>();
      std::lock_guard lock(mutex_);
      if (type == "result" || type == "error") {
        if (!msg.contains("id") || !msg["id"].is_number()) {
          fail_all_locked("worker message missing id: " + line);
          return;
        }
        const auto id = msg["id"].get<std::uint64_t>();
        auto it = pending_.find(id);
        if (it == pending_.end()) continue;  // stale or duplicate id
        if (type == "result" && msg.contains("loss") && msg["loss"].is_number()) {
          it->second.loss = msg["loss"].get<double>();
        } else {
          it->second.is_error = true;
          it->second.message =
              msg.contains("message") ? msg["message"].dump() : std::string("worker error");
        }
        it->second.done = true;
        cv_.notify_all();
      }
      // Other message types from the worker are ignored.
    }
  }
}

double ExternalObjective::evaluate(const Configuration& cfg, Budget budget, std::uint64_t seed) {
  std::uint64_t id;
  {
    std::unique_lock lock(mutex_);
    if (dead_) throw EvaluationError("worker unavailable: " + death_reason_);
    cv_.wait(lock, [&] { return inflight_ < options_.max_inflight || dead_; });
    if (dead_) throw EvaluationError("worker unavailable: " + death_reason_);
    id = next_id_++;
    pending_.emplace(id, Pending{});
    ++inflight_;
  }

  auto finish = [&](auto&& release) {
    std::lock_guard lock(mutex_);
    pending_.erase(id);
    --inflight_;
    cv_.notify_all();
    release();
  };

  json req;
  req["type"] = "eval";
  req["id"] = id;
  req["config"] = space_.config_to_json(cfg);
  req["budget"] = budget;
  req["seed"] = seed;

  try {
    write_line(req.dump());
  } catch (const EvaluationError&) {
    finish([] {});
    throw;
  }

  std::unique_lock lock(mutex_);
  const bool answered =
      cv_.wait_for(lock, options_.timeout, [&] { return pending_[id].done; });
  const Pending slot = pending_[id];
  pending_.erase(id);
  --inflight_;
  cv_.notify_all();
  lock.unlock();

  if (!answered) throw EvaluationError("evaluation timed out (id " + std::to_string(id) + ")");
  if (slot.is_error) throw EvaluationError(slot.message);
  return slot.loss;
}

}  // namespace poca
