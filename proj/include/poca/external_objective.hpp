#pragma once

#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "poca/objective.hpp"

namespace poca {

// A single evaluation could not produce a loss (timeout, worker death,
// protocol violation, worker-reported error). The bracket engine turns
// this into a failed (+inf) evaluation.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorkerOptions {
  std::string command;  // run via /bin/sh -c
  std::chrono::milliseconds timeout{std::chrono::hours(1)};
  unsigned max_inflight = 1;
};

// Objective evaluated by a worker process speaking newline-delimited JSON
// over its standard input/output:
//
//   -> {"type":"hello","protocol_version":1,"space":{...}}
//   -> {"type":"eval","id":N,"config":{name:value,...},"budget":B,"seed":S}
//   <- {"type":"result","id":N,"loss":L}
//   <- {"type":"error","id":N,"message":"..."}
//   -> {"type":"shutdown"}
//
// Inactive parameters are omitted from eval configs. Responses are matched
// to requests by id, so a worker may answer out of order; up to
// max_inflight requests are outstanding at once.
class ExternalObjective final : public Objective {
 public:
  ExternalObjective(ConfigSpace space, WorkerOptions options);
  ~ExternalObjective() override;

  ExternalObjective(const ExternalObjective&) = delete;
  ExternalObjective& operator=(const ExternalObjective&) = delete;

  const ConfigSpace& space() const override { return space_; }
  double evaluate(const Configuration& cfg, Budget budget, std::uint64_t seed) override;
  std::string name() const override { return "external"; }

  bool alive() const;

 private:
  struct Pending {
    bool done = false;
    bool is_error = false;
    double loss = 0.0;
    std::string message;
  };

  void reader_loop();
  void fail_all_locked(const std::string& reason);
  void write_line(const std::string& line);

  ConfigSpace space_;
  WorkerOptions options_;

  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  long pid_ = -1;
  std::thread reader_;

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::map<std::uint64_t, Pending> pending_;
  std::uint64_t next_id_ = 1;
  unsigned inflight_ = 0;
  bool dead_ = false;
  std::string death_reason_;

  std::mutex write_mutex_;
};

}  // namespace poca
