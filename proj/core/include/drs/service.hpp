#pragma once

// HTTP+JSON front end. Each session is an independent controller and
// journal; requests on one session run one at a time.
//
//   POST /sessions                         -> {"id"}
//   POST /sessions/{id}/inputs             {"formula"} -> outcome
//   GET  /sessions/{id}/beliefs?status=    believed (default), disbelieved, all
//   GET  /sessions/{id}/entries/{t}
//   GET  /sessions/{id}/hierarchy
//   GET  /sessions/{id}/pending
//   POST /sessions/{id}/pending            {"retract": [t, ...]} -> report
//   GET  /sessions/{id}/export/{journal|snapshot|dot}
//
// Unknown sessions or entries answer 404, writes during a pending choice 409,
// bad input 400. Error bodies are {"error": {"code", "message"}}.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "drs/session.hpp"

namespace drs {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // When set, each session journals to DIR/<id>.jsonl and existing journals
  // are replayed at startup.
  std::optional<std::filesystem::path> data_dir;
  ChoiceMode default_mode = ChoiceMode::prompt;
};

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the socket and returns the bound port. Throws Error(bind_failure)
  // when the address is unavailable.
  int bind();
  // Serves until stop(). Call bind() first.
  void listen();
  void stop();

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace drs
