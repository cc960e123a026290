#pragma once

#include <memory>
#include <string>
#include <thread>

#include "guardrail/orchestrator/orchestrator.hpp"

namespace httplib {
class Server;
}

namespace guardrail::orchestrator {

/// HTTP front end.
///   POST /v1/shield/prompt, POST /v1/shield/response  -> Verdict JSON
///   GET  /v1/health                                   -> {"status": "ready", ...}
///   GET  /policies, GET|PUT|DELETE /policies/{id}
/// Errors are {"error": {"code", "message"}} with 400 (validation),
/// 404 (NOT_FOUND), 422 (NO_DETECTORS_APPLICABLE) or 500.
class Server {
 public:
  Server(std::shared_ptr<Orchestrator> orchestrator, int threads);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // BIND_FAILURE when the address cannot be bound. Port 0 picks a free port.
  void bind(const std::string& listen);
  int port() const { return port_; }
  const std::string& host() const { return host_; }

  // Blocks until stop(); in-flight requests finish before it returns.
  void run();
  void start();  // run() on a background thread
  void stop();

 private:
  void routes();

  std::shared_ptr<Orchestrator> orch_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  std::string host_;
  int port_ = -1;
};

}  // namespace guardrail::orchestrator
