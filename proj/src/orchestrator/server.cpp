#include "guardrail/orchestrator/server.hpp"

#include <httplib.h>

#include <fmt/format.h>

#include "guardrail/core/error.hpp"
#include "guardrail/orchestrator/wire.hpp"
#include "guardrail/policy/loader.hpp"

namespace guardrail::orchestrator {
namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::NoDetectorsApplicable: return 422;
    case ErrorCode::IoFailure:
    case ErrorCode::BindFailure: return 500;
    default: return 400;
  }
}

void reply_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, const Error& e) {
  reply_json(res, status_for(e.code()), error_json(to_string(e.code()), e.what()));
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    reply_error(res, e);
  } catch (const std::exception& e) {
    reply_json(res, 500, error_json("INTERNAL", e.what()));
  }
}

}  // namespace

Server::Server(std::shared_ptr<Orchestrator> orchestrator, int threads)
    : orch_(std::move(orchestrator)), http_(std::make_unique<httplib::Server>()) {
  const auto n = static_cast<std::size_t>(std::max(1, threads));
  http_->new_task_queue = [n] { return new httplib::ThreadPool(n); };
  routes();
}

Server::~Server() {
  stop();
}

void Server::routes() {
  auto shield = [this](Direction d) {
    return [this, d](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto request = decode_shield_request(req.body, d);
        reply_json(res, 200, to_json(orch_->shield(request)));
      });
    };
  };
  http_->Post("/v1/shield/prompt", shield(Direction::Prompt));
  http_->Post("/v1/shield/response", shield(Direction::Response));

  http_->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    reply_json(res, 200,
               {{"status", "ready"},
                {"detectors", orch_->detectors()->ids()},
                {"policies", orch_->policies().snapshot()->ids()}});
  });

  http_->Get("/policies", [this](const httplib::Request&, httplib::Response& res) {
    nlohmann::json list = nlohmann::json::array();
    auto set = orch_->policies().snapshot();
    for (const auto& [id, t] : set->templates) {
      list.push_back({{"policy_id", id}, {"jurisdiction", t->jurisdiction}, {"rules", t->rules.size()}});
    }
    reply_json(res, 200, {{"policies", std::move(list)}});
  });
  http_->Get(R"(/policies/([A-Za-z0-9_.\-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto set = orch_->policies().snapshot();
      const auto* t = set->find(req.matches[1].str());
      if (t == nullptr) throw Error(ErrorCode::NotFound, "no policy '" + req.matches[1].str() + "'");
      reply_json(res, 200, policy::to_json(*t));
    });
  });
  http_->Put(R"(/policies/([A-Za-z0-9_.\-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto t = orch_->policies().put(req.matches[1].str(), req.body);
      reply_json(res, 200, policy::to_json(*t));
    });
  });
  http_->Delete(R"(/policies/([A-Za-z0-9_.\-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto id = req.matches[1].str();
      if (std::find(orch_->default_policies().begin(), orch_->default_policies().end(), id) !=
          orch_->default_policies().end()) {
        throw Error(ErrorCode::InvalidArgument, "policy '" + id + "' is a default policy");
      }
      orch_->policies().remove(id);
      res.status = 204;
    });
  });
}

void Server::bind(const std::string& listen) {
  HostPort hp;
  try {
    hp = parse_listen(listen);
  } catch (const Error& e) {
    throw Error(ErrorCode::BindFailure, e.what());
  }
  host_ = hp.host;
  // httplib's defaults add SO_REUSEPORT, which would let a second service
  // share a port that is already taken.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  if (hp.port == 0) {
    port_ = http_->bind_to_any_port(hp.host);
    if (port_ < 0) throw Error(ErrorCode::BindFailure, "cannot bind " + listen);
  } else {
    if (!http_->bind_to_port(hp.host, hp.port)) throw Error(ErrorCode::BindFailure, "cannot bind " + listen);
    port_ = hp.port;
  }
}

void Server::run() {
  if (port_ < 0) throw Error(ErrorCode::BindFailure, "server not bound");
  http_->listen_after_bind();
}

void Server::start() {
  if (port_ < 0) throw Error(ErrorCode::BindFailure, "server not bound");
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
}

void Server::stop() {
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace guardrail::orchestrator
