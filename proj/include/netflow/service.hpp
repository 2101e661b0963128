#pragma once

// Session-oriented decision service. DecisionService holds the sessions and
// answers JSON requests; HttpServer maps it onto HTTP routes:
//
//   GET  /api/health
//   POST /api/sessions                  {scenario}
//   GET  /api/sessions/{id}
//   POST /api/sessions/{id}/step        {count}
//   POST /api/sessions/{id}/model       {model}
//   POST /api/sessions/{id}/whatif      {model?, alpha?, horizon}
//   POST /api/identify                  {criteria, thresholds, scores | ranking}
//
// Sessions are independent; mutations of one session are serialized while
// reads run concurrently.

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "netflow/dynamics.hpp"

namespace netflow::service {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct ServiceConfig {
  std::chrono::seconds idle_expiry{3600};
  std::size_t max_steps_per_request = 100000;
  std::function<Clock::time_point()> clock = [] { return Clock::now(); };
};

struct Response {
  int status = 200;
  json body;
};

class DecisionService {
 public:
  explicit DecisionService(ServiceConfig config = {});
  ~DecisionService();

  DecisionService(const DecisionService&) = delete;
  DecisionService& operator=(const DecisionService&) = delete;

  Response health() const;
  Response create_session(const json& body);
  Response advance(const std::string& id, const json& body);
  Response update_preferences(const std::string& id, const json& body);
  Response what_if(const std::string& id, const json& body) const;
  Response get_state(const std::string& id) const;
  Response identify(const json& body) const;

  std::size_t session_count() const;
  /// Drops sessions idle for longer than the configured expiry.
  std::size_t expire_idle();

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  std::string new_session_id();

  ServiceConfig config_;
  mutable std::shared_mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t id_salt_ = 0;
};

class HttpServer {
 public:
  using LogFn = std::function<void(const std::string&)>;

  HttpServer(DecisionService& service, std::optional<std::filesystem::path> static_dir = std::nullopt,
             LogFn log = {});
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Throws Error(Bind) on failure.
  void bind(const std::string& host, int port);
  int port() const noexcept;
  /// Serves until stop(); bind() first.
  void run();
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace netflow::service
