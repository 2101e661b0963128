#include <httplib.h>

#include <sstream>

#include "netflow/service.hpp"

namespace netflow::service {

struct HttpServer::Impl {
  DecisionService& service;
  httplib::Server server;
  LogFn log;
  int port = -1;

  explicit Impl(DecisionService& s) : service(s) {}

  static void reply(httplib::Response& res, const Response& out) {
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  }

  // nullopt (and a 400 already written) when the body is not valid JSON.
  static std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
    if (req.body.empty()) return json::object();
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded()) {
      reply(res, {400, {{"error", "request body is not valid JSON"}, {"code", "ParseError"}}});
      return std::nullopt;
    }
    return j;
  }

  void routes() {
    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, service.health());
    });
    server.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto body = parse_body(req, res)) reply(res, service.create_session(*body));
    });
    server.Get(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.get_state(req.matches[1]));
    });
    server.Post(R"(/api/sessions/([^/]+)/step)", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto body = parse_body(req, res)) reply(res, service.advance(req.matches[1], *body));
    });
    server.Post(R"(/api/sessions/([^/]+)/model)", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto body = parse_body(req, res)) reply(res, service.update_preferences(req.matches[1], *body));
    });
    server.Post(R"(/api/sessions/([^/]+)/whatif)", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto body = parse_body(req, res)) reply(res, service.what_if(req.matches[1], *body));
    });
    server.Post("/api/identify", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto body = parse_body(req, res)) reply(res, service.identify(*body));
    });
    server.set_pre_routing_handler([this](const httplib::Request&, httplib::Response&) {
      service.expire_idle();
      return httplib::Server::HandlerResponse::Unhandled;
    });
    // SO_REUSEADDR only: the default also sets SO_REUSEPORT, which would let
    // a second server share a port that is already taken.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      if (!log) return;
      std::ostringstream os;
      os << req.method << ' ' << req.path << ' ' << res.status;
      log(os.str());
    });
  }
};

HttpServer::HttpServer(DecisionService& service, std::optional<std::filesystem::path> static_dir, LogFn log)
    : impl_(std::make_unique<Impl>(service)) {
  impl_->log = std::move(log);
  impl_->routes();
  if (static_dir) {
    if (!std::filesystem::is_directory(*static_dir) || !impl_->server.set_mount_point("/", static_dir->string())) {
      throw Error(ErrorCode::Io, "static directory '" + static_dir->string() + "' is not readable");
    }
  }
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int chosen = impl_->server.bind_to_any_port(host);
    if (chosen <= 0) throw Error(ErrorCode::Bind, "cannot bind " + host + " on any port");
    impl_->port = chosen;
    return;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::Bind, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->port = port;
}

int HttpServer::port() const noexcept { return impl_->port; }

void HttpServer::run() {
  if (impl_->port < 0) throw Error(ErrorCode::Bind, "server is not bound");
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::is_running() const { return impl_->server.is_running(); }

}  // namespace netflow::service
