#include "riskweave/http_server.hpp"

#include <sys/socket.h>

#include "httplib.h"
#include "riskweave/errors.hpp"

namespace riskweave {

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;
  int port = 0;

  explicit Impl(SessionService& s) : service(s) {}

  void reply(httplib::Response& res, const Response& r) {
    res.status = r.status;
    if (r.status != 204) res.set_content(r.body.dump(), "application/json");
  }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  Impl* impl = impl_.get();
  const std::string origin = service.config().cors_origin;

  // SO_REUSEPORT (httplib's default) would let a second server share a busy port.
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  svr.set_default_headers({{"Access-Control-Allow-Origin", origin},
                           {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  svr.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  svr.Get("/health", [impl](const httplib::Request&, httplib::Response& res) {
    impl->reply(res, impl->service.health());
  });
  svr.Get("/models", [impl](const httplib::Request&, httplib::Response& res) {
    impl->reply(res, impl->service.list_models());
  });
  svr.Post("/sessions", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->reply(res, impl->service.create_session(req.body));
  });
  svr.Get("/sessions", [impl](const httplib::Request&, httplib::Response& res) {
    impl->reply(res, impl->service.list_sessions());
  });
  svr.Get("/sessions/:id", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->reply(res, impl->service.get_session(req.path_params.at("id")));
  });
  svr.Get("/sessions/:id/next", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->reply(res, impl->service.next_pair(req.path_params.at("id")));
  });
  svr.Put("/sessions/:id/judgments", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->reply(res, impl->service.put_judgment(req.path_params.at("id"), req.body));
  });
  svr.Get("/sessions/:id/results", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->reply(res, impl->service.results(req.path_params.at("id"),
                                           req.get_param_value("weights_source")));
  });
  svr.Get("/sessions/:id/supermatrix", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->reply(res, impl->service.supermatrix(req.path_params.at("id"), req.get_param_value("stage"),
                                               req.get_param_value("weights_source")));
  });
  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty())
      res.set_content(nlohmann::json{{"error", httplib::status_message(res.status)}}.dump(),
                      "application/json");
  });
}

HttpServer::~HttpServer() = default;

void HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw IoError("cannot bind " + host + ":0");
    impl_->port = bound;
  } else {
    if (!impl_->server.bind_to_port(host, port))
      throw IoError("cannot bind " + host + ":" + std::to_string(port));
    impl_->port = port;
  }
}

int HttpServer::port() const { return impl_->port; }

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

std::pair<std::string, int> parse_address(const std::string& address) {
  std::string host = "127.0.0.1";
  std::string port_text = address;
  if (auto colon = address.rfind(':'); colon != std::string::npos) {
    host = address.substr(0, colon);
    port_text = address.substr(colon + 1);
    if (host.empty()) host = "0.0.0.0";
  }
  int port = -1;
  try {
    std::size_t used = 0;
    port = std::stoi(port_text, &used);
    if (used != port_text.size()) port = -1;
  } catch (const std::exception&) {
  }
  if (port < 0 || port > 65535) throw ValidationError("invalid listen address '" + address + "'");
  return {host, port};
}

}  // namespace riskweave
