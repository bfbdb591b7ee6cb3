#pragma once

#include <memory>
#include <string>

#include "riskweave/service.hpp"

namespace riskweave {

/// HTTP+JSON front end for SessionService.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `host:port` (port 0 picks a free one).  Throws IoError on failure.
  void bind(const std::string& host, int port);
  int port() const;
  /// Serves until stop(); call after bind().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; a bare port means 127.0.0.1.  Throws ValidationError.
std::pair<std::string, int> parse_address(const std::string& address);

}  // namespace riskweave
