#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "riskbn/network.hpp"

namespace httplib {
class Server;
}

namespace riskbn {

inline constexpr int kDefaultPort = 8790;
inline constexpr const char* kDefaultHost = "127.0.0.1";

struct HttpResponse {
  int status = 200;
  std::string body;  // canonical JSON, newline terminated
};

// Routes requests to the shared API layer. The loaded network is immutable
// and swapped atomically; a request keeps the snapshot it started with.
class Service {
 public:
  Service() = default;
  explicit Service(BayesNet net);

  // GET /api/network, POST /api/network, POST /api/query,
  // POST /api/sensitivity, POST /api/diagnose, POST /api/scenarios/run,
  // POST /api/validate. Contract errors -> 400, no network -> 409, unknown
  // route -> 404.
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  void set_network(BayesNet net);
  std::shared_ptr<const BayesNet> network() const;

 private:
  HttpResponse load(std::string_view body);

  mutable std::mutex mu_;
  std::shared_ptr<const BayesNet> net_;
};

// HTTP front end over a Service. Adds permissive CORS headers and answers
// OPTIONS preflights.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Serves static files (e.g. a built UI) under "/".
  bool mount_static(const std::string& dir);
  // Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace riskbn
