#include "riskbn/service.hpp"

#include <httplib.h>

#include "riskbn/api.hpp"
#include "riskbn/json_format.hpp"
#include "riskbn/network_io.hpp"

namespace riskbn {

namespace {

HttpResponse ok(const Json& body) { return {200, to_canonical_json(body)}; }

HttpResponse failure(int status, const Error& e) { return {status, to_canonical_json(api::error_response(e))}; }

}  // namespace

Service::Service(BayesNet net) { set_network(std::move(net)); }

void Service::set_network(BayesNet net) {
  require_valid(net);
  auto next = std::make_shared<const BayesNet>(std::move(net));
  std::lock_guard lock(mu_);
  net_ = std::move(next);
}

std::shared_ptr<const BayesNet> Service::network() const {
  std::lock_guard lock(mu_);
  return net_;
}

HttpResponse Service::load(std::string_view body) {
  std::vector<std::string> warnings;
  BayesNet net = load_network(body, &warnings);
  Json summary = api::network_summary(net);
  set_network(std::move(net));
  return ok(summary);
}

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  const bool get = method == "GET";
  const bool post = method == "POST";
  try {
    if (path == "/api/network" && post) return load(body);

    const bool known = (path == "/api/network" && get) ||
                       (post && (path == "/api/query" || path == "/api/sensitivity" || path == "/api/diagnose" ||
                                 path == "/api/scenarios/run" || path == "/api/validate"));
    if (!known) {
      Json err = Json::object();
      err["code"] = "not_found";
      err["message"] = std::string(method) + " " + std::string(path) + " is not an endpoint";
      Json out = Json::object();
      out["error"] = std::move(err);
      return {404, to_canonical_json(out)};
    }

    const auto net = network();
    if (!net) return failure(409, Error(ErrorCode::no_network, "no network is loaded"));

    if (path == "/api/network") return ok(api::network_summary(*net));
    const Json req = api::parse_body(body);
    if (path == "/api/query") return ok(api::query_response(*net, api::parse_query_request(req)));
    if (path == "/api/sensitivity") return ok(api::sensitivity_response(*net, api::parse_sensitivity_request(req)));
    if (path == "/api/diagnose") return ok(api::diagnose_response(*net, api::parse_diagnose_request(req)));
    if (path == "/api/scenarios/run") return ok(api::scenario_response(*net, api::parse_scenario_request(req)));
    return ok(api::validity_response(*net, api::parse_validate_request(req)));
  } catch (const Error& e) {
    return failure(e.code() == ErrorCode::no_network ? 409 : 400, e);
  } catch (const std::exception& e) {
    Json err = Json::object();
    err["code"] = "internal";
    err["message"] = e.what();
    Json out = Json::object();
    out["error"] = std::move(err);
    return {500, to_canonical_json(out)};
  }
}

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = service_.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server_->Get("/api/.*", dispatch);
  server_->Post("/api/.*", dispatch);
  server_->Options("/api/.*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::mount_static(const std::string& dir) { return server_->set_mount_point("/", dir); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_->is_running()) server_->stop();
}

}  // namespace riskbn
