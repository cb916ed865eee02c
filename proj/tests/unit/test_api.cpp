#include <doctest.h>
#include <httplib.h>

#include <cmath>
#include <thread>

#include "bundled_fixtures.hpp"
#include "riskbn/api.hpp"
#include "riskbn/network_io.hpp"
#include "riskbn/phishing_model.hpp"
#include "riskbn/service.hpp"
#include "test_nets.hpp"

using namespace riskbn;

namespace {

Json body_of(const HttpResponse& r) { return Json::parse(r.body); }

std::vector<double> doubles(const Json& arr) { return arr.get<std::vector<double>>(); }

}  // namespace

TEST_SUITE("api") {

TEST_CASE("no network loaded") {
  Service svc;
  const auto r = svc.handle("POST", "/api/query", "{}");
  CHECK(r.status == 409);
  CHECK(body_of(r)["error"]["code"] == "no_network");
  CHECK(svc.handle("GET", "/api/network", "").status == 409);
}

TEST_CASE("unknown route and wrong method") {
  Service svc(build_bundled_model());
  const auto r = svc.handle("GET", "/api/nothing", "");
  CHECK(r.status == 404);
  CHECK(body_of(r)["error"]["code"] == "not_found");
  CHECK(svc.handle("GET", "/api/query", "").status == 404);
}

TEST_CASE("empty query returns the prior and the baseline assessment") {
  Service svc(build_bundled_model());
  const auto r = svc.handle("POST", "/api/query", "");
  REQUIRE(r.status == 200);
  CHECK(r.body.back() == '\n');
  const Json j = body_of(r);
  for (const auto& [id, want] : fixtures::kBundledPrior) {
    const auto got = doubles(j["marginals"][id]);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
  }
  CHECK(j["log_evidence"] == 0.0);
  CHECK(j["assessment"]["threshold_node"] == "ttp_shift_threshold");
  CHECK(j["assessment"]["alarm"] == false);
}

TEST_CASE("threshold observed as Intolerable") {
  Service svc(build_bundled_model());
  const auto r = svc.handle("POST", "/api/query",
                            R"({"evidence":{"hard":{"ttp_shift_threshold":"Intolerable"}},"alarm":{"state":"Intolerable","cutoff":0.5}})");
  REQUIRE(r.status == 200);
  const Json j = body_of(r);
  CHECK(doubles(j["assessment"]["posterior"]) == std::vector<double>{0, 0, 0, 1});
  CHECK(j["assessment"]["alarm"] == true);
}

TEST_CASE("contract errors map to 400 with their code") {
  Service svc(build_bundled_model());
  auto r = svc.handle("POST", "/api/query", R"({"evidence":{"hard":{"ai_tool_availability":"maybe"}}})");
  CHECK(r.status == 400);
  CHECK(body_of(r)["error"]["code"] == "unknown_state");
  r = svc.handle("POST", "/api/query", R"({"evidence":{"hard":{"nope":"x"}}})");
  CHECK(body_of(r)["error"]["code"] == "unknown_node");
  r = svc.handle("POST", "/api/query", "{not json");
  CHECK(r.status == 400);
  CHECK(body_of(r)["error"]["code"] == "parse_error");
  r = svc.handle("POST", "/api/query", R"({"evidnce":{}})");
  CHECK(body_of(r)["error"]["code"] == "parse_error");
  r = svc.handle("POST", "/api/query", R"({"threshold":"phishing_volume"})");
  CHECK(body_of(r)["error"]["code"] == "not_threshold_node");
  r = svc.handle("POST", "/api/sensitivity", R"({"target":{"node":"ttp_shift_threshold","state":"High"},"delta":2})");
  CHECK(body_of(r)["error"]["code"] == "invalid_argument");
}

TEST_CASE("zero-probability evidence is rejected") {
  BayesNet net = riskbn::testing::two_node_net();
  net.nodes[0].cpt.rows = {{1.0, 0.0}};
  Service svc(net);
  const auto r = svc.handle("POST", "/api/query", R"({"evidence":{"hard":{"A":"a1"}}})");
  CHECK(r.status == 400);
  CHECK(body_of(r)["error"]["code"] == "zero_probability_evidence");
}

TEST_CASE("other endpoints answer") {
  Service svc(build_bundled_model());
  auto r = svc.handle("GET", "/api/network", "");
  REQUIRE(r.status == 200);
  CHECK(body_of(r)["nodes"].size() == 8);

  r = svc.handle("POST", "/api/sensitivity", R"({"target":{"node":"ttp_shift_threshold","state":"Intolerable"}})");
  REQUIRE(r.status == 200);
  const Json s = body_of(r);
  CHECK(s["delta"] == 0.1);
  CHECK(std::abs(s["baseline"].get<double>() - fixtures::kBundledPrior.back().second[3]) < 1e-12);
  for (std::size_t i = 1; i < s["entries"].size(); ++i) {
    CHECK(s["entries"][i]["range"].get<double>() <= s["entries"][i - 1]["range"].get<double>() + 1e-10);
  }

  r = svc.handle("POST", "/api/diagnose",
                 R"({"outcome_evidence":{"hard":{"employee_opens_malicious_email":"yes"}},"rank_over":["ai_linguistic_mastery"]})");
  REQUIRE(r.status == 200);
  CHECK(body_of(r)["entries"].size() == 2);

  const std::string scen = read_text_file(std::string(RISKBN_MODELS_DIR) + "/phishing_scenarios.json");
  r = svc.handle("POST", "/api/scenarios/run", scen);
  REQUIRE(r.status == 200);
  const Json sr = body_of(r);
  REQUIRE(sr["results"].size() == fixtures::kBundledScenarios.size());
  for (std::size_t i = 0; i < sr["results"].size(); ++i) {
    const auto got = doubles(sr["results"][i]["assessment"]["posterior"]);
    const auto& want = fixtures::kBundledScenarios[i].second;
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-12);
  }

  r = svc.handle("POST", "/api/validate", "{}");
  REQUIRE(r.status == 200);
  const Json v = body_of(r);
  CHECK(v["nomological"]["pass"] == true);
  CHECK(v["concurrent"].is_null());
  CHECK(v["checklist"]["status"] == "manual");
  CHECK(v["checklist"]["items"].size() == 8);
}

TEST_CASE("loading a network swaps the served model") {
  Service svc;
  const std::string text = save_network(riskbn::testing::two_node_net());
  auto r = svc.handle("POST", "/api/network", text);
  REQUIRE(r.status == 200);
  r = svc.handle("POST", "/api/query", "{}");
  REQUIRE(r.status == 200);
  const Json j = body_of(r);
  CHECK(j["assessment"].is_null());
  CHECK(std::abs(j["marginals"]["B"][0].get<double>() - 0.42) < 1e-15);
  // A broken network is rejected and the previous one stays.
  r = svc.handle("POST", "/api/network", R"({"nodes":[{"id":"A","states":["a"],"cpt":{"parents":[],"rows":[[1]]}}]})");
  CHECK(r.status == 400);
  CHECK(svc.network()->nodes.size() == 2);
}

TEST_CASE("HTTP server over a real socket") {
  Service svc(build_bundled_model());
  HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread th([&] { server.listen(); });

  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);
  auto res = cli.Post("/api/query", "{}", "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body == svc.handle("POST", "/api/query", "{}").body);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  CHECK(res->get_header_value("Content-Type").find("application/json") == 0);

  res = cli.Get("/api/network");
  REQUIRE(res);
  CHECK(res->status == 200);

  res = cli.Post("/api/query", R"({"evidence":{"hard":{"ai_tool_availability":"maybe"}}})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = cli.Options("/api/query");
  REQUIRE(res);
  CHECK(res->status == 204);
  CHECK_FALSE(res->get_header_value("Access-Control-Allow-Methods").empty());

  server.stop();
  th.join();
}

TEST_CASE("request parsers") {
  const auto q = api::parse_query_request(Json::parse(R"({"query":["A"],"alarm":{"state":"High","cutoff":0.2}})"));
  CHECK(q.query == std::vector<std::string>{"A"});
  CHECK(q.alarm.state == "High");
  CHECK(q.alarm.cutoff == 0.2);
  CHECK(api::split_assignment("a=b") == std::pair<std::string, std::string>{"a", "b"});
  CHECK_THROWS_AS(api::split_assignment("ab"), Error);
  CHECK(api::parse_number_list("1,0.5") == std::vector<double>{1, 0.5});
  CHECK(api::parse_proxy_scores("[1, 2]") == std::vector<double>{1, 2});
  CHECK(api::parse_proxy_scores("1 2,3\n4") == std::vector<double>{1, 2, 3, 4});
  CHECK(api::render_table({{"a", "bbb"}, {"cc", "d"}}) == "a   bbb\ncc  d\n");
  CHECK(api::fixed6(0.5) == "0.500000");
}

TEST_CASE("concurrent identical queries return identical bytes") {
  Service svc(build_bundled_model());
  const std::string body = R"({"evidence":{"hard":{"technical_email_filtering":"weak"}}})";
  const std::string want = svc.handle("POST", "/api/query", body).body;
  std::vector<std::string> got(8);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < got.size(); ++i) {
    threads.emplace_back([&, i] {
      for (int k = 0; k < 20; ++k) {
        const std::string b = svc.handle("POST", "/api/query", body).body;
        if (k == 0 || b != want) got[i] = b;
      }
    });
  }
  // A reload mid-flight swaps the snapshot without disturbing readers.
  svc.set_network(build_bundled_model());
  for (auto& t : threads) t.join();
  for (const auto& g : got) CHECK(g == want);
}

}  // TEST_SUITE
