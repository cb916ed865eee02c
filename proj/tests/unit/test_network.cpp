#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "riskbn/json_format.hpp"
#include "riskbn/network.hpp"
#include "riskbn/network_io.hpp"
#include "test_nets.hpp"

using namespace riskbn;
using riskbn::testing::make_node;
using riskbn::testing::two_node_net;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

std::vector<ViolationKind> kinds(const ValidationReport& r) {
  std::vector<ViolationKind> out;
  for (const auto& v : r.violations) out.push_back(v.kind);
  return out;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("two-node chain validates cleanly") {
  CHECK(validate_network(two_node_net()).ok());
}

TEST_CASE("two-cycle is reported once, naming both nodes") {
  BayesNet net;
  net.nodes.push_back(make_node("A", {"a0", "a1"}, {"B"}, {{0.5, 0.5}, {0.5, 0.5}}));
  net.nodes.push_back(make_node("B", {"b0", "b1"}, {"A"}, {{0.5, 0.5}, {0.5, 0.5}}));
  const auto rep = validate_network(net);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].kind == ViolationKind::cycle);
  CHECK(rep.violations[0].nodes == std::vector<std::string>{"A", "B"});
  CHECK(code_of([&] { topological_order(net); }) == ErrorCode::cycle);
  CHECK(code_of([&] { require_valid(net); }) == ErrorCode::validation_failed);
}

TEST_CASE("row summing to 1.1 is one non-normalized violation") {
  BayesNet net;
  net.nodes.push_back(make_node("A", {"a0", "a1"}, {}, {{0.5, 0.6}}));
  const auto rep = validate_network(net);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].kind == ViolationKind::non_normalized);
  CHECK(rep.violations[0].deviation == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("structural violations") {
  BayesNet net;
  net.nodes.push_back(make_node("A", {"a0"}, {}, {{1.0}}));
  net.nodes.push_back(make_node("B", {"b0", "b0"}, {"Z"}, {{0.5, 0.5}}));
  net.nodes.push_back(make_node("C", {"c0", "c1"}, {}, {{0.5, 0.5}, {0.5, 0.5}}));
  net.nodes.push_back(make_node("D", {"d0", "d1"}, {}, {{1.5, -0.5}}));
  net.nodes.push_back(make_node("E", {"e0", "e1"}, {}, {{0.5, 0.25, 0.25}}));
  net.nodes.push_back(make_node("C", {"x,y", "z"}, {}, {{0.5, 0.5}}));
  net.threshold_nodes = {"Q", "C"};
  const auto k = kinds(validate_network(net));
  for (auto want : {ViolationKind::bad_states, ViolationKind::dangling_parent, ViolationKind::bad_row_count,
                    ViolationKind::bad_probability, ViolationKind::bad_row_length, ViolationKind::duplicate_id,
                    ViolationKind::unknown_threshold_node, ViolationKind::bad_threshold_states}) {
    CHECK(std::find(k.begin(), k.end(), want) != k.end());
  }
}

TEST_CASE("duplicate parent is flagged") {
  BayesNet net = two_node_net();
  net.nodes[1].cpt.parent_order = {"A", "A"};
  net.nodes[1].cpt.rows = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
  const auto k = kinds(validate_network(net));
  CHECK(std::find(k.begin(), k.end(), ViolationKind::duplicate_parent) != k.end());
}

TEST_CASE("topological order examples") {
  BayesNet chain;
  chain.nodes.push_back(make_node("C", {"c0", "c1"}, {"B"}, {{0.5, 0.5}, {0.5, 0.5}}));
  chain.nodes.push_back(make_node("A", {"a0", "a1"}, {}, {{0.5, 0.5}}));
  chain.nodes.push_back(make_node("B", {"b0", "b1"}, {"A"}, {{0.5, 0.5}, {0.5, 0.5}}));
  CHECK(topological_order(chain) == std::vector<std::string>{"A", "B", "C"});

  BayesNet indep;
  indep.nodes.push_back(make_node("X", {"x0", "x1"}, {}, {{0.5, 0.5}}));
  indep.nodes.push_back(make_node("Y", {"y0", "y1"}, {}, {{0.5, 0.5}}));
  CHECK(topological_order(indep) == std::vector<std::string>{"X", "Y"});

  BayesNet diamond;
  const std::vector<std::vector<double>> two = {{0.5, 0.5}, {0.5, 0.5}};
  diamond.nodes.push_back(make_node("A", {"0", "1"}, {}, {{0.5, 0.5}}));
  diamond.nodes.push_back(make_node("B", {"0", "1"}, {"A"}, two));
  diamond.nodes.push_back(make_node("C", {"0", "1"}, {"A"}, two));
  diamond.nodes.push_back(make_node("D", {"0", "1"}, {"B", "C"}, {{1, 0}, {1, 0}, {0, 1}, {0, 1}}));
  CHECK(topological_order(diamond) == std::vector<std::string>{"A", "B", "C", "D"});
}

TEST_CASE("empty network is valid") {
  BayesNet net;
  CHECK(validate_network(net).ok());
  CHECK(topological_order(net).empty());
  const auto loaded = load_network(R"({"name":"e","version":"0","threshold_statement":"","nodes":[],"threshold_nodes":[]})");
  CHECK(loaded.nodes.empty());
}

TEST_CASE("unknown field is a parse error naming it") {
  const std::string text =
      R"({"name":"x","version":"1","threshold_statement":"","nodes":[],"threshold_nodes":[],"colour":"red"})";
  try {
    parse_network(text);
    FAIL("expected parse_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
  CHECK(code_of([] { parse_network("{not json"); }) == ErrorCode::parse_error);
}

TEST_CASE("small normalization drift is renormalized with a warning") {
  BayesNet net = two_node_net();
  std::string text = save_network(net);
  const auto pos = text.find("0.90000000000000002");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 19, "0.9000001");
  std::vector<std::string> warnings;
  const BayesNet loaded = load_network(text, &warnings);
  CHECK(warnings.size() == 1);
  CHECK(loaded.nodes[1].cpt.rows[0][0] + loaded.nodes[1].cpt.rows[0][1] == doctest::Approx(1.0).epsilon(1e-15));

  text = save_network(net);
  text.replace(text.find("0.90000000000000002"), 19, "0.91");
  CHECK(code_of([&] { load_network(text); }) == ErrorCode::validation_failed);
}

TEST_CASE("save-load-save is byte-identical and preserves doubles") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const BayesNet net = testing::random_net(rng);
    const std::string a = save_network(net);
    const BayesNet back = load_network(a);
    CHECK(back == net);
    CHECK(save_network(back) == a);
  }
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(0.54) == "0.54000000000000004");
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("row helpers follow last-parent-fastest layout") {
  BayesNet net;
  net.nodes.push_back(make_node("P", {"p0", "p1"}, {}, {{0.5, 0.5}}));
  net.nodes.push_back(make_node("Q", {"q0", "q1", "q2"}, {}, {{0.2, 0.3, 0.5}}));
  std::vector<std::vector<double>> rows(6, {0.5, 0.5});
  net.nodes.push_back(make_node("C", {"c0", "c1"}, {"P", "Q"}, rows));
  const NodeDef& c = net.node("C");
  CHECK(expected_row_count(net, c) == 6);
  CHECK(row_index_for(net, c, {{"P", "p1"}, {"Q", "q0"}}) == 3);
  CHECK(row_config(net, c, 5) == std::vector<std::string>{"p1", "q2"});
  CHECK(code_of([&] { row_index_for(net, c, {{"P", "p1"}}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { row_index_for(net, c, {{"P", "p9"}, {"Q", "q0"}}); }) == ErrorCode::unknown_state);
}

TEST_CASE("valid random nets validate; bumping any one entry breaks them") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const BayesNet net = testing::random_net(rng, {.max_nodes = 6, .max_states = 3, .max_parents = 2});
    REQUIRE(validate_network(net).ok());
    for (std::size_t n = 0; n < net.nodes.size(); ++n) {
      for (std::size_t r = 0; r < net.nodes[n].cpt.rows.size(); ++r) {
        for (std::size_t s = 0; s < net.nodes[n].states.size(); ++s) {
          BayesNet bad = net;
          bad.nodes[n].cpt.rows[r][s] += 0.1;
          CHECK_FALSE(validate_network(bad).ok());
        }
      }
    }
  }
}

TEST_CASE("topological order covers every node and respects every edge") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 100; ++t) {
    const BayesNet net = testing::random_net(rng);
    const auto order = topological_order(net);
    REQUIRE(order.size() == net.nodes.size());
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    CHECK(pos.size() == net.nodes.size());
    for (const auto& node : net.nodes) {
      for (const auto& p : node.parents()) CHECK(pos.at(p) < pos.at(node.id));
    }
  }
}

}  // TEST_SUITE
