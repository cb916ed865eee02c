// Acceptance run: one PASS/FAIL line per headline criterion; exits non-zero
// if any fails.
//   acceptance --cli <riskbn binary> --models <models dir>
#include <httplib.h>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "riskbn/analysis.hpp"
#include "riskbn/elicitation.hpp"
#include "riskbn/inference.hpp"
#include "riskbn/learning.hpp"
#include "riskbn/network_io.hpp"
#include "riskbn/phishing_model.hpp"
#include "riskbn/service.hpp"
#include "riskbn/validity.hpp"
#include "test_nets.hpp"

using namespace riskbn;
using riskbn::testing::RandomNetOptions;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

std::string error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return std::string(to_string(e.code()));
  }
  return "";
}

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  RandomNetOptions opt;
  opt.max_nodes = 12;
  opt.max_states = 4;
  double worst = 0.0;
  std::size_t sets = 0, mismatched_errors = 0, zero_sets = 0;
  for (int n = 0; n < 200; ++n) {
    const BayesNet net = riskbn::testing::random_net(rng, opt);
    const CompiledNet cn(net);
    for (int e = 0; e < 100; ++e) {
      const EvidenceSet ev = riskbn::testing::random_evidence(rng, net);
      ++sets;
      MarginalSet ve, en;
      const std::string ve_err = error_code_of([&] { ve = posterior_marginals(cn, ev); });
      const std::string en_err = error_code_of([&] { en = enumerate_joint(net, ev); });
      if (ve_err != en_err) {
        ++mismatched_errors;
        continue;
      }
      if (!ve_err.empty()) {
        ++zero_sets;
        continue;
      }
      for (std::size_t i = 0; i < ve.node_ids.size(); ++i) {
        const auto& a = ve.marginals[i];
        const auto& b = en.at(ve.node_ids[i]);
        for (std::size_t s = 0; s < a.size(); ++s) worst = std::max(worst, std::abs(a[s] - b[s]));
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && mismatched_errors == 0 && secs < 60.0,
          "200 nets x 100 evidence sets (" + std::to_string(sets - zero_sets) + " scored, " +
              std::to_string(zero_sets) + " zero-probability on both sides), max diff " + fmt(worst) +
              ", error mismatches " + std::to_string(mismatched_errors) + ", " + fmt(secs) + " s"};
}

Outcome two_node() {
  const BayesNet net = riskbn::testing::two_node_net();
  EvidenceSet ev;
  ev.hard["B"] = "b0";
  const double pb = prior_marginals(net).at("B")[0];
  const double pa = posterior_marginals(net, ev).at("A")[1];
  const double pb_en = enumerate_joint(net, {}).at("B")[0];
  const double pa_en = enumerate_joint(net, ev).at("A")[1];
  const double err = std::max({std::abs(pb - 0.42), std::abs(pa - 4.0 / 7.0), std::abs(pb_en - 0.42),
                               std::abs(pa_en - 4.0 / 7.0)});
  return {err <= 1e-12, "P(B=b0)=" + format_number(pb) + ", P(A=a1|B=b0)=" + format_number(pa) +
                            ", max error " + fmt(err)};
}

Outcome em_monotonicity() {
  const BayesNet net = build_bundled_model();
  double worst_drop = 0.0;
  int iterations = 0;
  for (int run = 0; run < 50; ++run) {
    std::mt19937_64 rng(1000 + run);
    const CaseTable data = riskbn::testing::forward_sample(net, 1000, rng, 0.3);
    EmConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(run);
    if (run % 2 == 1) {
      for (const auto& node : net.nodes) cfg.priors[node.id] = uniform_prior(net, node.id, 1.0);
    }
    const EmResult r = em_fit(net, data, cfg);
    iterations += r.iterations;
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
      worst_drop = std::max(worst_drop, r.objective_trace[k - 1] - r.objective_trace[k]);
    }
  }
  return {worst_drop <= 1e-9, "50 runs, 30% missing, " + std::to_string(iterations) +
                                  " iterations total, largest objective drop " + fmt(worst_drop)};
}

Outcome em_recovery() {
  const auto t0 = Clock::now();
  const BayesNet net = build_bundled_model();
  // Seed fixed up front; not tuned.
  std::mt19937_64 rng(1);
  const CaseTable data = riskbn::testing::forward_sample(net, 10000, rng, 0.0);
  EmConfig cfg;
  for (const auto& node : net.nodes) cfg.priors[node.id] = uniform_prior(net, node.id, 1.0);
  const EmResult r = em_fit(net, data, cfg);
  double worst = 0.0;
  std::string where;
  for (const auto& node : net.nodes) {
    const auto& learned = r.net.node(node.id).cpt.rows;
    for (std::size_t row = 0; row < node.cpt.rows.size(); ++row) {
      double l1 = 0.0;
      for (std::size_t s = 0; s < node.states.size(); ++s) l1 += std::abs(learned[row][s] - node.cpt.rows[row][s]);
      if (l1 > worst) {
        worst = l1;
        where = node.id + " row " + std::to_string(row);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 0.05 && secs < 120.0,
          "10000 cases, worst row L1 " + fmt(worst) + " (" + where + "), " + fmt(secs) + " s"};
}

Outcome pooling() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> logw(std::log(0.01), std::log(100.0));
  double worst_scale = 0.0, worst_perm = 0.0, worst_hull = 0.0, worst_combo = 0.0;
  int identity_failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    std::vector<ExpertJudgment> js;
    for (std::size_t i = 0; i < m; ++i) {
      ExpertJudgment j;
      j.expert_id = "e" + std::to_string(i);
      j.node_id = "X";
      j.dist = riskbn::testing::random_distribution(rng, k, 0.2);
      j.weight = std::exp(logw(rng));
      js.push_back(j);
    }
    const auto pooled = pool_judgments(js).dist;

    const std::vector<ExpertJudgment> single{js[0]};
    if (pool_judgments(single).dist != js[0].dist) ++identity_failures;

    auto scaled = js;
    const double c = std::exp(logw(rng));
    for (auto& j : scaled) j.weight *= c;
    auto perm = js;
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto ps = pool_judgments(scaled).dist;
    const auto pp = pool_judgments(perm).dist;

    double W = 0.0;
    for (const auto& j : js) W += j.weight;
    for (std::size_t s = 0; s < k; ++s) {
      worst_scale = std::max(worst_scale, std::abs(ps[s] - pooled[s]));
      worst_perm = std::max(worst_perm, std::abs(pp[s] - pooled[s]));
      double lo = 1.0, hi = 0.0, combo = 0.0;
      for (const auto& j : js) {
        lo = std::min(lo, j.dist[s]);
        hi = std::max(hi, j.dist[s]);
        combo += j.weight / W * j.dist[s];
      }
      worst_hull = std::max({worst_hull, lo - pooled[s], pooled[s] - hi});
      worst_combo = std::max(worst_combo, std::abs(combo - pooled[s]));
    }
  }
  const bool ok = identity_failures == 0 && worst_scale <= 1e-12 && worst_perm <= 1e-12 && worst_hull <= 1e-15 &&
                  worst_combo <= 1e-12;
  return {ok, "1000 sets: identity failures " + std::to_string(identity_failures) + ", rescale diff " +
                  fmt(worst_scale) + ", permutation diff " + fmt(worst_perm) + ", hull excess " +
                  fmt(std::max(worst_hull, 0.0)) + ", weights diff " + fmt(worst_combo)};
}

// Independent co-variation for the brute-force check.
std::vector<double> move_parameter(const std::vector<double>& row, std::size_t s, double v) {
  std::vector<double> out(row.size());
  double others = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j != s) others += row[j];
  }
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == s) {
      out[j] = v;
    } else if (others > 0.0) {
      out[j] = row[j] / others * (1.0 - v);
    } else {
      out[j] = (1.0 - v) / static_cast<double>(row.size() - 1);
    }
  }
  return out;
}

Outcome sensitivity_check() {
  std::mt19937_64 rng(303);
  RandomNetOptions opt;
  opt.max_nodes = 8;
  opt.max_states = 3;
  double worst = 0.0;
  std::size_t entries = 0, order_violations = 0, count_mismatch = 0;
  for (int n = 0; n < 100; ++n) {
    const BayesNet net = riskbn::testing::random_net(rng, opt);
    const NodeDef& target =
        net.nodes[std::uniform_int_distribution<std::size_t>(0, net.nodes.size() - 1)(rng)];
    const std::string tstate =
        target.states[std::uniform_int_distribution<std::size_t>(0, target.states.size() - 1)(rng)];
    const double delta = std::uniform_real_distribution<double>(0.02, 0.3)(rng);
    std::vector<std::string> sources;
    for (const auto& node : net.nodes) sources.push_back(node.id);

    const SensitivityReport rep = sensitivity(net, target.id, tstate, sources, delta);
    std::size_t params = 0;
    for (const auto& node : net.nodes) params += node.cpt.rows.size() * node.states.size();
    if (rep.entries.size() != params) ++count_mismatch;

    const std::size_t ts = *target.state_index(tstate);
    auto prob = [&](const BayesNet& b) { return enumerate_joint(b, {}).at(target.id)[ts]; };
    worst = std::max(worst, std::abs(prob(net) - rep.baseline));

    std::vector<double> brute;
    for (const auto& e : rep.entries) {
      const NodeDef& src = net.node(e.source);
      const std::size_t s = *src.state_index(e.state);
      const auto& row = src.cpt.rows[e.row];
      BayesNet lo = net, hi = net;
      lo.node(e.source).cpt.rows[e.row] = move_parameter(row, s, std::max(0.0, row[s] - delta));
      hi.node(e.source).cpt.rows[e.row] = move_parameter(row, s, std::min(1.0, row[s] + delta));
      const double plo = prob(lo), phi = prob(hi);
      worst = std::max({worst, std::abs(plo - e.low), std::abs(phi - e.high), std::abs(std::abs(phi - plo) - e.range)});
      brute.push_back(std::abs(phi - plo));
      ++entries;
    }
    // Brute-force sweep in source, row, state order, ranked on the same
    // 1e-10 grid with a stable sort; the reported order must match exactly.
    struct Swept {
      std::string source;
      std::size_t row;
      std::string state;
      long long key;
    };
    std::vector<Swept> sweep;
    for (const auto& src : sources) {
      const NodeDef& node = net.node(src);
      for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
        for (std::size_t s = 0; s < node.states.size(); ++s) {
          const auto& row = node.cpt.rows[r];
          BayesNet lo = net, hi = net;
          lo.node(src).cpt.rows[r] = move_parameter(row, s, std::max(0.0, row[s] - delta));
          hi.node(src).cpt.rows[r] = move_parameter(row, s, std::min(1.0, row[s] + delta));
          sweep.push_back({src, r, node.states[s], std::llround(std::abs(prob(hi) - prob(lo)) * 1e10)});
        }
      }
    }
    std::stable_sort(sweep.begin(), sweep.end(), [](const Swept& a, const Swept& b) { return a.key > b.key; });
    for (std::size_t i = 0; i < std::min(sweep.size(), rep.entries.size()); ++i) {
      const auto& e = rep.entries[i];
      if (sweep[i].source != e.source || sweep[i].row != e.row || sweep[i].state != e.state) {
        ++order_violations;
        break;
      }
    }
  }
  return {worst <= 1e-9 && order_violations == 0 && count_mismatch == 0,
          "100 nets (<=8 nodes), " + std::to_string(entries) + " parameters re-verified, max diff " + fmt(worst) +
              ", nets with a different order " + std::to_string(order_violations) + ", missing-entry nets " +
              std::to_string(count_mismatch)};
}

Outcome bundled_anchors() {
  const BayesNet net = build_bundled_model();
  const auto& rows = net.node("employee_opens_malicious_email").cpt.rows;
  const bool anchors = rows[6][1] == 0.54 && rows[0][1] == 0.12 && rows[7][0] == 0.9725;
  std::size_t paper_tags = 0;
  for (const auto& node : net.nodes) {
    for (const auto& p : node.provenance) paper_tags += p.tag == ProvenanceTag::paper;
  }
  const auto audit = monotone_audit(net, bundled_adverse_direction());
  double base = -1, mass = -1;
  for (const auto& s : bundled_scenarios()) {
    const double p = assess_threshold(net, s.evidence, "ttp_shift_threshold").posterior[3];
    if (s.name == "baseline") base = p;
    if (s.name == "mass-spear") mass = p;
  }
  return {anchors && paper_tags == 3 && audit.empty() && mass > base,
          std::string("anchors ") + (anchors ? "exact" : "WRONG") + ", anchored rows " + std::to_string(paper_tags) +
              ", audit failures " + std::to_string(audit.size()) + ", P(Intolerable) mass-spear " +
              format_number(mass) + " vs baseline " + format_number(base)};
}

Outcome round_trip() {
  std::size_t failures = 0;
  auto check = [&](const BayesNet& net) {
    const std::string a = save_network(net);
    if (save_network(load_network(a)) != a) ++failures;
  };
  check(build_bundled_model());
  std::mt19937_64 rng(404);
  for (int i = 0; i < 100; ++i) check(riskbn::testing::random_net(rng));
  return {failures == 0, "bundled + 100 random nets, " + std::to_string(failures) + " mismatches"};
}

Outcome validity_suite() {
  std::mt19937_64 rng(505);
  std::size_t disagreements = 0, consistent = 0, inconsistent = 0;
  for (int t = 0; t < 500; ++t) {
    BayesNet net = riskbn::testing::random_net(rng);
    if (t % 2 == 0) {
      // Layers non-decreasing along a topological order, so some nets pass.
      std::vector<std::size_t> ranks(net.nodes.size());
      for (auto& r : ranks) r = std::uniform_int_distribution<std::size_t>(0, kLayerOrder.size() - 1)(rng);
      std::sort(ranks.begin(), ranks.end());
      const auto order = topological_order(net);
      for (std::size_t i = 0; i < order.size(); ++i) net.node(order[i]).layer = std::string(kLayerOrder[ranks[i]]);
      if (t % 4 == 0 && net.nodes.size() > 1) {
        std::swap(net.node(order.front()).layer, net.node(order.back()).layer);
      }
    }
    const std::size_t n = net.nodes.size();
    std::map<std::string, std::size_t> pos, rank;
    for (std::size_t i = 0; i < n; ++i) {
      pos[net.nodes[i].id] = i;
      rank[net.nodes[i].id] = *layer_rank(net.nodes[i].layer);
    }
    // Brute force: transitive closure, then every ordered pair.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& node : net.nodes) {
      for (const auto& p : node.parents()) reach[pos[p]][pos[node.id]] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    bool order_ok = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][j] && rank[net.nodes[i].id] > rank[net.nodes[j].id]) order_ok = false;
    std::vector<Edge> expected;
    for (const auto& node : net.nodes) {
      for (const auto& p : node.parents()) {
        if (rank[node.id] < rank[p]) expected.push_back({p, node.id});
      }
    }
    const auto got = check_nomological(net);
    if (got != expected || got.empty() != order_ok) ++disagreements;
    (order_ok ? consistent : inconsistent)++;
  }

  // Spearman against average ranks fed to Pearson.
  auto avg_ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double x : v) {
        less += x < v[i];
        equal += x == v[i];
      }
      r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
  };
  auto pearson = [](const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    return (saa == 0 || sbb == 0) ? 0.0 : sab / std::sqrt(saa * sbb);
  };
  double worst = 0.0;
  std::size_t tied = 0;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 40)(rng);
    const int levels = std::uniform_int_distribution<int>(2, 12)(rng);
    std::uniform_int_distribution<int> val(0, levels - 1);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = val(rng) * 0.1;
    for (auto& v : y) v = val(rng) + 0.5 * val(rng);
    const auto rx = avg_ranks(x);
    if (std::set<double>(x.begin(), x.end()).size() < n) ++tied;
    worst = std::max(worst, std::abs(spearman(x, y) - pearson(rx, avg_ranks(y))));
  }
  return {disagreements == 0 && worst <= 1e-12,
          "500 layered DAGs (" + std::to_string(consistent) + " consistent, " + std::to_string(inconsistent) +
              " not), disagreements " + std::to_string(disagreements) + "; 2000 Spearman cases (" +
              std::to_string(tied) + " with ties), max diff " + fmt(worst)};
}

// ---------------------------------------------------------------------------

struct Canned {
  std::string name;
  std::vector<std::string> cli;
  std::string path;
  std::string body;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string run_binary(const std::string& bin, const std::vector<std::string>& args, int& status) {
  std::string cmd = shell_quote(bin) + " --format json";
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  status = pclose(pipe);
  return out;
}

Outcome cli_api_parity(const std::string& cli, const std::string& models) {
  namespace fs = std::filesystem;
  const std::string net_path = models + "/phishing.json";
  const std::string scen_path = models + "/phishing_scenarios.json";
  const fs::path tmp = fs::temp_directory_path() / "riskbn_acceptance";
  fs::create_directories(tmp);
  const BayesNet net = load_network_file(net_path);

  const std::string odd_scen = (tmp / "odd.json").string();
  const std::string odd_body =
      R"([{"name":"impossible","description":"contradictory findings","evidence":{"hard":{"ttp_shift_threshold":"Low","phishing_volume":"extreme","employee_opens_malicious_email":"yes","attack_automation":"automated"}}},)"
      R"({"name":"soft-volume","evidence":{"soft":{"phishing_volume":[0.25,0.5,0.75,1]}}}])";
  write_text_file(odd_scen, "{\"scenarios\":" + odd_body + "}");

  const std::vector<double> proxy{0.1, 0.4, 0.05, 0.3};
  const std::string proxy_path = (tmp / "proxy.txt").string();
  write_text_file(proxy_path, "0.1 0.4 0.05 0.3\n");

  std::mt19937_64 rng(606);
  const std::string holdout = write_case_csv(riskbn::testing::forward_sample(net, 50, rng, 0.2));
  const std::string holdout_path = (tmp / "holdout.csv").string();
  write_text_file(holdout_path, holdout);

  const std::string scen_text = read_text_file(scen_path);
  const Json scen_array = Json::parse(scen_text)["scenarios"];

  auto body = [](const Json& j) { return j.dump(); };
  std::vector<Canned> reqs = {
      {"infer prior", {"infer", net_path}, "/api/query", "{}"},
      {"infer hard", {"infer", net_path, "-e", "ai_tool_availability=widespread"}, "/api/query",
       R"({"evidence":{"hard":{"ai_tool_availability":"widespread"}}})"},
      {"infer two findings",
       {"infer", net_path, "-e", "ai_tool_availability=widespread", "-e", "technical_email_filtering=weak"},
       "/api/query",
       R"({"evidence":{"hard":{"ai_tool_availability":"widespread","technical_email_filtering":"weak"}}})"},
      {"infer soft", {"infer", net_path, "--soft", "phishing_volume=0.25,0.5,0.75,1"}, "/api/query",
       R"({"evidence":{"soft":{"phishing_volume":[0.25,0.5,0.75,1]}}})"},
      {"infer query subset",
       {"infer", net_path, "-e", "attack_automation=automated", "--query",
        "ttp_shift_threshold,employee_opens_malicious_email"},
       "/api/query",
       R"({"evidence":{"hard":{"attack_automation":"automated"}},"query":["ttp_shift_threshold","employee_opens_malicious_email"]})"},
      {"infer alarm rule", {"infer", net_path, "--threshold", "ttp_shift_threshold", "--alarm", "High:0.3"},
       "/api/query", R"({"threshold":"ttp_shift_threshold","alarm":{"state":"High","cutoff":0.3}})"},
      {"infer threshold observed", {"infer", net_path, "-e", "ttp_shift_threshold=Intolerable"}, "/api/query",
       R"({"evidence":{"hard":{"ttp_shift_threshold":"Intolerable"}}})"},
      {"infer outcome observed",
       {"infer", net_path, "-e", "employee_opens_malicious_email=yes", "--soft", "ai_linguistic_mastery=0.2,1"},
       "/api/query",
       R"({"evidence":{"hard":{"employee_opens_malicious_email":"yes"},"soft":{"ai_linguistic_mastery":[0.2,1]}}})"},
      {"sensitivity default", {"sensitivity", net_path, "--target", "ttp_shift_threshold=Intolerable"},
       "/api/sensitivity", R"({"target":{"node":"ttp_shift_threshold","state":"Intolerable"}})"},
      {"sensitivity delta",
       {"sensitivity", net_path, "--target", "ttp_shift_threshold=Intolerable", "--delta", "0.05"},
       "/api/sensitivity", R"({"target":{"node":"ttp_shift_threshold","state":"Intolerable"},"delta":0.05})"},
      {"sensitivity sources",
       {"sensitivity", net_path, "--target", "ttp_shift_threshold=High", "--sources",
        "employee_opens_malicious_email,phishing_volume"},
       "/api/sensitivity",
       R"({"target":{"node":"ttp_shift_threshold","state":"High"},"sources":["employee_opens_malicious_email","phishing_volume"]})"},
      {"sensitivity outcome", {"sensitivity", net_path, "--target", "employee_opens_malicious_email=yes"},
       "/api/sensitivity", R"({"target":{"node":"employee_opens_malicious_email","state":"yes"}})"},
      {"diagnose outcome",
       {"diagnose", net_path, "-e", "employee_opens_malicious_email=yes", "--rank",
        "ai_linguistic_mastery,targeting_personalization"},
       "/api/diagnose",
       R"({"outcome_evidence":{"hard":{"employee_opens_malicious_email":"yes"}},"rank_over":["ai_linguistic_mastery","targeting_personalization"]})"},
      {"diagnose threshold",
       {"diagnose", net_path, "-e", "ttp_shift_threshold=Intolerable", "--rank",
        "ai_tool_availability,ai_linguistic_mastery,technical_email_filtering,attack_automation"},
       "/api/diagnose",
       R"({"outcome_evidence":{"hard":{"ttp_shift_threshold":"Intolerable"}},"rank_over":["ai_tool_availability","ai_linguistic_mastery","technical_email_filtering","attack_automation"]})"},
      {"diagnose soft",
       {"diagnose", net_path, "--soft", "phishing_volume=0.1,0.2,0.6,1", "--rank", "ai_tool_availability"},
       "/api/diagnose",
       R"({"outcome_evidence":{"soft":{"phishing_volume":[0.1,0.2,0.6,1]}},"rank_over":["ai_tool_availability"]})"},
      {"scenarios bundled", {"scenario", net_path, scen_path}, "/api/scenarios/run", scen_text},
      {"scenarios alarm", {"scenario", net_path, scen_path, "--alarm", "High:0.2"}, "/api/scenarios/run",
       body(Json{{"scenarios", scen_array}, {"alarm", {{"state", "High"}, {"cutoff", 0.2}}}})},
      {"scenarios inconsistent", {"scenario", net_path, odd_scen}, "/api/scenarios/run",
       "{\"scenarios\":" + odd_body + "}"},
      {"validity plain", {"validity", net_path}, "/api/validate", "{}"},
      {"validity concurrent", {"validity", net_path, "--scenarios", scen_path, "--proxy", proxy_path},
       "/api/validate", body(Json{{"scenarios", scen_array}, {"proxy_scores", proxy}})},
      {"validity predictive", {"validity", net_path, "--holdout", holdout_path, "--cutoff", "0.8"}, "/api/validate",
       body(Json{{"holdout_csv", holdout}, {"cutoff", 0.8}})},
  };

  Service service(net);
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  if (port <= 0) return {false, "could not bind a local port"};
  std::thread th([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(60);

  std::size_t same = 0;
  std::string first_diff;
  for (const auto& r : reqs) {
    int status = 0;
    const std::string out = run_binary(cli, r.cli, status);
    auto res = client.Post(r.path, r.body, "application/json");
    const bool ok = status == 0 && res && res->status == 200 && res->body == out && !out.empty();
    if (ok) {
      ++same;
    } else if (first_diff.empty()) {
      first_diff = r.name + " (exit " + std::to_string(status) + ", http " +
                   (res ? std::to_string(res->status) : std::string("none")) + ")";
    }
  }
  server.stop();
  th.join();
  fs::remove_all(tmp);
  return {same == reqs.size(), std::to_string(same) + "/" + std::to_string(reqs.size()) +
                                   " requests byte-identical" + (first_diff.empty() ? "" : "; first mismatch " + first_diff)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string cli_path, models_dir;
  app.add_option("--cli", cli_path, "riskbn binary")->required();
  app.add_option("--models", models_dir, "models directory")->required();
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"oracle-equivalence", oracle_equivalence},
      {"two-node-analytic", two_node},
      {"em-monotonicity", em_monotonicity},
      {"em-recovery", em_recovery},
      {"pooling-identities", pooling},
      {"sensitivity-soundness", sensitivity_check},
      {"bundled-anchors", bundled_anchors},
      {"round-trip", round_trip},
      {"validity-suite", validity_suite},
      {"cli-api-parity", [&] { return cli_api_parity(cli_path, models_dir); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (checks.size() - failed) << "/" << checks.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
