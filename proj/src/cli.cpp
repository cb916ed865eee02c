#include "riskbn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "riskbn/api.hpp"
#include "riskbn/network_io.hpp"
#include "riskbn/service.hpp"

namespace riskbn {

namespace {

struct Options {
  std::string format = "json";
  std::string net_path;
  std::string second_path;
  std::vector<std::string> evidence;
  std::vector<std::string> soft;
  std::vector<std::string> query;
  std::vector<std::string> rank;
  std::vector<std::string> sources;
  std::vector<std::string> config;
  std::string node;
  std::string target;
  std::string threshold;
  std::string alarm;
  std::string data;
  std::string priors;
  std::string out_path;
  std::string scenarios;
  std::string proxy;
  std::string holdout;
  std::string host = kDefaultHost;
  std::string static_dir;
  double delta = 0.1;
  double tol = 1e-6;
  double cutoff = kDefaultConcurrentCutoff;
  int max_iter = 200;
  int restarts = 0;
  int port = kDefaultPort;
  std::uint64_t seed = 0;
};

EvidenceSet build_evidence(const std::vector<std::string>& hard, const std::vector<std::string>& soft) {
  EvidenceSet ev;
  for (const auto& item : hard) {
    auto [node, state] = api::split_assignment(item);
    if (!ev.hard.emplace(node, state).second) {
      throw Error(ErrorCode::invalid_evidence, "node '" + node + "' is given more than once");
    }
  }
  for (const auto& item : soft) {
    auto [node, weights] = api::split_assignment(item);
    if (ev.hard.count(node) || !ev.soft.emplace(node, api::parse_number_list(weights)).second) {
      throw Error(ErrorCode::invalid_evidence, "node '" + node + "' is given more than once");
    }
  }
  return ev;
}

std::map<std::string, std::string> build_config(const std::vector<std::string>& items) {
  std::map<std::string, std::string> cfg;
  for (const auto& item : items) {
    auto [k, v] = api::split_assignment(item);
    if (!cfg.emplace(k, v).second) throw Error(ErrorCode::invalid_argument, "parent '" + k + "' is given twice");
  }
  return cfg;
}

void emit(std::ostream& out, const Options& o, const Json& response, const std::string& text) {
  if (o.format == "json") {
    out << to_canonical_json(response);
  } else {
    out << text;
  }
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const ParsedNetwork parsed = parse_network(read_text_file(o.net_path));
  const ValidationReport report = validate_network(parsed.net);
  const Json response = api::validation_response(report, parsed.warnings);
  emit(out, o, response, api::render_text_validation(response));
  if (!report.ok()) {
    err << "error: validation_failed: " << ValidationFailure(report).what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_infer(const Options& o, std::ostream& out) {
  const BayesNet net = load_network_file(o.net_path);
  api::QueryRequest req;
  req.evidence = build_evidence(o.evidence, o.soft);
  if (!o.query.empty()) req.query = o.query;
  if (!o.threshold.empty()) req.threshold = o.threshold;
  if (!o.alarm.empty()) req.alarm = parse_alarm_rule(o.alarm);
  const Json response = api::query_response(net, req);
  emit(out, o, response, o.format == "text" ? api::render_text_query(net, response) : "");
  return 0;
}

int cmd_pool(const Options& o, std::ostream& out) {
  const auto files = parse_elicitation(read_text_file(o.net_path));
  const auto cfg = build_config(o.config);
  std::vector<ExpertJudgment> selected;
  for (const auto& f : files) {
    for (const auto& j : f.judgments) {
      if (j.node_id == o.node && j.parent_config == cfg) selected.push_back(j);
    }
  }
  if (selected.empty()) {
    throw Error(ErrorCode::invalid_argument, "no judgments for node '" + o.node + "' with that parent configuration");
  }
  const PooledJudgment pooled = pool_judgments(selected);
  const Json response = api::pool_response(o.node, cfg, selected.size(), pooled);
  emit(out, o, response, api::render_text_pool(response));
  return 0;
}

int cmd_learn(const Options& o, std::ostream& out) {
  const BayesNet net = load_network_file(o.net_path);
  const CaseTable data = parse_case_csv(read_text_file(o.data));
  EmConfig cfg;
  cfg.max_iterations = o.max_iter;
  cfg.log_likelihood_tolerance = o.tol;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  if (!o.priors.empty()) {
    const auto files = parse_elicitation(read_text_file(o.priors));
    cfg.priors = priors_from_elicitation(net, files);
  }
  const EmResult result = em_fit(net, data, cfg);
  if (!o.out_path.empty()) write_text_file(o.out_path, save_network(result.net));
  const Json response = api::learn_response(result, o.out_path.empty());
  emit(out, o, response, api::render_text_learn(response));
  return 0;
}

int cmd_sensitivity(const Options& o, std::ostream& out) {
  const BayesNet net = load_network_file(o.net_path);
  api::SensitivityRequest req;
  std::tie(req.target_node, req.target_state) = api::split_assignment(o.target);
  req.delta = o.delta;
  if (!o.sources.empty()) req.sources = o.sources;
  const Json response = api::sensitivity_response(net, req);
  emit(out, o, response, api::render_text_sensitivity(response));
  return 0;
}

int cmd_diagnose(const Options& o, std::ostream& out) {
  const BayesNet net = load_network_file(o.net_path);
  api::DiagnoseRequest req;
  req.outcome_evidence = build_evidence(o.evidence, o.soft);
  req.rank_over = o.rank;
  const Json response = api::diagnose_response(net, req);
  emit(out, o, response, api::render_text_diagnose(response));
  return 0;
}

int cmd_scenario(const Options& o, std::ostream& out) {
  const BayesNet net = load_network_file(o.net_path);
  api::ScenarioRunRequest req;
  req.scenarios = parse_scenarios(read_text_file(o.second_path));
  if (!o.threshold.empty()) req.threshold = o.threshold;
  if (!o.alarm.empty()) req.alarm = parse_alarm_rule(o.alarm);
  const Json response = api::scenario_response(net, req);
  emit(out, o, response, api::render_text_scenarios(response));
  return 0;
}

int cmd_validity(const Options& o, std::ostream& out) {
  const BayesNet net = load_network_file(o.net_path);
  ValidityInputs in;
  if (!o.scenarios.empty()) in.scenarios = parse_scenarios(read_text_file(o.scenarios));
  if (!o.proxy.empty()) in.proxy_scores = api::parse_proxy_scores(read_text_file(o.proxy));
  if (!o.holdout.empty()) in.holdout = parse_case_csv(read_text_file(o.holdout));
  if (!o.target.empty()) in.predictive_target = o.target;
  in.concurrent_cutoff = o.cutoff;
  const Json response = api::validity_response(net, in);
  emit(out, o, response, api::render_text_validity(response));
  return 0;
}

int cmd_serve(const Options& o, std::ostream& err) {
  Service service(load_network_file(o.net_path));
  HttpServer server(service);
  if (!o.static_dir.empty() && !server.mount_static(o.static_dir)) {
    throw Error(ErrorCode::invalid_argument, "cannot serve static files from '" + o.static_dir + "'");
  }
  const int port = server.bind(o.host, o.port);
  if (port < 0) {
    throw Error(ErrorCode::invalid_argument, "cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
  err << "listening on http://" << o.host << ":" << port << "\n" << std::flush;
  server.listen();
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  if (const char* env = std::getenv("RISKBN_FORMAT"); env && *env) o.format = env;

  CLI::App app{"Bayesian-network risk modelling for AI-enabled threat thresholds", "riskbn"};
  app.require_subcommand(1);
  app.add_option("--format", o.format, "Output format: json or text")->check(CLI::IsMember({"json", "text"}));

  auto* validate = app.add_subcommand("validate", "Check a network file");
  validate->add_option("net", o.net_path, "Network file")->required();

  auto* infer = app.add_subcommand("infer", "Posterior marginals and threshold assessment");
  infer->add_option("net", o.net_path, "Network file")->required();
  infer->add_option("--evidence,-e", o.evidence, "Hard evidence node=state");
  infer->add_option("--soft", o.soft, "Soft evidence node=w1,w2,...");
  infer->add_option("--query,-q", o.query, "Nodes to report")->delimiter(',');
  infer->add_option("--threshold", o.threshold, "Threshold node to assess");
  infer->add_option("--alarm", o.alarm, "Alarm rule state:cutoff");

  auto* pool = app.add_subcommand("pool", "Pool expert judgments for one CPT row");
  pool->add_option("elicitation", o.net_path, "Elicitation file")->required();
  pool->add_option("--node", o.node, "Node id")->required();
  pool->add_option("--config", o.config, "Parent configuration parent=state");

  auto* learn = app.add_subcommand("learn", "MAP-EM parameter learning");
  learn->add_option("net", o.net_path, "Network file")->required();
  learn->add_option("--data", o.data, "Case CSV ('?' marks missing)")->required();
  learn->add_option("--priors", o.priors, "Elicitation file for Dirichlet priors");
  learn->add_option("--max-iter", o.max_iter, "Maximum EM iterations")->check(CLI::PositiveNumber);
  learn->add_option("--tol", o.tol, "Convergence tolerance on the objective")->check(CLI::PositiveNumber);
  learn->add_option("--seed", o.seed, "Seed for restarts");
  learn->add_option("--restarts", o.restarts, "Extra jittered restarts")->check(CLI::NonNegativeNumber);
  learn->add_option("--out", o.out_path, "Write the learned network here");

  auto* sens = app.add_subcommand("sensitivity", "One-way sensitivity (tornado) report");
  sens->add_option("net", o.net_path, "Network file")->required();
  sens->add_option("--target", o.target, "Target node=state")->required();
  sens->add_option("--delta", o.delta, "Perturbation size");
  sens->add_option("--sources", o.sources, "Source nodes (default: roots)")->delimiter(',');

  auto* diag = app.add_subcommand("diagnose", "Rank causes by posterior lift");
  diag->add_option("net", o.net_path, "Network file")->required();
  diag->add_option("--evidence,-e", o.evidence, "Outcome evidence node=state");
  diag->add_option("--soft", o.soft, "Soft outcome evidence node=w1,w2,...");
  diag->add_option("--rank", o.rank, "Nodes to rank")->delimiter(',')->required();

  auto* scen = app.add_subcommand("scenario", "Run a scenario file");
  scen->add_option("net", o.net_path, "Network file")->required();
  scen->add_option("scenarios", o.second_path, "Scenario file")->required();
  scen->add_option("--threshold", o.threshold, "Threshold node (default: first declared)");
  scen->add_option("--alarm", o.alarm, "Alarm rule state:cutoff");

  auto* valid = app.add_subcommand("validity", "Automated validity checks and review checklist");
  valid->add_option("net", o.net_path, "Network file")->required();
  valid->add_option("--scenarios", o.scenarios, "Scenario file for concurrent validity");
  valid->add_option("--proxy", o.proxy, "Proxy risk scores, one per scenario");
  valid->add_option("--holdout", o.holdout, "Held-out case CSV for predictive validity");
  valid->add_option("--target", o.target, "Predicted column (default: threshold node)");
  valid->add_option("--cutoff", o.cutoff, "Rank-correlation cutoff");

  auto* serve = app.add_subcommand("serve", "Run the local HTTP API");
  serve->add_option("net", o.net_path, "Network file")->required();
  serve->add_option("--port", o.port, "Port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--static", o.static_dir, "Directory of static UI files");

  try {
    if (o.format != "json" && o.format != "text") {
      throw CLI::ValidationError("RISKBN_FORMAT", "must be json or text");
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate) return cmd_validate(o, out, err);
    if (*infer) return cmd_infer(o, out);
    if (*pool) return cmd_pool(o, out);
    if (*learn) return cmd_learn(o, out);
    if (*sens) return cmd_sensitivity(o, out);
    if (*diag) return cmd_diagnose(o, out);
    if (*scen) return cmd_scenario(o, out);
    if (*valid) return cmd_validity(o, out);
    return cmd_serve(o, err);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace riskbn
