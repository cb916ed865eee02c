#include "riskbn/api.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "riskbn/inference.hpp"
#include "riskbn/network_io.hpp"

namespace riskbn::api {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::parse_error, (path.empty() ? std::string("/") : path) + ": " + what);
}

void require_object(const Json& body, std::initializer_list<std::string_view> allowed) {
  if (!body.is_object()) fail("", "request body must be a JSON object");
  for (auto it = body.begin(); it != body.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      fail("", "unknown field '" + it.key() + "'");
    }
  }
}

const Json* field(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string string_at(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

double number_at(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::vector<std::string> string_list(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(string_at(v[i], path + "/" + std::to_string(i)));
  return out;
}

AlarmRule alarm_at(const Json& v) {
  if (!v.is_object()) fail("/alarm", "expected {\"state\", \"cutoff\"}");
  AlarmRule rule;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (it.key() == "state") {
      rule.state = string_at(*it, "/alarm/state");
    } else if (it.key() == "cutoff") {
      rule.cutoff = number_at(*it, "/alarm/cutoff");
    } else {
      fail("/alarm", "unknown field '" + it.key() + "'");
    }
  }
  return rule;
}

Json number_array(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Json string_array(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

Json risk_levels() {
  Json out = Json::array();
  for (auto s : kRiskLevels) out.push_back(std::string(s));
  return out;
}

Json alarm_to_json(const AlarmRule& rule) {
  Json out = Json::object();
  out["state"] = rule.state;
  out["cutoff"] = rule.cutoff;
  return out;
}

std::string resolve_threshold(const BayesNet& net, const std::optional<std::string>& requested) {
  if (requested) return *requested;
  return default_threshold_node(net);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string format_evidence_line(const Json& ev) {
  std::string out;
  for (auto it = ev["hard"].begin(); it != ev["hard"].end(); ++it) {
    out += (out.empty() ? "" : "; ") + it.key() + "=" + it->get<std::string>();
  }
  for (auto it = ev["soft"].begin(); it != ev["soft"].end(); ++it) {
    std::string w;
    for (const auto& x : *it) w += (w.empty() ? "" : ",") + format_number(x.get<double>());
    out += (out.empty() ? "" : "; ") + it.key() + "~(" + w + ")";
  }
  return out.empty() ? "(none)" : out;
}

std::string render_assessment(const Json& a) {
  if (a.is_null()) return "";
  std::string out = "\nthreshold " + a["threshold_node"].get<std::string>() + ": alarm " +
                    yes_no(a["alarm"].get<bool>()) + " (rule " + a["alarm_rule"]["state"].get<std::string>() +
                    " >= " + format_number(a["alarm_rule"]["cutoff"].get<double>()) + ")\n";
  std::vector<std::vector<std::string>> rows{{"level", "probability"}};
  for (std::size_t s = 0; s < a["states"].size(); ++s) {
    rows.push_back({a["states"][s].get<std::string>(), fixed6(a["posterior"][s].get<double>())});
  }
  return out + render_table(rows);
}

}  // namespace

Json parse_body(std::string_view text) {
  if (trim(text).empty()) return Json::object();
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("request body is not valid JSON: ") + e.what());
  }
}

std::pair<std::string, std::string> split_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error(ErrorCode::invalid_argument, "expected node=value, got '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string cell = trim(text.substr(pos, comma - pos));
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "'" + cell + "' is not a number");
    }
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_proxy_scores(std::string_view text) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    const Json doc = parse_body(t);
    std::vector<double> out;
    for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(number_at(doc[i], "/" + std::to_string(i)));
    return out;
  }
  std::string normalized = t;
  std::replace_if(normalized.begin(), normalized.end(), [](char c) { return c == ',' || c == '\r'; }, '\n');
  std::istringstream in(normalized);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number_list(tok).front());
  return out;
}

QueryRequest parse_query_request(const Json& body) {
  require_object(body, {"evidence", "query", "threshold", "alarm"});
  QueryRequest req;
  if (auto* e = field(body, "evidence")) req.evidence = evidence_from_json(*e);
  if (auto* q = field(body, "query")) req.query = string_list(*q, "/query");
  if (auto* t = field(body, "threshold")) req.threshold = string_at(*t, "/threshold");
  if (auto* a = field(body, "alarm")) req.alarm = alarm_at(*a);
  return req;
}

SensitivityRequest parse_sensitivity_request(const Json& body) {
  require_object(body, {"target", "delta", "sources"});
  SensitivityRequest req;
  const Json* target = field(body, "target");
  if (!target || !target->is_object()) fail("/target", "expected {\"node\", \"state\"}");
  for (auto it = target->begin(); it != target->end(); ++it) {
    if (it.key() == "node") {
      req.target_node = string_at(*it, "/target/node");
    } else if (it.key() == "state") {
      req.target_state = string_at(*it, "/target/state");
    } else {
      fail("/target", "unknown field '" + it.key() + "'");
    }
  }
  if (req.target_node.empty() || req.target_state.empty()) fail("/target", "node and state are required");
  if (auto* d = field(body, "delta")) req.delta = number_at(*d, "/delta");
  if (auto* s = field(body, "sources")) req.sources = string_list(*s, "/sources");
  return req;
}

DiagnoseRequest parse_diagnose_request(const Json& body) {
  require_object(body, {"outcome_evidence", "rank_over"});
  DiagnoseRequest req;
  if (auto* e = field(body, "outcome_evidence")) req.outcome_evidence = evidence_from_json(*e);
  if (auto* r = field(body, "rank_over")) req.rank_over = string_list(*r, "/rank_over");
  return req;
}

ScenarioRunRequest parse_scenario_request(const Json& body) {
  require_object(body, {"scenarios", "threshold", "alarm"});
  ScenarioRunRequest req;
  Json doc = Json::object();
  doc["scenarios"] = body.contains("scenarios") ? body["scenarios"] : Json::array();
  req.scenarios = scenarios_from_json(doc);
  if (auto* t = field(body, "threshold")) req.threshold = string_at(*t, "/threshold");
  if (auto* a = field(body, "alarm")) req.alarm = alarm_at(*a);
  return req;
}

ValidityInputs parse_validate_request(const Json& body) {
  require_object(body, {"scenarios", "proxy_scores", "holdout_csv", "target", "cutoff"});
  ValidityInputs in;
  if (auto* s = field(body, "scenarios")) {
    Json doc = Json::object();
    doc["scenarios"] = *s;
    in.scenarios = scenarios_from_json(doc);
  }
  if (auto* p = field(body, "proxy_scores")) {
    if (!p->is_array()) fail("/proxy_scores", "expected an array of numbers");
    std::vector<double> scores;
    for (std::size_t i = 0; i < p->size(); ++i) scores.push_back(number_at((*p)[i], "/proxy_scores/" + std::to_string(i)));
    in.proxy_scores = std::move(scores);
  }
  if (auto* h = field(body, "holdout_csv")) in.holdout = parse_case_csv(string_at(*h, "/holdout_csv"));
  if (auto* t = field(body, "target")) in.predictive_target = string_at(*t, "/target");
  if (auto* c = field(body, "cutoff")) in.concurrent_cutoff = number_at(*c, "/cutoff");
  return in;
}

Json assessment_to_json(const RiskAssessment& a) {
  Json out = Json::object();
  out["threshold_node"] = a.threshold_node;
  out["states"] = risk_levels();
  out["posterior"] = number_array(a.posterior);
  out["alarm"] = a.alarm;
  out["alarm_rule"] = alarm_to_json(a.rule);
  return out;
}

Json query_response(const BayesNet& net, const QueryRequest& req) {
  const CompiledNet cn(net);
  const MarginalSet ms = posterior_marginals(cn, req.evidence, req.query);
  Json out = Json::object();
  out["evidence"] = evidence_to_json(req.evidence);
  Json marginals = Json::object();
  for (std::size_t i = 0; i < ms.node_ids.size(); ++i) marginals[ms.node_ids[i]] = number_array(ms.marginals[i]);
  out["marginals"] = std::move(marginals);
  out["log_evidence"] = ms.log_evidence;

  if (!req.threshold && net.threshold_nodes.empty()) {
    out["assessment"] = nullptr;
    return out;
  }
  const std::string t = resolve_threshold(net, req.threshold);
  const auto found = std::find(ms.node_ids.begin(), ms.node_ids.end(), t);
  RiskAssessment a;
  if (found != ms.node_ids.end() && net.is_threshold_node(t)) {
    a = assess_from_marginal(t, ms.marginals[static_cast<std::size_t>(found - ms.node_ids.begin())], req.alarm);
  } else {
    a = assess_threshold(net, req.evidence, t, req.alarm);
  }
  out["assessment"] = assessment_to_json(a);
  return out;
}

Json sensitivity_response(const BayesNet& net, const SensitivityRequest& req) {
  const SensitivityReport rep = sensitivity(net, req.target_node, req.target_state, req.sources, req.delta);
  Json out = Json::object();
  Json target = Json::object();
  target["node"] = rep.target_node;
  target["state"] = rep.target_state;
  out["target"] = std::move(target);
  out["baseline"] = rep.baseline;
  out["delta"] = rep.delta;
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    Json j = Json::object();
    j["source"] = e.source;
    j["row"] = e.row;
    Json cfg = Json::object();
    const auto& parents = net.node(e.source).parents();
    for (std::size_t k = 0; k < parents.size(); ++k) cfg[parents[k]] = e.parent_states[k];
    j["parent_config"] = std::move(cfg);
    j["state"] = e.state;
    j["parameter"] = e.parameter;
    j["baseline"] = e.baseline;
    j["low"] = e.low;
    j["high"] = e.high;
    j["range"] = e.range;
    entries.push_back(std::move(j));
  }
  out["entries"] = std::move(entries);
  return out;
}

Json diagnose_response(const BayesNet& net, const DiagnoseRequest& req) {
  const auto ranked = diagnose(net, req.outcome_evidence, req.rank_over);
  Json out = Json::object();
  out["outcome_evidence"] = evidence_to_json(req.outcome_evidence);
  Json entries = Json::array();
  for (const auto& e : ranked) {
    Json j = Json::object();
    j["node"] = e.node;
    j["state"] = e.state;
    j["prior"] = e.prior;
    j["posterior"] = e.posterior;
    j["lift"] = e.lift;
    entries.push_back(std::move(j));
  }
  out["entries"] = std::move(entries);
  return out;
}

Json scenario_response(const BayesNet& net, const ScenarioRunRequest& req) {
  const std::string t = resolve_threshold(net, req.threshold);
  const auto outcomes = run_scenarios(net, req.scenarios, t, req.alarm);
  Json out = Json::object();
  out["threshold_node"] = t;
  out["alarm_rule"] = alarm_to_json(req.alarm);
  Json results = Json::array();
  for (const auto& o : outcomes) {
    Json j = Json::object();
    j["name"] = o.name;
    j["status"] = std::string(to_string(o.status));
    j["assessment"] = o.assessment ? assessment_to_json(*o.assessment) : Json(nullptr);
    if (o.status == ScenarioStatus::ok) {
      j["error"] = nullptr;
    } else {
      Json err = Json::object();
      err["code"] = o.error_code;
      err["message"] = o.message;
      j["error"] = std::move(err);
    }
    results.push_back(std::move(j));
  }
  out["results"] = std::move(results);
  return out;
}

Json validity_response(const BayesNet& net, const ValidityInputs& inputs) {
  const ValidityReport rep = validity_report(net, inputs);
  Json out = Json::object();

  Json nomo = Json::object();
  if (rep.nomological.error.empty()) {
    nomo["pass"] = rep.nomological.pass;
    nomo["error"] = nullptr;
  } else {
    nomo["pass"] = nullptr;
    nomo["error"] = rep.nomological.error;
  }
  Json edges = Json::array();
  for (const auto& e : rep.nomological.violations) {
    Json j = Json::object();
    j["parent"] = e.parent;
    j["child"] = e.child;
    edges.push_back(std::move(j));
  }
  nomo["violations"] = std::move(edges);
  Json order = Json::array();
  for (auto l : kLayerOrder) order.push_back(std::string(l));
  nomo["layer_order"] = std::move(order);
  out["nomological"] = std::move(nomo);

  if (rep.concurrent) {
    Json c = Json::object();
    c["rho"] = rep.concurrent->rho;
    c["cutoff"] = rep.concurrent->cutoff;
    c["pass"] = rep.concurrent->pass;
    c["model_scores"] = number_array(rep.concurrent->model_scores);
    out["concurrent"] = std::move(c);
  } else {
    out["concurrent"] = nullptr;
  }

  if (rep.predictive) {
    Json p = Json::object();
    p["target"] = rep.predictive->target;
    p["cases_scored"] = rep.predictive->cases_scored;
    p["mean_log_loss"] = rep.predictive->mean_log_loss;
    p["brier"] = rep.predictive->brier;
    p["uniform_log_loss"] = rep.predictive->uniform_log_loss;
    p["pass"] = rep.predictive->pass;
    out["predictive"] = std::move(p);
  } else {
    out["predictive"] = nullptr;
  }

  Json checklist = Json::object();
  checklist["status"] = "manual";
  Json items = Json::array();
  for (const auto& item : rep.checklist) {
    Json j = Json::object();
    j["number"] = item.number;
    j["kind"] = item.kind;
    j["subject"] = item.subject;
    j["question"] = item.question;
    items.push_back(std::move(j));
  }
  checklist["items"] = std::move(items);
  out["checklist"] = std::move(checklist);
  return out;
}

Json network_summary(const BayesNet& net) {
  Json out = Json::object();
  out["name"] = net.name;
  out["version"] = net.version;
  out["threshold_statement"] = net.threshold_statement;
  Json nodes = Json::array();
  Json edges = Json::array();
  for (const auto& n : net.nodes) {
    Json j = Json::object();
    j["id"] = n.id;
    j["label"] = n.label;
    j["layer"] = n.layer;
    j["states"] = string_array(n.states);
    j["parents"] = string_array(n.parents());
    j["description"] = n.description;
    nodes.push_back(std::move(j));
    for (const auto& p : n.parents()) {
      Json e = Json::object();
      e["parent"] = p;
      e["child"] = n.id;
      edges.push_back(std::move(e));
    }
  }
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  out["threshold_nodes"] = string_array(net.threshold_nodes);
  return out;
}

Json violation_to_json(const Violation& v) {
  Json out = Json::object();
  out["kind"] = std::string(to_string(v.kind));
  out["nodes"] = string_array(v.nodes);
  out["detail"] = v.detail;
  if (v.kind == ViolationKind::non_normalized) out["deviation"] = v.deviation;
  return out;
}

Json validation_response(const ValidationReport& report, const std::vector<std::string>& warnings) {
  Json out = Json::object();
  out["valid"] = report.ok();
  Json vs = Json::array();
  for (const auto& v : report.violations) vs.push_back(violation_to_json(v));
  out["violations"] = std::move(vs);
  out["warnings"] = string_array(warnings);
  return out;
}

Json pool_response(const std::string& node_id, const std::map<std::string, std::string>& config,
                   std::size_t judgments, const PooledJudgment& pooled) {
  Json out = Json::object();
  out["node"] = node_id;
  if (config.empty()) {
    out["parent_config"] = nullptr;
  } else {
    Json cfg = Json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    out["parent_config"] = std::move(cfg);
  }
  out["judgments"] = judgments;
  out["pooled"] = number_array(pooled.dist);
  out["total_ess"] = pooled.total_ess;
  out["alpha"] = number_array(ess_to_alpha(pooled.dist, pooled.total_ess));
  return out;
}

Json learn_response(const EmResult& result, bool include_network) {
  Json out = Json::object();
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  out["log_likelihood"] = result.log_likelihood_trace.empty() ? 0.0 : result.log_likelihood_trace.back();
  out["objective"] = result.objective_trace.empty() ? 0.0 : result.objective_trace.back();
  out["log_likelihood_trace"] = number_array(result.log_likelihood_trace);
  out["objective_trace"] = number_array(result.objective_trace);
  out["network"] = include_network ? network_to_json(result.net) : Json(nullptr);
  return out;
}

Json error_response(const Error& e) {
  Json err = Json::object();
  err["code"] = std::string(to_string(e.code()));
  err["message"] = e.what();
  if (auto* vf = dynamic_cast<const ValidationFailure*>(&e)) {
    Json vs = Json::array();
    for (const auto& v : vf->report().violations) vs.push_back(violation_to_json(v));
    err["violations"] = std::move(vs);
  }
  Json out = Json::object();
  out["error"] = std::move(err);
  return out;
}

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string render_text_query(const BayesNet& net, const Json& response) {
  std::string out = "evidence: " + format_evidence_line(response["evidence"]) + "\n";
  out += "log P(evidence): " + fixed6(response["log_evidence"].get<double>()) + "\n\n";
  std::vector<std::vector<std::string>> rows{{"node", "state", "probability"}};
  for (auto it = response["marginals"].begin(); it != response["marginals"].end(); ++it) {
    const auto& states = net.node(it.key()).states;
    for (std::size_t s = 0; s < it->size(); ++s) {
      rows.push_back({s == 0 ? it.key() : "", states[s], fixed6((*it)[s].get<double>())});
    }
  }
  out += render_table(rows);
  out += render_assessment(response["assessment"]);
  return out;
}

namespace {

// Shortest text that reads back to the same double; for humans only.
std::string shortest(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string render_text_sensitivity(const Json& response) {
  std::string out = "target: P(" + response["target"]["node"].get<std::string>() + "=" +
                    response["target"]["state"].get<std::string>() +
                    ") = " + fixed6(response["baseline"].get<double>()) +
                    ", delta " + shortest(response["delta"].get<double>()) + "\n\n";
  std::vector<std::vector<std::string>> rows{{"source", "parents", "state", "p", "low", "high", "range"}};
  for (const auto& e : response["entries"]) {
    std::string cfg;
    for (auto it = e["parent_config"].begin(); it != e["parent_config"].end(); ++it) {
      cfg += (cfg.empty() ? "" : ",") + it.key() + "=" + it->get<std::string>();
    }
    rows.push_back({e["source"].get<std::string>(), cfg.empty() ? "-" : cfg, e["state"].get<std::string>(),
                    fixed6(e["parameter"].get<double>()), fixed6(e["low"].get<double>()),
                    fixed6(e["high"].get<double>()), fixed6(e["range"].get<double>())});
  }
  return out + render_table(rows);
}

std::string render_text_diagnose(const Json& response) {
  std::string out = "evidence: " + format_evidence_line(response["outcome_evidence"]) + "\n\n";
  std::vector<std::vector<std::string>> rows{{"node", "state", "prior", "posterior", "lift"}};
  for (const auto& e : response["entries"]) {
    const double lift = e["lift"].get<double>();
    rows.push_back({e["node"].get<std::string>(), e["state"].get<std::string>(), fixed6(e["prior"].get<double>()),
                    fixed6(e["posterior"].get<double>()), (lift >= 0 ? "+" : "") + fixed6(lift)});
  }
  return out + render_table(rows);
}

std::string render_text_scenarios(const Json& response) {
  std::string out = "threshold: " + response["threshold_node"].get<std::string>() + ", alarm when " +
                    response["alarm_rule"]["state"].get<std::string>() +
                    " >= " + format_number(response["alarm_rule"]["cutoff"].get<double>()) + "\n\n";
  std::vector<std::vector<std::string>> rows{{"scenario", "status"}};
  for (auto s : kRiskLevels) rows[0].push_back(std::string(s));
  rows[0].push_back("alarm");
  for (const auto& r : response["results"]) {
    std::vector<std::string> row{r["name"].get<std::string>(), r["status"].get<std::string>()};
    if (r["assessment"].is_null()) {
      for (std::size_t s = 0; s < kRiskLevels.size(); ++s) row.push_back("-");
      row.push_back(r["error"]["code"].get<std::string>());
    } else {
      for (const auto& p : r["assessment"]["posterior"]) row.push_back(fixed6(p.get<double>()));
      row.push_back(yes_no(r["assessment"]["alarm"].get<bool>()));
    }
    rows.push_back(std::move(row));
  }
  return out + render_table(rows);
}

std::string render_text_validity(const Json& response) {
  std::string out;
  const Json& nomo = response["nomological"];
  if (nomo["error"].is_null()) {
    out += std::string("nomological: ") + (nomo["pass"].get<bool>() ? "pass" : "FAIL") + " (" +
           std::to_string(nomo["violations"].size()) + " violating edges)\n";
    for (const auto& e : nomo["violations"]) {
      out += "  " + e["parent"].get<std::string>() + " -> " + e["child"].get<std::string>() + "\n";
    }
  } else {
    out += "nomological: error: " + nomo["error"].get<std::string>() + "\n";
  }
  if (response["concurrent"].is_null()) {
    out += "concurrent: not run\n";
  } else {
    const Json& c = response["concurrent"];
    out += std::string("concurrent: ") + (c["pass"].get<bool>() ? "pass" : "FAIL") + " (rho " +
           fixed6(c["rho"].get<double>()) + ", cutoff " + format_number(c["cutoff"].get<double>()) + ")\n";
  }
  if (response["predictive"].is_null()) {
    out += "predictive: not run\n";
  } else {
    const Json& p = response["predictive"];
    out += std::string("predictive: ") + (p["pass"].get<bool>() ? "pass" : "FAIL") + " (target " +
           p["target"].get<std::string>() + ", " + std::to_string(p["cases_scored"].get<std::size_t>()) +
           " cases, log-loss " + fixed6(p["mean_log_loss"].get<double>()) + " vs uniform " +
           fixed6(p["uniform_log_loss"].get<double>()) + ", Brier " + fixed6(p["brier"].get<double>()) + ")\n";
  }
  out += "\nchecklist (manual review):\n";
  std::vector<ChecklistItem> items;
  for (const auto& j : response["checklist"]["items"]) {
    items.push_back({j["number"].get<int>(), j["kind"].get<std::string>(), j["subject"].get<std::string>(),
                     j["question"].get<std::string>()});
  }
  return out + render_checklist(items);
}

std::string render_text_validation(const Json& response) {
  std::string out = response["valid"].get<bool>() ? "valid\n" : "INVALID\n";
  if (!response["violations"].empty()) {
    std::vector<std::vector<std::string>> rows{{"kind", "nodes", "detail"}};
    for (const auto& v : response["violations"]) {
      std::string nodes;
      for (const auto& n : v["nodes"]) nodes += (nodes.empty() ? "" : ",") + n.get<std::string>();
      rows.push_back({v["kind"].get<std::string>(), nodes, v["detail"].get<std::string>()});
    }
    out += render_table(rows);
  }
  for (const auto& w : response["warnings"]) out += "warning: " + w.get<std::string>() + "\n";
  return out;
}

std::string render_text_pool(const Json& response) {
  std::string out = "node: " + response["node"].get<std::string>() + "\n";
  if (!response["parent_config"].is_null()) {
    std::string cfg;
    for (auto it = response["parent_config"].begin(); it != response["parent_config"].end(); ++it) {
      cfg += (cfg.empty() ? "" : ", ") + it.key() + "=" + it->get<std::string>();
    }
    out += "parents: " + cfg + "\n";
  }
  out += "judgments: " + std::to_string(response["judgments"].get<std::size_t>()) +
         ", total ESS " + format_number(response["total_ess"].get<double>()) + "\n\n";
  std::vector<std::vector<std::string>> rows{{"state", "pooled", "alpha"}};
  for (std::size_t s = 0; s < response["pooled"].size(); ++s) {
    rows.push_back({std::to_string(s), fixed6(response["pooled"][s].get<double>()),
                    fixed6(response["alpha"][s].get<double>())});
  }
  return out + render_table(rows);
}

std::string render_text_learn(const Json& response) {
  std::string out = "iterations: " + std::to_string(response["iterations"].get<int>()) +
                    (response["converged"].get<bool>() ? " (converged)" : " (not converged)") + "\n";
  out += "log-likelihood: " + fixed6(response["log_likelihood"].get<double>()) + "\n";
  out += "MAP objective: " + fixed6(response["objective"].get<double>()) + "\n";
  if (!response["network"].is_null()) {
    out += "\n";
    std::vector<std::vector<std::string>> rows{{"node", "row", "probabilities"}};
    for (const auto& n : response["network"]["nodes"]) {
      for (std::size_t r = 0; r < n["cpt"].size(); ++r) {
        std::string probs;
        for (const auto& p : n["cpt"][r]) probs += (probs.empty() ? "" : " ") + fixed6(p.get<double>());
        rows.push_back({r == 0 ? n["id"].get<std::string>() : "", std::to_string(r), probs});
      }
    }
    out += render_table(rows);
  }
  return out;
}

std::string render_text_summary(const Json& response) {
  std::string out = response["name"].get<std::string>() + " " + response["version"].get<std::string>() + "\n\n";
  std::vector<std::vector<std::string>> rows{{"node", "layer", "states", "parents"}};
  for (const auto& n : response["nodes"]) {
    std::string states, parents;
    for (const auto& s : n["states"]) states += (states.empty() ? "" : ",") + s.get<std::string>();
    for (const auto& p : n["parents"]) parents += (parents.empty() ? "" : ",") + p.get<std::string>();
    rows.push_back({n["id"].get<std::string>(), n["layer"].get<std::string>(), states, parents.empty() ? "-" : parents});
  }
  return out + render_table(rows);
}

}  // namespace riskbn::api
