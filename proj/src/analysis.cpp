#include "riskbn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace riskbn {

AlarmRule parse_alarm_rule(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::invalid_argument, "alarm rule must look like state:cutoff");
  }
  AlarmRule rule;
  rule.state = std::string(text.substr(0, colon));
  const std::string number(text.substr(colon + 1));
  try {
    std::size_t used = 0;
    rule.cutoff = std::stod(number, &used);
    if (used != number.size()) throw std::invalid_argument(number);
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_argument, "alarm cutoff '" + number + "' is not a number");
  }
  return rule;
}

namespace {

std::size_t check_rule(const AlarmRule& rule) {
  if (!(rule.cutoff >= 0.0 && rule.cutoff <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "alarm cutoff must lie in [0,1]");
  }
  for (std::size_t i = 0; i < kRiskLevels.size(); ++i) {
    if (kRiskLevels[i] == rule.state) return i;
  }
  throw Error(ErrorCode::invalid_argument, "alarm state '" + rule.state + "' is not a risk level");
}

void check_threshold(const BayesNet& net, std::string_view threshold_node) {
  if (!net.find(threshold_node)) {
    throw Error(ErrorCode::unknown_node, "unknown node '" + std::string(threshold_node) + "'");
  }
  if (!net.is_threshold_node(threshold_node)) {
    throw Error(ErrorCode::not_threshold_node, "'" + std::string(threshold_node) + "' is not a threshold node");
  }
}

}  // namespace

RiskAssessment assess_from_marginal(std::string_view threshold_node, std::vector<double> posterior,
                                    const AlarmRule& rule) {
  const std::size_t s = check_rule(rule);
  RiskAssessment out;
  out.threshold_node = std::string(threshold_node);
  out.alarm = posterior.at(s) >= rule.cutoff;
  out.posterior = std::move(posterior);
  out.rule = rule;
  return out;
}

RiskAssessment assess_threshold(const BayesNet& net, const EvidenceSet& ev, std::string_view threshold_node,
                                const AlarmRule& rule) {
  check_threshold(net, threshold_node);
  check_rule(rule);
  auto m = posterior_marginals(net, ev, std::vector<std::string>{std::string(threshold_node)});
  return assess_from_marginal(threshold_node, m.marginals.front(), rule);
}

long long ranking_key(double magnitude) { return std::llround(std::abs(magnitude) * 1e10); }

std::vector<DiagnosisEntry> diagnose(const BayesNet& net, const EvidenceSet& outcome_evidence,
                                     std::span<const std::string> rank_over) {
  if (outcome_evidence.empty()) throw Error(ErrorCode::invalid_argument, "diagnosis needs outcome evidence");
  const CompiledNet cn(net);
  std::vector<std::size_t> idx;
  for (const auto& id : rank_over) idx.push_back(cn.index(id));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty()) {
    resolve_evidence(cn, outcome_evidence);
    return {};
  }

  std::vector<std::string> ids;
  for (auto i : idx) ids.push_back(cn.id(i));
  const MarginalSet prior = posterior_marginals(cn, EvidenceSet{}, ids);
  const MarginalSet post = posterior_marginals(cn, outcome_evidence, ids);

  std::vector<DiagnosisEntry> out;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    for (std::size_t s = 0; s < cn.card(idx[k]); ++s) {
      DiagnosisEntry e;
      e.node = ids[k];
      e.state = cn.states(idx[k])[s];
      e.prior = prior.marginals[k][s];
      e.posterior = post.marginals[k][s];
      e.lift = e.posterior - e.prior;
      out.push_back(std::move(e));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DiagnosisEntry& a, const DiagnosisEntry& b) {
    return ranking_key(a.lift) > ranking_key(b.lift);
  });
  return out;
}

std::vector<double> covary_row(std::span<const double> row, std::size_t state, double value) {
  std::vector<double> out(row.begin(), row.end());
  double others = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j != state) others += row[j];
  }
  const double residual = 1.0 - value;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == state) {
      out[j] = value;
    } else if (others > 0.0) {
      out[j] = row[j] * (residual / others);
    } else {
      out[j] = residual / static_cast<double>(row.size() - 1);
    }
  }
  return out;
}

namespace {

double target_probability(const BayesNet& net, std::size_t target, std::size_t state) {
  const CompiledNet cn(net);
  const ResolvedEvidence none = resolve_evidence(cn, EvidenceSet{});
  const std::size_t q[] = {target};
  return joint_posterior(cn, none, q).table.values[state];
}

}  // namespace

SensitivityReport sensitivity(const BayesNet& net, std::string_view target_node, std::string_view target_state,
                              const std::optional<std::vector<std::string>>& sources, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::invalid_argument, "delta must lie in (0,1)");
  require_valid(net);
  const NodeDef& target = net.node(target_node);
  const auto target_idx = *net.index_of(target_node);
  const auto state_idx = target.state_index(target_state);
  if (!state_idx) {
    throw Error(ErrorCode::unknown_state,
                "unknown state '" + std::string(target_state) + "' for node '" + target.id + "'");
  }

  std::vector<std::size_t> source_idx;
  if (sources) {
    for (const auto& s : *sources) {
      auto i = net.index_of(s);
      if (!i) throw Error(ErrorCode::unknown_node, "unknown node '" + s + "'");
      source_idx.push_back(*i);
    }
    std::sort(source_idx.begin(), source_idx.end());
    source_idx.erase(std::unique(source_idx.begin(), source_idx.end()), source_idx.end());
  } else {
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      if (net.nodes[i].parents().empty()) source_idx.push_back(i);
    }
  }

  SensitivityReport report;
  report.target_node = target.id;
  report.target_state = std::string(target_state);
  report.delta = delta;
  report.baseline = target_probability(net, target_idx, *state_idx);

  BayesNet work = net;
  for (auto si : source_idx) {
    const NodeDef& source = net.nodes[si];
    for (std::size_t r = 0; r < source.cpt.rows.size(); ++r) {
      const auto& row = source.cpt.rows[r];
      for (std::size_t s = 0; s < source.cardinality(); ++s) {
        SensitivityEntry e;
        e.source = source.id;
        e.row = r;
        e.parent_states = row_config(net, source, r);
        e.state = source.states[s];
        e.parameter = row[s];
        e.baseline = report.baseline;

        work.nodes[si].cpt.rows[r] = covary_row(row, s, std::max(0.0, row[s] - delta));
        e.low = target_probability(work, target_idx, *state_idx);
        work.nodes[si].cpt.rows[r] = covary_row(row, s, std::min(1.0, row[s] + delta));
        e.high = target_probability(work, target_idx, *state_idx);
        work.nodes[si].cpt.rows[r] = row;

        e.range = std::abs(e.high - e.low);
        report.entries.push_back(std::move(e));
      }
    }
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const SensitivityEntry& a, const SensitivityEntry& b) {
                     return ranking_key(a.range) > ranking_key(b.range);
                   });
  return report;
}

std::string_view to_string(ScenarioStatus status) {
  switch (status) {
    case ScenarioStatus::ok: return "ok";
    case ScenarioStatus::inconsistent: return "inconsistent";
    case ScenarioStatus::error: return "error";
  }
  return "error";
}

std::vector<ScenarioOutcome> run_scenarios(const BayesNet& net, const ScenarioSet& scenarios,
                                           std::string_view threshold_node, const AlarmRule& rule) {
  require_valid(net);
  check_threshold(net, threshold_node);
  check_rule(rule);
  const CompiledNet cn(net);
  const std::vector<std::string> query{std::string(threshold_node)};
  std::vector<ScenarioOutcome> out;
  for (const auto& sc : scenarios) {
    ScenarioOutcome row;
    row.name = sc.name;
    try {
      auto m = posterior_marginals(cn, sc.evidence, query);
      row.assessment = assess_from_marginal(threshold_node, m.marginals.front(), rule);
    } catch (const Error& e) {
      row.status = e.code() == ErrorCode::zero_probability_evidence ? ScenarioStatus::inconsistent
                                                                     : ScenarioStatus::error;
      row.error_code = std::string(to_string(e.code()));
      row.message = e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::parse_error, (path.empty() ? std::string("/") : path) + ": " + what);
}

EvidenceSet evidence_at(const Json& obj, const std::string& path) {
  if (obj.is_null()) return {};
  if (!obj.is_object()) fail(path, "evidence must be an object");
  EvidenceSet ev;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it.key() == "hard") {
      if (!it->is_object()) fail(path + "/hard", "expected an object of node: state");
      for (auto kv = it->begin(); kv != it->end(); ++kv) {
        if (!kv->is_string()) fail(path + "/hard/" + kv.key(), "expected a state name");
        ev.hard[kv.key()] = kv->get<std::string>();
      }
    } else if (it.key() == "soft") {
      if (!it->is_object()) fail(path + "/soft", "expected an object of node: [weights]");
      for (auto kv = it->begin(); kv != it->end(); ++kv) {
        if (!kv->is_array()) fail(path + "/soft/" + kv.key(), "expected an array of weights");
        std::vector<double> w;
        for (const auto& x : *kv) {
          if (!x.is_number()) fail(path + "/soft/" + kv.key(), "expected numeric weights");
          w.push_back(x.get<double>());
        }
        ev.soft[kv.key()] = std::move(w);
      }
    } else {
      fail(path, "unknown field '" + it.key() + "'");
    }
  }
  return ev;
}

}  // namespace

EvidenceSet evidence_from_json(const Json& obj) { return evidence_at(obj, "/evidence"); }

Json evidence_to_json(const EvidenceSet& ev) {
  Json out = Json::object();
  Json hard = Json::object();
  for (const auto& [k, v] : ev.hard) hard[k] = v;
  Json soft = Json::object();
  for (const auto& [k, w] : ev.soft) {
    Json arr = Json::array();
    for (double x : w) arr.push_back(x);
    soft[k] = std::move(arr);
  }
  out["hard"] = std::move(hard);
  out["soft"] = std::move(soft);
  return out;
}

ScenarioSet scenarios_from_json(const Json& doc) {
  if (!doc.is_object()) fail("", "expected an object with a 'scenarios' array");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "scenarios") fail("", "unknown field '" + it.key() + "'");
  }
  auto list = doc.find("scenarios");
  if (list == doc.end() || !list->is_array()) fail("/scenarios", "expected an array");
  ScenarioSet out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const Json& s = (*list)[i];
    const std::string path = "/scenarios/" + std::to_string(i);
    if (!s.is_object()) fail(path, "expected an object");
    Scenario sc;
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (it.key() == "name") {
        if (!it->is_string()) fail(path + "/name", "expected a string");
        sc.name = it->get<std::string>();
      } else if (it.key() == "description") {
        if (!it->is_string()) fail(path + "/description", "expected a string");
        sc.description = it->get<std::string>();
      } else if (it.key() == "evidence") {
        sc.evidence = evidence_at(*it, path + "/evidence");
      } else {
        fail(path, "unknown field '" + it.key() + "'");
      }
    }
    if (sc.name.empty()) fail(path + "/name", "scenario name is required");
    if (!names.insert(sc.name).second) fail(path + "/name", "duplicate scenario name '" + sc.name + "'");
    out.push_back(std::move(sc));
  }
  return out;
}

ScenarioSet parse_scenarios(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  return scenarios_from_json(doc);
}

Json scenarios_to_json(const ScenarioSet& set) {
  Json list = Json::array();
  for (const auto& sc : set) {
    Json s = Json::object();
    s["name"] = sc.name;
    s["description"] = sc.description;
    s["evidence"] = evidence_to_json(sc.evidence);
    list.push_back(std::move(s));
  }
  Json out = Json::object();
  out["scenarios"] = std::move(list);
  return out;
}

std::string default_threshold_node(const BayesNet& net) {
  if (net.threshold_nodes.empty()) throw Error(ErrorCode::not_threshold_node, "network declares no threshold node");
  return net.threshold_nodes.front();
}

}  // namespace riskbn
