#include "riskbn/elicitation.hpp"

#include <algorithm>
#include <cmath>

namespace riskbn {

PooledJudgment pool_judgments(std::span<const ExpertJudgment> judgments) {
  if (judgments.empty()) throw Error(ErrorCode::invalid_argument, "cannot pool an empty judgment list");
  const ExpertJudgment& head = judgments.front();
  double total = 0.0;
  for (const auto& j : judgments) {
    if (j.node_id != head.node_id || j.parent_config != head.parent_config) {
      throw Error(ErrorCode::invalid_argument, "judgments disagree on node or parent configuration");
    }
    if (j.dist.size() != head.dist.size()) {
      throw Error(ErrorCode::invalid_argument, "judgments have different state counts");
    }
    if (!(j.weight > 0.0) || !std::isfinite(j.weight)) {
      throw Error(ErrorCode::invalid_argument, "judgment weight must be positive (expert '" + j.expert_id + "')");
    }
    double sum = 0.0;
    for (double p : j.dist) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "judgment by '" + j.expert_id + "' has a probability outside [0,1]");
      }
      sum += p;
    }
    if (j.dist.empty() || std::abs(sum - 1.0) > kRenormalizeTolerance) {
      throw Error(ErrorCode::invalid_argument, "judgment by '" + j.expert_id + "' does not sum to 1");
    }
    total += j.weight;
  }

  PooledJudgment out;
  out.total_ess = total;
  out.dist.assign(head.dist.size(), 0.0);
  for (const auto& j : judgments) {
    const double share = j.weight / total;
    for (std::size_t s = 0; s < out.dist.size(); ++s) out.dist[s] += share * j.dist[s];
  }
  return out;
}

std::vector<double> ess_to_alpha(std::span<const double> pooled, double total_ess) {
  if (!(total_ess > 0.0) || !std::isfinite(total_ess)) {
    throw Error(ErrorCode::invalid_argument, "equivalent sample size must be positive");
  }
  std::vector<double> alpha(pooled.size());
  for (std::size_t s = 0; s < pooled.size(); ++s) alpha[s] = total_ess * pooled[s];
  return alpha;
}

DirichletPrior ess_to_prior(const BayesNet& net, std::string_view node_id,
                            const std::map<std::size_t, PooledJudgment>& elicited_rows, double default_row_total) {
  const NodeDef& node = net.node(node_id);
  const std::size_t rows = expected_row_count(net, node);
  const std::size_t k = node.cardinality();
  DirichletPrior prior;
  prior.node_id = node.id;
  for (std::size_t r = 0; r < rows; ++r) {
    auto it = elicited_rows.find(r);
    if (it == elicited_rows.end()) {
      prior.alpha.emplace_back(k, default_row_total / static_cast<double>(k));
      continue;
    }
    if (it->second.dist.size() != k) {
      throw Error(ErrorCode::invalid_argument, "pooled distribution for '" + node.id + "' row " + std::to_string(r) +
                                                   " has the wrong number of states");
    }
    prior.alpha.push_back(ess_to_alpha(it->second.dist, it->second.total_ess));
  }
  for (auto [r, _] : elicited_rows) {
    if (r >= rows) throw Error(ErrorCode::invalid_argument, "row index out of range for '" + node.id + "'");
  }
  return prior;
}

DirichletPrior uniform_prior(const BayesNet& net, std::string_view node_id, double per_state) {
  const NodeDef& node = net.node(node_id);
  DirichletPrior prior;
  prior.node_id = node.id;
  prior.alpha.assign(expected_row_count(net, node), std::vector<double>(node.cardinality(), per_state));
  return prior;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::parse_error, (path.empty() ? std::string("/") : path) + ": " + what);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

void only_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      fail(path, "unknown field '" + it.key() + "'");
    }
  }
}

std::string str_at(const Json& obj, const std::string& path, const char* key, bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) fail(path, std::string("missing required field '") + key + "'");
    return {};
  }
  if (!it->is_string()) fail(path + "/" + key, "expected a string");
  return it->get<std::string>();
}

std::vector<double> numbers_at(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
  if (!it->is_array()) fail(path + "/" + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) fail(path + "/" + key, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ExpertJudgment judgment_from_json(const Json& j, const std::string& path, const std::string& node_id) {
  only_keys(j, path, {"expert_id", "node_id", "parent_config", "dist", "weight", "rationale"});
  ExpertJudgment out;
  out.expert_id = str_at(j, path, "expert_id", false);
  out.node_id = node_id.empty() ? str_at(j, path, "node_id") : node_id;
  if (auto nid = str_at(j, path, "node_id", false); !nid.empty() && nid != out.node_id) {
    fail(path + "/node_id", "judgment node '" + nid + "' does not match file node '" + out.node_id + "'");
  }
  if (auto it = j.find("parent_config"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) fail(path + "/parent_config", "expected an object or null");
    for (auto kv = it->begin(); kv != it->end(); ++kv) {
      if (!kv.value().is_string()) fail(path + "/parent_config/" + kv.key(), "expected a state name");
      out.parent_config[kv.key()] = kv.value().get<std::string>();
    }
  }
  out.dist = numbers_at(j, path, "dist");
  auto w = j.find("weight");
  if (w == j.end() || !w->is_number()) fail(path + "/weight", "expected a positive number");
  out.weight = w->get<double>();
  out.rationale = str_at(j, path, "rationale", false);
  return out;
}

Json judgment_to_json(const ExpertJudgment& j, bool with_node) {
  Json out = Json::object();
  out["expert_id"] = j.expert_id;
  if (with_node) out["node_id"] = j.node_id;
  if (j.parent_config.empty()) {
    out["parent_config"] = nullptr;
  } else {
    Json cfg = Json::object();
    for (const auto& [k, v] : j.parent_config) cfg[k] = v;
    out["parent_config"] = std::move(cfg);
  }
  Json dist = Json::array();
  for (double p : j.dist) dist.push_back(p);
  out["dist"] = std::move(dist);
  out["weight"] = j.weight;
  out["rationale"] = j.rationale;
  return out;
}

ElicitationFile elicitation_from_json(const Json& doc, const std::string& path) {
  only_keys(doc, path, {"node_id", "judgments"});
  ElicitationFile file;
  file.node_id = str_at(doc, path, "node_id");
  auto it = doc.find("judgments");
  if (it == doc.end() || !it->is_array()) fail(path + "/judgments", "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    file.judgments.push_back(judgment_from_json((*it)[i], path + "/judgments/" + std::to_string(i), file.node_id));
  }
  return file;
}

}  // namespace

std::vector<ElicitationFile> parse_elicitation(std::string_view text) {
  const Json doc = parse_json(text);
  std::vector<ElicitationFile> files;
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) files.push_back(elicitation_from_json(doc[i], "/" + std::to_string(i)));
  } else {
    files.push_back(elicitation_from_json(doc, ""));
  }
  return files;
}

Json elicitation_to_json(const ElicitationFile& file) {
  Json out = Json::object();
  out["node_id"] = file.node_id;
  Json js = Json::array();
  for (const auto& j : file.judgments) js.push_back(judgment_to_json(j, false));
  out["judgments"] = std::move(js);
  return out;
}

std::map<std::string, DirichletPrior> priors_from_elicitation(const BayesNet& net,
                                                              std::span<const ElicitationFile> files,
                                                              double default_row_total) {
  // node -> row -> judgments, in file order.
  std::map<std::string, std::map<std::size_t, std::vector<ExpertJudgment>>> grouped;
  for (const auto& file : files) {
    const NodeDef& node = net.node(file.node_id);
    for (const auto& j : file.judgments) {
      if (j.dist.size() != node.cardinality()) {
        throw Error(ErrorCode::invalid_argument, "judgment by '" + j.expert_id + "' for '" + node.id + "' has " +
                                                     std::to_string(j.dist.size()) + " probabilities, expected " +
                                                     std::to_string(node.cardinality()));
      }
      grouped[node.id][row_index_for(net, node, j.parent_config)].push_back(j);
    }
  }
  std::map<std::string, DirichletPrior> priors;
  for (const auto& [node_id, rows] : grouped) {
    std::map<std::size_t, PooledJudgment> pooled;
    for (const auto& [row, js] : rows) pooled[row] = pool_judgments(js);
    priors[node_id] = ess_to_prior(net, node_id, pooled, default_row_total);
  }
  return priors;
}

std::string_view to_string(SourceCategory c) {
  switch (c) {
    case SourceCategory::capability_evaluation: return "capability_evaluation";
    case SourceCategory::red_teaming: return "red_teaming";
    case SourceCategory::threat_landscape: return "threat_landscape";
    case SourceCategory::historical_data: return "historical_data";
    case SourceCategory::sociological_study: return "sociological_study";
    case SourceCategory::resource_cost_assessment: return "resource_cost_assessment";
  }
  return "historical_data";
}

std::optional<SourceCategory> parse_source_category(std::string_view text) {
  for (auto c : {SourceCategory::capability_evaluation, SourceCategory::red_teaming, SourceCategory::threat_landscape,
                 SourceCategory::historical_data, SourceCategory::sociological_study,
                 SourceCategory::resource_cost_assessment}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::vector<EvidenceRecord> parse_ledger(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_array()) fail("", "ledger must be an array of evidence records");
  std::vector<EvidenceRecord> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "/" + std::to_string(i);
    const Json& r = doc[i];
    only_keys(r, path, {"source_category", "citation", "payload", "date"});
    EvidenceRecord rec;
    const std::string cat = str_at(r, path, "source_category");
    auto parsed = parse_source_category(cat);
    if (!parsed) fail(path + "/source_category", "unknown source category '" + cat + "'");
    rec.source_category = *parsed;
    rec.citation = str_at(r, path, "citation", false);
    rec.date = str_at(r, path, "date", false);
    auto p = r.find("payload");
    if (p == r.end() || !p->is_object()) fail(path + "/payload", "expected an object");
    const std::string ppath = path + "/payload";
    auto kind = p->find("kind");
    if (kind == p->end() || !kind->is_string()) fail(ppath, "missing payload kind");
    if (*kind == "likelihood") {
      only_keys(*p, ppath, {"kind", "node_id", "weights"});
      rec.payload = LikelihoodPayload{str_at(*p, ppath, "node_id"), numbers_at(*p, ppath, "weights")};
    } else if (*kind == "judgment") {
      Json body = *p;
      body.erase("kind");
      rec.payload = judgment_from_json(body, ppath, "");
    } else {
      fail(ppath + "/kind", "payload kind must be 'likelihood' or 'judgment'");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

Json ledger_to_json(std::span<const EvidenceRecord> records) {
  Json out = Json::array();
  for (const auto& rec : records) {
    Json r = Json::object();
    r["source_category"] = std::string(to_string(rec.source_category));
    r["citation"] = rec.citation;
    if (const auto* lik = std::get_if<LikelihoodPayload>(&rec.payload)) {
      Json p = Json::object();
      p["kind"] = "likelihood";
      p["node_id"] = lik->node_id;
      Json w = Json::array();
      for (double x : lik->weights) w.push_back(x);
      p["weights"] = std::move(w);
      r["payload"] = std::move(p);
    } else {
      Json p = Json::object();
      p["kind"] = "judgment";
      const Json body = judgment_to_json(std::get<ExpertJudgment>(rec.payload), true);
      for (auto it = body.begin(); it != body.end(); ++it) p[it.key()] = *it;
      r["payload"] = std::move(p);
    }
    r["date"] = rec.date;
    out.push_back(std::move(r));
  }
  return out;
}

std::pair<std::string, std::vector<double>> ledger_to_soft_evidence(const EvidenceRecord& rec, const BayesNet& net) {
  const auto* lik = std::get_if<LikelihoodPayload>(&rec.payload);
  if (!lik) throw Error(ErrorCode::invalid_argument, "ledger record carries a judgment, not a likelihood");
  const NodeDef& node = net.node(lik->node_id);
  if (lik->weights.size() != node.cardinality()) {
    throw Error(ErrorCode::invalid_evidence, "likelihood for '" + node.id + "' has " +
                                                 std::to_string(lik->weights.size()) + " entries, expected " +
                                                 std::to_string(node.cardinality()));
  }
  double peak = 0.0;
  for (double w : lik->weights) {
    if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::invalid_evidence, "likelihood entries must be non-negative");
    peak = std::max(peak, w);
  }
  if (!(peak > 0.0)) throw Error(ErrorCode::invalid_evidence, "likelihood for '" + node.id + "' has no positive entry");
  std::vector<double> scaled(lik->weights.size());
  for (std::size_t s = 0; s < scaled.size(); ++s) scaled[s] = lik->weights[s] / peak;
  return {node.id, scaled};
}

}  // namespace riskbn
