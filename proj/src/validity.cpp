#include "riskbn/validity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "riskbn/inference.hpp"

namespace riskbn {

std::optional<std::size_t> layer_rank(std::string_view layer) {
  for (std::size_t i = 0; i < kLayerOrder.size(); ++i) {
    if (kLayerOrder[i] == layer) return i;
  }
  return std::nullopt;
}

std::vector<Edge> check_nomological(const BayesNet& net) {
  for (const auto& node : net.nodes) {
    if (!layer_rank(node.layer)) {
      throw Error(ErrorCode::invalid_argument, "node '" + node.id + "' has " +
                                                   (node.layer.empty() ? std::string("no layer tag")
                                                                       : "unknown layer tag '" + node.layer + "'"));
    }
  }
  std::vector<Edge> out;
  for (const auto& child : net.nodes) {
    const auto child_rank = *layer_rank(child.layer);
    for (const auto& p : child.parents()) {
      const NodeDef* parent = net.find(p);
      if (!parent) throw Error(ErrorCode::unknown_node, "node '" + child.id + "' references missing parent '" + p + "'");
      if (child_rank < *layer_rank(parent->layer)) out.push_back({parent->id, child.id});
    }
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::invalid_argument, "rank correlation inputs differ in length");
  if (x.size() < 3) throw Error(ErrorCode::invalid_argument, "rank correlation needs at least 3 points");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ConcurrentResult check_concurrent(const BayesNet& net, const ScenarioSet& scenarios,
                                  std::span<const double> proxy_scores, std::string_view threshold_node,
                                  double cutoff) {
  if (scenarios.size() != proxy_scores.size()) {
    throw Error(ErrorCode::invalid_argument, "need one proxy score per scenario");
  }
  if (scenarios.size() < 3) throw Error(ErrorCode::invalid_argument, "concurrent validity needs at least 3 scenarios");
  ConcurrentResult out;
  out.cutoff = cutoff;
  AlarmRule rule;
  for (const auto& sc : scenarios) {
    out.model_scores.push_back(assess_threshold(net, sc.evidence, threshold_node, rule).posterior.back());
  }
  out.rho = spearman(out.model_scores, proxy_scores);
  out.pass = out.rho >= cutoff;
  return out;
}

std::string default_predictive_target(const BayesNet& net, const CaseTable& holdout) {
  if (holdout.columns.empty()) throw Error(ErrorCode::invalid_argument, "holdout has no columns");
  for (const auto& t : net.threshold_nodes) {
    if (std::find(holdout.columns.begin(), holdout.columns.end(), t) != holdout.columns.end()) return t;
  }
  return holdout.columns.back();
}

PredictiveResult check_predictive(const BayesNet& net, const CaseTable& holdout,
                                  const std::optional<std::string>& target) {
  if (holdout.rows.empty()) throw Error(ErrorCode::invalid_argument, "holdout has no cases");
  PredictiveResult out;
  out.target = target ? *target : default_predictive_target(net, holdout);
  const auto col = std::find(holdout.columns.begin(), holdout.columns.end(), out.target);
  if (col == holdout.columns.end()) {
    throw Error(ErrorCode::invalid_argument, "holdout has no column for target '" + out.target + "'");
  }
  const std::size_t target_col = static_cast<std::size_t>(col - holdout.columns.begin());

  const CompiledNet cn(net);
  const std::size_t ti = cn.index(out.target);
  const std::vector<std::string> query{out.target};
  std::vector<double> losses, briers;
  for (std::size_t r = 0; r < holdout.rows.size(); ++r) {
    const auto& row = holdout.rows[r];
    if (row.size() != holdout.columns.size()) {
      throw Error(ErrorCode::invalid_argument, "holdout row " + std::to_string(r) + " has the wrong number of cells");
    }
    if (!row[target_col]) continue;
    const std::size_t actual = cn.state_index(ti, *row[target_col]);
    EvidenceSet ev;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != target_col && row[c]) ev.hard[holdout.columns[c]] = *row[c];
    }
    std::vector<double> predicted;
    try {
      predicted = posterior_marginals(cn, ev, query).marginals.front();
    } catch (const Error& e) {
      throw Error(e.code(), "holdout row " + std::to_string(r) + ": " + e.what());
    }
    losses.push_back(-std::log(predicted[actual]));
    double b = 0.0;
    for (std::size_t s = 0; s < predicted.size(); ++s) {
      const double d = predicted[s] - (s == actual ? 1.0 : 0.0);
      b += d * d;
    }
    briers.push_back(b);
  }
  if (losses.empty()) {
    throw Error(ErrorCode::invalid_argument, "no holdout case observes target '" + out.target + "'");
  }
  // Sorted summation makes the scores independent of case order.
  std::sort(losses.begin(), losses.end());
  std::sort(briers.begin(), briers.end());
  const double n = static_cast<double>(losses.size());
  out.cases_scored = losses.size();
  out.mean_log_loss = std::accumulate(losses.begin(), losses.end(), 0.0) / n;
  out.brier = std::accumulate(briers.begin(), briers.end(), 0.0) / n;
  out.uniform_log_loss = std::log(static_cast<double>(cn.card(ti)));
  out.pass = out.mean_log_loss < out.uniform_log_loss;
  return out;
}

std::vector<ChecklistItem> generate_checklist(const BayesNet& net) {
  std::vector<ChecklistItem> items;
  int number = 1;
  std::set<std::string> layers_present;
  for (const auto& node : net.nodes) {
    layers_present.insert(node.layer);
    std::string states;
    for (std::size_t s = 0; s < node.states.size(); ++s) states += (s ? ", " : "") + node.states[s];
    const std::string name = node.label.empty() ? node.id : node.label;
    items.push_back({number++, "face", node.id,
                     "Do subject-matter experts agree that '" + name + "' (layer: " +
                         (node.layer.empty() ? std::string("untagged") : node.layer) + "; states: " + states +
                         ") measures what it is intended to measure, and that its parents capture its main drivers?"});
  }
  for (auto layer : kLayerOrder) {
    if (layers_present.count(std::string(layer))) continue;
    items.push_back({number++, "content", std::string(layer),
                     "No node covers the '" + std::string(layer) +
                         "' layer of the threshold decomposition. Is a key variable missing here?"});
  }
  return items;
}

std::string render_checklist(std::span<const ChecklistItem> items) {
  std::string out;
  for (const auto& item : items) {
    out += std::to_string(item.number) + ". [" + item.kind + "] " + item.subject + ": " + item.question + "\n";
  }
  return out;
}

ValidityReport validity_report(const BayesNet& net, const ValidityInputs& inputs) {
  require_valid(net);
  ValidityReport report;
  try {
    report.nomological.violations = check_nomological(net);
    report.nomological.pass = report.nomological.violations.empty();
  } catch (const Error& e) {
    report.nomological.error = e.what();
  }
  if (inputs.scenarios || inputs.proxy_scores) {
    if (!inputs.scenarios || !inputs.proxy_scores) {
      throw Error(ErrorCode::invalid_argument, "concurrent validity needs both scenarios and proxy scores");
    }
    report.concurrent = check_concurrent(net, *inputs.scenarios, *inputs.proxy_scores, default_threshold_node(net),
                                         inputs.concurrent_cutoff);
  }
  if (inputs.holdout) report.predictive = check_predictive(net, *inputs.holdout, inputs.predictive_target);
  report.checklist = generate_checklist(net);
  return report;
}

}  // namespace riskbn
