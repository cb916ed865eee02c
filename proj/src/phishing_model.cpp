#include "riskbn/phishing_model.hpp"

#include <array>
#include <sstream>

namespace riskbn {

namespace {

struct RowNote {
  ProvenanceTag tag;
  std::string text;
};

NodeDef make_node(std::string id, std::string label, std::vector<std::string> states, std::string layer,
                  std::string description, std::vector<std::string> parents,
                  std::vector<std::vector<double>> rows) {
  NodeDef n;
  n.id = std::move(id);
  n.label = std::move(label);
  n.states = std::move(states);
  n.layer = std::move(layer);
  n.description = std::move(description);
  n.cpt.parent_order = std::move(parents);
  n.cpt.rows = std::move(rows);
  return n;
}

// Appends one provenance entry per CPT row: "row k [p=s, ...]: note".
// Rows without an explicit note are marked as authored.
void annotate_rows(const BayesNet& net, NodeDef& node, const std::map<std::size_t, RowNote>& notes) {
  for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
    std::ostringstream text;
    text << "row " << r;
    if (!node.parents().empty()) {
      const auto cfg = row_config(net, node, r);
      text << " [";
      for (std::size_t k = 0; k < cfg.size(); ++k) text << (k ? ", " : "") << node.parents()[k] << "=" << cfg[k];
      text << "]";
    }
    text << ": ";
    auto it = notes.find(r);
    if (it != notes.end()) {
      text << it->second.text;
      node.provenance.push_back({text.str(), it->second.tag});
    } else {
      text << "authored value, constrained only by monotonicity in the adverse direction";
      node.provenance.push_back({text.str(), ProvenanceTag::elicited});
    }
  }
}

// Risk level for the threshold node: a deterministic risk matrix over
// volume (0-3), whether employees open the lure (0/1, weighted double) and
// automation (0/1).
std::size_t risk_level(std::size_t volume, std::size_t opens, std::size_t automated) {
  static constexpr std::array<std::size_t, 7> kLevel = {0, 1, 1, 2, 2, 3, 3};
  return kLevel[volume + 2 * opens + automated];
}

}  // namespace

BayesNet build_bundled_model() {
  BayesNet net;
  net.name = "ai-phishing-ttp-shift";
  net.version = "1.0.0";
  net.threshold_statement =
      "Intolerable when AI uplift in know-how, tooling and access lets adversaries change how they operate so "
      "quickly or so sharply that defenders cannot contain or recover from the resulting attacks. Scoped here to "
      "AI-augmented phishing.";

  net.nodes.push_back(make_node(
      "ai_tool_availability", "Availability of AI tools with offensive capability", {"limited", "widespread"},
      "affordance", "Whether capable generation and automation tooling is readily available to phishing operators.",
      {}, {{0.45, 0.55}}));
  net.nodes.push_back(make_node(
      "ai_linguistic_mastery", "AI linguistic mastery", {"basic", "expert"}, "capability",
      "Quality of model-written lures: fluent, context-aware, free of the tells of traditional phishing.", {},
      {{0.34, 0.66}}));
  net.nodes.push_back(make_node(
      "targeting_personalization", "Targeting and personalization", {"generic", "hyper_personalized"}, "ttp",
      "Degree to which lures are tailored from scraped open-source intelligence about the target.",
      {"ai_linguistic_mastery"}, {{0.58, 0.42}, {0.26, 0.74}}));
  net.nodes.push_back(make_node(
      "attack_automation", "Attack automation", {"manual", "automated"}, "ttp",
      "Whether reconnaissance, drafting and delivery run end to end without an operator.",
      {"ai_tool_availability", "ai_linguistic_mastery"},
      {{0.90, 0.10}, {0.75, 0.25}, {0.88, 0.12}, {0.15, 0.85}}));
  net.nodes.push_back(make_node(
      "phishing_volume", "Increase in AI-enabled phishing volume", {"baseline", "elevated", "high", "extreme"}, "ttp",
      "Growth in attack volume attributable to AI tooling, in four conditional states.", {"ai_tool_availability"},
      {{0.55, 0.25, 0.12, 0.08}, {0.10, 0.20, 0.30, 0.40}}));
  net.nodes.push_back(make_node(
      "technical_email_filtering", "Technical email filtering", {"weak", "strong"}, "defense",
      "Effectiveness of automated filtering against AI-crafted lures.", {}, {{0.85, 0.15}}));
  net.nodes.push_back(make_node(
      "employee_opens_malicious_email", "Employee opens a malicious email", {"no", "yes"}, "outcome",
      "Whether a targeted employee opens and engages with the lure.",
      {"ai_linguistic_mastery", "targeting_personalization", "technical_email_filtering"},
      {{0.88, 0.12},
       {0.995, 0.005},
       {0.875, 0.125},
       {0.992, 0.008},
       {0.87, 0.13},
       {0.992, 0.008},
       {0.46, 0.54},
       {0.9725, 0.0275}}));

  std::vector<std::vector<double>> threshold_rows;
  for (std::size_t v = 0; v < 4; ++v) {
    for (std::size_t o = 0; o < 2; ++o) {
      for (std::size_t a = 0; a < 2; ++a) {
        std::vector<double> row(4, 0.0);
        row[risk_level(v, o, a)] = 1.0;
        threshold_rows.push_back(std::move(row));
      }
    }
  }
  net.nodes.push_back(make_node(
      "ttp_shift_threshold", "TTP-shift risk threshold", {"Low", "Medium", "High", "Intolerable"}, "threshold",
      "Risk level of the phishing slice of the threshold, read from a deterministic risk matrix over volume, "
      "employee exposure and automation.",
      {"phishing_volume", "employee_opens_malicious_email", "attack_automation"}, std::move(threshold_rows)));
  net.threshold_nodes = {"ttp_shift_threshold"};

  const std::string click_source = "automated OSINT spear-phishing study (Heiding et al., 2024)";
  std::map<std::string, std::map<std::size_t, RowNote>> notes;
  notes["employee_opens_malicious_email"] = {
      {0, {ProvenanceTag::paper, "P(yes)=0.12, share of recipients caught by the conventional phishing control arm in the " + click_source}},
      {6, {ProvenanceTag::paper, "P(yes)=0.54, share of recipients who clicked fully automated AI spear phishing in the " +
                                     click_source}},
      {7, {ProvenanceTag::paper, "P(no)=0.9725, share of AI-crafted lures an LLM-based filter flagged in the " +
                                     click_source}},
  };
  for (std::size_t r = 0; r < 16; ++r) {
    notes["ttp_shift_threshold"][r] = {ProvenanceTag::elicited,
                                       "authored risk-matrix entry (level = table[volume + 2*opens + automated])"};
  }
  for (auto& node : net.nodes) annotate_rows(net, node, notes[node.id]);
  return net;
}

ScenarioSet bundled_scenarios() {
  ScenarioSet set;
  set.push_back({"baseline", "No evidence: the encoded default risk landscape.", {}});

  Scenario mass;
  mass.name = "mass-spear";
  mass.description = "Targeted spear phishing delivered at the scale of mass campaigns: widespread tools, "
                     "hyper-personalized lures, automated operations.";
  mass.evidence.hard = {{"ai_tool_availability", "widespread"},
                        {"targeting_personalization", "hyper_personalized"},
                        {"attack_automation", "automated"}};
  set.push_back(std::move(mass));

  Scenario hardened;
  hardened.name = "hardened-defense";
  hardened.description = "Strong AI-assisted email filtering is deployed.";
  hardened.evidence.hard = {{"technical_email_filtering", "strong"}};
  set.push_back(std::move(hardened));

  Scenario autonomy;
  autonomy.name = "gtg-style-autonomy";
  autonomy.description = "Largely autonomous operations driven by an expert-level model, in the style of the "
                         "GTG-1002 campaign.";
  autonomy.evidence.hard = {{"attack_automation", "automated"}, {"ai_linguistic_mastery", "expert"}};
  set.push_back(std::move(autonomy));
  return set;
}

std::vector<EvidenceRecord> bundled_ledger() {
  std::vector<EvidenceRecord> ledger;

  EvidenceRecord volume;
  volume.source_category = SourceCategory::historical_data;
  volume.citation = "APWG Phishing Activity Trends: 1,130,393 attacks observed in Q2 2025, a 311% increase over "
                    "the 274,681 observed in Q2 2020. Likelihood weights over volume states are an authored reading "
                    "of that growth.";
  volume.payload = LikelihoodPayload{"phishing_volume", {0.25, 0.5, 0.75, 1.0}};
  volume.date = "2025-06-30";
  ledger.push_back(std::move(volume));

  EvidenceRecord click;
  click.source_category = SourceCategory::capability_evaluation;
  click.citation = "Heiding et al. (2024): 54% of recipients clicked fully automated, OSINT-driven AI spear phishing.";
  click.payload = ExpertJudgment{"heiding2024",
                                 "employee_opens_malicious_email",
                                 {0.46, 0.54},
                                 {{"ai_linguistic_mastery", "expert"},
                                  {"targeting_personalization", "hyper_personalized"},
                                  {"technical_email_filtering", "weak"}},
                                 10.0,
                                 "measured click-through; weight is an authored equivalent sample size"};
  click.date = "2024-12-01";
  ledger.push_back(std::move(click));

  EvidenceRecord baseline;
  baseline.source_category = SourceCategory::capability_evaluation;
  baseline.citation = "Heiding et al. (2024): 12% of recipients fell for the conventional phishing control emails.";
  baseline.payload = ExpertJudgment{"heiding2024",
                                    "employee_opens_malicious_email",
                                    {0.88, 0.12},
                                    {{"ai_linguistic_mastery", "basic"},
                                     {"targeting_personalization", "generic"},
                                     {"technical_email_filtering", "weak"}},
                                    10.0,
                                    "control-arm success rate; weight is an authored equivalent sample size"};
  baseline.date = "2024-12-01";
  ledger.push_back(std::move(baseline));

  EvidenceRecord detect;
  detect.source_category = SourceCategory::red_teaming;
  detect.citation = "Heiding et al. (2024): an LLM-based filter flagged 97.25% of AI-crafted phishing emails, with "
                    "zero false alarms.";
  detect.payload = ExpertJudgment{"heiding2024",
                                  "employee_opens_malicious_email",
                                  {0.9725, 0.0275},
                                  {{"ai_linguistic_mastery", "expert"},
                                   {"targeting_personalization", "hyper_personalized"},
                                   {"technical_email_filtering", "strong"}},
                                  10.0,
                                  "detection rate read as P(not opened | strong filtering)"};
  detect.date = "2024-12-01";
  ledger.push_back(std::move(detect));
  return ledger;
}

std::map<std::string, bool> bundled_adverse_direction() {
  return {{"ai_tool_availability", true},
          {"ai_linguistic_mastery", true},
          {"targeting_personalization", true},
          {"attack_automation", true},
          {"phishing_volume", true},
          {"technical_email_filtering", false},
          {"employee_opens_malicious_email", true},
          {"ttp_shift_threshold", true}};
}

std::vector<std::string> monotone_audit(const BayesNet& net, const std::map<std::string, bool>& adverse_ascending) {
  std::vector<std::string> failures;
  auto ascending = [&](const std::string& id) {
    auto it = adverse_ascending.find(id);
    return it == adverse_ascending.end() ? true : it->second;
  };
  for (const auto& child : net.nodes) {
    const auto& parents = child.parents();
    const std::size_t k = child.cardinality();
    // Tail mass P(child state is at least as adverse as the t-th least adverse).
    auto tail = [&](const std::vector<double>& row, std::size_t t) {
      double s = 0.0;
      for (std::size_t j = t; j < k; ++j) s += row[ascending(child.id) ? j : k - 1 - j];
      return s;
    };
    std::vector<std::size_t> cards;
    for (const auto& p : parents) cards.push_back(net.node(p).cardinality());
    std::vector<std::size_t> strides(parents.size(), 1);
    for (std::size_t q = parents.size(); q-- > 1;) strides[q - 1] = strides[q] * cards[q];

    for (std::size_t row = 0; row < child.cpt.rows.size(); ++row) {
      for (std::size_t q = 0; q < parents.size(); ++q) {
        const std::size_t state = (row / strides[q]) % cards[q];
        const bool asc = ascending(parents[q]);
        // Step one state toward adverse, if possible.
        if (asc ? state + 1 >= cards[q] : state == 0) continue;
        const std::size_t worse = asc ? row + strides[q] : row - strides[q];
        for (std::size_t t = 1; t < k; ++t) {
          if (tail(child.cpt.rows[worse], t) + 1e-12 < tail(child.cpt.rows[row], t)) {
            std::ostringstream msg;
            msg << child.id << ": moving " << parents[q] << " toward its adverse state (row " << row << " -> " << worse
                << ") lowers the adverse tail at level " << t;
            failures.push_back(msg.str());
          }
        }
      }
    }
  }
  return failures;
}

}  // namespace riskbn
