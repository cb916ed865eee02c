// Writes the bundled phishing model and its companion files in canonical
// form: export_bundled [output-dir]
#include <filesystem>
#include <iostream>
#include <variant>

#include "riskbn/analysis.hpp"
#include "riskbn/elicitation.hpp"
#include "riskbn/json_format.hpp"
#include "riskbn/network_io.hpp"
#include "riskbn/phishing_model.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  const fs::path dir = argc > 1 ? argv[1] : "models";
  try {
    fs::create_directories(dir);
    const auto net = riskbn::build_bundled_model();
    const auto ledger = riskbn::bundled_ledger();

    riskbn::ElicitationFile elicitation;
    elicitation.node_id = "employee_opens_malicious_email";
    for (const auto& rec : ledger) {
      if (auto* j = std::get_if<riskbn::ExpertJudgment>(&rec.payload)) elicitation.judgments.push_back(*j);
    }

    riskbn::write_text_file((dir / "phishing.json").string(), riskbn::save_network(net));
    riskbn::write_text_file((dir / "phishing_scenarios.json").string(),
                            riskbn::to_canonical_json(riskbn::scenarios_to_json(riskbn::bundled_scenarios())));
    riskbn::write_text_file((dir / "phishing_ledger.json").string(),
                            riskbn::to_canonical_json(riskbn::ledger_to_json(ledger)));
    riskbn::write_text_file((dir / "phishing_elicitation.json").string(),
                            riskbn::to_canonical_json(riskbn::elicitation_to_json(elicitation)));
  } catch (const std::exception& e) {
    std::cerr << "export_bundled: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
