#include "riskbn/network_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace riskbn {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::parse_error, (path.empty() ? std::string("/") : path) + ": " + what);
}

void reject_unknown_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto k : allowed) {
      if (it.key() == k) known = true;
    }
    if (!known) fail(path, "unknown field '" + it.key() + "'");
  }
}

const Json& require(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
  return *it;
}

std::string get_string(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::string optional_string(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  return get_string(*it, path + "/" + key);
}

std::vector<std::string> get_string_list(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_string(v[i], path + "/" + std::to_string(i)));
  return out;
}

double get_number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

NodeDef parse_node(const Json& obj, const std::string& path, std::vector<std::string>& warnings) {
  if (!obj.is_object()) fail(path, "expected an object");
  reject_unknown_keys(obj, path,
                      {"id", "label", "states", "layer", "description", "provenance", "parents", "cpt"});
  NodeDef node;
  node.id = get_string(require(obj, path, "id"), path + "/id");
  node.label = optional_string(obj, path, "label");
  node.states = get_string_list(require(obj, path, "states"), path + "/states");
  node.layer = optional_string(obj, path, "layer");
  node.description = optional_string(obj, path, "description");

  if (auto it = obj.find("provenance"); it != obj.end()) {
    const std::string ppath = path + "/provenance";
    if (!it->is_array()) fail(ppath, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& p = (*it)[i];
      const std::string epath = ppath + "/" + std::to_string(i);
      if (!p.is_object()) fail(epath, "expected an object");
      reject_unknown_keys(p, epath, {"text", "tag"});
      Provenance prov;
      prov.text = get_string(require(p, epath, "text"), epath + "/text");
      std::string tag = get_string(require(p, epath, "tag"), epath + "/tag");
      auto parsed = parse_provenance_tag(tag);
      if (!parsed) fail(epath + "/tag", "unknown provenance tag '" + tag + "'");
      prov.tag = *parsed;
      node.provenance.push_back(std::move(prov));
    }
  }

  if (auto it = obj.find("parents"); it != obj.end()) {
    node.cpt.parent_order = get_string_list(*it, path + "/parents");
  }

  const std::string cpath = path + "/cpt";
  const Json& cpt = require(obj, path, "cpt");
  if (!cpt.is_array()) fail(cpath, "expected an array of rows");
  for (std::size_t r = 0; r < cpt.size(); ++r) {
    const std::string rpath = cpath + "/" + std::to_string(r);
    if (!cpt[r].is_array()) fail(rpath, "expected an array of probabilities");
    std::vector<double> row;
    double sum = 0.0;
    bool in_range = true;
    for (std::size_t k = 0; k < cpt[r].size(); ++k) {
      double p = get_number(cpt[r][k], rpath + "/" + std::to_string(k));
      if (p < 0.0 || p > 1.0) in_range = false;
      sum += p;
      row.push_back(p);
    }
    const double off = std::abs(sum - 1.0);
    if (in_range && off > kNormalizationTolerance && off <= kRenormalizeTolerance) {
      for (double& p : row) p /= sum;
      std::ostringstream msg;
      msg.precision(17);
      msg << "node '" << node.id << "' row " << r << " renormalized (sum was " << sum << ")";
      warnings.push_back(msg.str());
    }
    node.cpt.rows.push_back(std::move(row));
  }
  return node;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

ParsedNetwork network_from_json(const Json& doc) {
  if (!doc.is_object()) fail("", "expected a JSON object at top level");
  reject_unknown_keys(doc, "", {"name", "version", "threshold_statement", "nodes", "threshold_nodes"});
  ParsedNetwork parsed;
  BayesNet& net = parsed.net;
  net.name = optional_string(doc, "", "name");
  net.version = optional_string(doc, "", "version");
  net.threshold_statement = optional_string(doc, "", "threshold_statement");
  const Json& nodes = require(doc, "", "nodes");
  if (!nodes.is_array()) fail("/nodes", "expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    net.nodes.push_back(parse_node(nodes[i], "/nodes/" + std::to_string(i), parsed.warnings));
  }
  if (auto it = doc.find("threshold_nodes"); it != doc.end()) {
    net.threshold_nodes = get_string_list(*it, "/threshold_nodes");
  }
  return parsed;
}

ParsedNetwork parse_network(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse_error,
                "line " + std::to_string(line_of_offset(text, e.byte)) + ": " + std::string(e.what()));
  }
  return network_from_json(doc);
}

BayesNet load_network(std::string_view text, std::vector<std::string>* warnings) {
  ParsedNetwork parsed = parse_network(text);
  require_valid(parsed.net);
  if (warnings) *warnings = std::move(parsed.warnings);
  return std::move(parsed.net);
}

BayesNet load_network_file(const std::string& path, std::vector<std::string>* warnings) {
  return load_network(read_text_file(path), warnings);
}

Json network_to_json(const BayesNet& net) {
  Json doc = Json::object();
  doc["name"] = net.name;
  doc["version"] = net.version;
  doc["threshold_statement"] = net.threshold_statement;
  Json nodes = Json::array();
  for (const auto& node : net.nodes) {
    Json n = Json::object();
    n["id"] = node.id;
    n["label"] = node.label;
    n["states"] = node.states;
    n["layer"] = node.layer;
    n["description"] = node.description;
    Json prov = Json::array();
    for (const auto& p : node.provenance) {
      Json e = Json::object();
      e["text"] = p.text;
      e["tag"] = std::string(to_string(p.tag));
      prov.push_back(std::move(e));
    }
    n["provenance"] = std::move(prov);
    n["parents"] = node.parents();
    Json rows = Json::array();
    for (const auto& row : node.cpt.rows) {
      Json r = Json::array();
      for (double p : row) r.push_back(p);
      rows.push_back(std::move(r));
    }
    n["cpt"] = std::move(rows);
    nodes.push_back(std::move(n));
  }
  doc["nodes"] = std::move(nodes);
  doc["threshold_nodes"] = net.threshold_nodes;
  return doc;
}

std::string save_network(const BayesNet& net) { return to_canonical_json(network_to_json(net)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace riskbn
