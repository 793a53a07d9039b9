#include "ggan/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "ggan/errors.hpp"
#include "json.hpp"

namespace ggan {
namespace {

using nlohmann::json;

json domain_to_json(const Domain& d) {
  json j;
  if (d.kind == Domain::Kind::continuous) {
    j["type"] = "continuous";
    j["dim"] = d.dim;
  } else {
    j["type"] = "categorical";
    j["K"] = d.dim;
  }
  return j;
}

Domain domain_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "continuous") return Domain::continuous(j.at("dim").get<std::size_t>());
  if (type == "categorical") return Domain::categorical(j.at("K").get<std::size_t>());
  throw GganError(Err::BadParameter, "unknown domain type " + type);
}

}  // namespace

RecognitionGraph GraphDescription::build_recognition() const {
  if (recognition_mode == "inverse") {
    if (!overrides.empty())
      throw GganError(Err::BadParameter, "overrides only apply to mean_field recognition");
    return inverse_factorization(dag);
  }
  if (recognition_mode == "mean_field") return mean_field(dag, overrides);
  throw GganError(Err::BadParameter, "unknown recognition mode " + recognition_mode);
}

std::string graph_to_json(const GraphDescription& desc) {
  json j;
  j["variables"] = json::array();
  for (const auto& v : desc.dag.nodes) {
    json entry;
    entry["name"] = v.name;
    entry["kind"] = v.kind == VarKind::latent ? "latent" : "observed";
    entry["domain"] = domain_to_json(v.domain);
    if (v.tie_group) entry["tie_group"] = *v.tie_group;
    j["variables"].push_back(entry);
  }
  j["edges"] = json::array();
  for (const auto& [p, c] : desc.dag.edges) j["edges"].push_back(json::array({p, c}));
  json rec;
  rec["mode"] = desc.recognition_mode;
  if (!desc.overrides.empty()) rec["overrides"] = desc.overrides;
  j["recognition"] = rec;
  return j.dump(2) + "\n";
}

GraphDescription graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw GganError(Err::BadParameter, std::string("bad graph description: ") + e.what());
  }
  GraphDescription desc;
  for (const auto& entry : j.at("variables")) {
    VariableSpec v;
    v.name = entry.at("name").get<std::string>();
    std::string kind = entry.at("kind").get<std::string>();
    if (kind == "latent")
      v.kind = VarKind::latent;
    else if (kind == "observed")
      v.kind = VarKind::observed;
    else
      throw GganError(Err::BadParameter, "unknown variable kind " + kind);
    v.domain = domain_from_json(entry.at("domain"));
    if (entry.contains("tie_group")) v.tie_group = entry["tie_group"].get<std::string>();
    desc.dag.nodes.push_back(v);
  }
  if (j.contains("edges"))
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2)
        throw GganError(Err::BadParameter, "edge entries must be [parent, child] pairs");
      desc.dag.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  if (j.contains("recognition")) {
    const auto& rec = j["recognition"];
    desc.recognition_mode = rec.at("mode").get<std::string>();
    if (rec.contains("overrides"))
      desc.overrides = rec["overrides"].get<std::map<std::string, std::vector<std::string>>>();
  }
  require_valid(desc.dag);
  return desc;
}

void save_graph(const std::string& path, const GraphDescription& desc) {
  std::ofstream os(path);
  if (!os) throw GganError(Err::IoError, "cannot write " + path);
  os << graph_to_json(desc);
  os.close();
  if (!os) throw GganError(Err::IoError, "write failed for " + path);
}

GraphDescription load_graph(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw GganError(Err::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return graph_from_json(buf.str());
}

}  // namespace ggan
