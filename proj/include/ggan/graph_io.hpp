#pragma once

#include <map>
#include <string>
#include <vector>

#include "ggan/graph.hpp"

namespace ggan {

// Declarative graph description backing the JSON file format:
//   variables: [{name, kind, domain: {type, dim|K}, tie_group?}]
//   edges: [[parent, child]]
//   recognition: {mode: "inverse"|"mean_field", overrides?: {latent: [obs..]}}
struct GraphDescription {
  Dag dag;
  std::string recognition_mode = "inverse";
  std::map<std::string, std::vector<std::string>> overrides;

  RecognitionGraph build_recognition() const;
  bool operator==(const GraphDescription&) const = default;
};

std::string graph_to_json(const GraphDescription& desc);
GraphDescription graph_from_json(const std::string& text);

void save_graph(const std::string& path, const GraphDescription& desc);
GraphDescription load_graph(const std::string& path);

}  // namespace ggan
