#ifndef RELIC_SERIALIZE_HPP
#define RELIC_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "relic/engine.hpp"
#include "relic/graph.hpp"
#include "relic/semantics.hpp"

namespace relic {

using Json = nlohmann::json;

// Tagged-tree JSON forms: labels as {"op": ..., ...}, slices as
// {"nodes": [...], "arcs": [[u, label, v], ...], "input": i, "output": o},
// graphs as {"slices": [...]}.
Json label_to_json(const Label& l);
Json slice_to_json(const Slice& s);
Json graph_to_json(const Graph& g);

Label label_from_json(const Json& j);
Slice slice_from_json(const Json& j);
Graph graph_from_json(const Json& j);

Json model_to_json(const Model& m);
Model model_from_json(const Json& j);

// Versioned derivation trace; verify_derivation consumes exactly this format.
Json derivation_to_json(const Derivation& d);
Derivation derivation_from_json(const Json& j);

// DOT emission; complemented-slice arc labels become dashed sub-clusters.
std::string slice_to_dot(const Slice& s, const std::string& graph_name = "slice");
std::string graph_to_dot(const Graph& g, const std::string& graph_name = "graph");

// Compact one-line console forms.
std::string pretty_label(const Label& l);
std::string pretty_slice(const Slice& s);
std::string pretty_graph(const Graph& g);

}  // namespace relic

#endif
