#pragma once

// File formats: model JSON, instance lines, trace NDJSON, attribution CSV,
// graph edge lists. Feature indices are 1-based in every file.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffa/enumerate.hpp"
#include "ffa/error.hpp"
#include "ffa/ffa.hpp"
#include "ffa/graphffa.hpp"
#include "ffa/model.hpp"

namespace ffa::io {

using nlohmann::json;

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number() || j.is_boolean()) return j.dump();
  throw ParseError("expected a scalar value, got " + j.dump());
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::size_t class_index(const std::vector<std::string>& classes, const json& j) {
  const auto text = scalar_text(j);
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == text) return i;
  throw ParseError("unknown class '" + text + "'");
}

inline std::size_t feature_ref(const FeatureSpace& space, const json& j) {
  if (j.is_number_integer()) {
    const auto k = j.get<long long>();
    if (k < 1 || static_cast<std::size_t>(k) > space.num_features())
      throw ParseError("feature index " + std::to_string(k) + " out of range");
    return static_cast<std::size_t>(k - 1);
  }
  const auto name = scalar_text(j);
  for (std::size_t i = 0; i < space.num_features(); ++i)
    if (space.feature(i).name == name) return i;
  throw ParseError("unknown feature '" + name + "'");
}

inline std::size_t parse_tree_node(const json& j, const FeatureSpace& space, const std::vector<std::string>& classes,
                                   DecisionTree& tree) {
  if (!j.is_object()) throw ParseError("tree node must be an object");
  if (j.contains("class")) return tree.add_leaf(class_index(classes, j.at("class")));
  if (!j.contains("feature") || !j.contains("branches")) throw ParseError("split node needs 'feature' and 'branches'");
  const auto f = feature_ref(space, j.at("feature"));
  const auto& branches = j.at("branches");
  if (!branches.is_object()) throw ParseError("'branches' must map values to subtrees");
  std::vector<std::optional<std::size_t>> children(space.domain_size(f));
  for (const auto& [key, sub] : branches.items()) {
    const auto v = space.find_value(f, key);
    if (!v) throw ParseError("branch value '" + key + "' not in domain of " + space.feature(f).name);
    children[*v] = parse_tree_node(sub, space, classes, tree);
  }
  std::optional<std::size_t> otherwise;
  for (auto& c : children) {
    if (c) continue;
    if (!j.contains("otherwise"))
      throw ParseError("split on " + space.feature(f).name + " does not cover its whole domain");
    if (!otherwise) otherwise = parse_tree_node(j.at("otherwise"), space, classes, tree);
    c = otherwise;
  }
  std::vector<std::size_t> kids;
  for (auto& c : children) kids.push_back(*c);
  return tree.add_split(f, std::move(kids));
}

inline json tree_node_json(const DecisionTree& tree, std::size_t n, const FeatureSpace& space,
                           const std::vector<std::string>& classes) {
  const auto& nd = tree.node(n);
  if (nd.leaf) return json{{"class", classes[nd.label]}};
  json branches = json::object();
  for (std::size_t v = 0; v < nd.children.size(); ++v)
    branches[space.feature(nd.feature).domain[v]] = tree_node_json(tree, nd.children[v], space, classes);
  return json{{"feature", space.feature(nd.feature).name}, {"branches", branches}};
}

}  // namespace detail

/// Reads the versioned model document:
///   {version, features:[{name, domain:[...]}], classes:[...],
///    model:{type:"tree", root:{feature, branches:{value: node}, otherwise?} | {class}}
///        | {type:"table", outputs:[class per point in lexicographic order]}}
inline Classifier model_from_json(const json& doc, std::uint64_t space_cap = kDefaultSpaceCap) {
  try {
    if (!doc.is_object()) throw ParseError("model document must be an object");
    if (doc.value("version", 0) != kModelFormatVersion)
      throw ParseError("unsupported model version " + doc.value("version", json(nullptr)).dump());
    std::vector<Feature> features;
    for (const auto& f : doc.at("features")) {
      Feature feat{detail::scalar_text(f.at("name")), {}};
      for (const auto& v : f.at("domain")) feat.domain.push_back(detail::scalar_text(v));
      features.push_back(std::move(feat));
    }
    FeatureSpace space(std::move(features), space_cap);
    std::vector<std::string> classes;
    for (const auto& c : doc.at("classes")) classes.push_back(detail::scalar_text(c));
    const auto& m = doc.at("model");
    const auto type = m.at("type").get<std::string>();
    if (type == "table") {
      TruthTable t;
      for (const auto& c : m.at("outputs")) t.outputs.push_back(detail::class_index(classes, c));
      return Classifier(std::move(space), std::move(classes), std::move(t));
    }
    if (type == "tree") {
      DecisionTree tree;
      detail::parse_tree_node(m.at("root"), space, classes, tree);
      return Classifier(std::move(space), std::move(classes), std::move(tree));
    }
    throw ParseError("unknown model type '" + type + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("invalid model: ") + e.what());
  }
}

inline json model_to_json(const Classifier& model) {
  json features = json::array();
  for (const auto& f : model.space().features()) features.push_back(json{{"name", f.name}, {"domain", f.domain}});
  json m;
  if (const auto* tree = model.tree()) {
    m = json{{"type", "tree"}, {"root", detail::tree_node_json(*tree, tree->root(), model.space(), model.classes())}};
  } else {
    json outs = json::array();
    for (auto c : std::get<TruthTable>(model.representation()).outputs) outs.push_back(model.classes()[c]);
    m = json{{"type", "table"}, {"outputs", outs}};
  }
  return json{{"version", kModelFormatVersion}, {"features", features}, {"classes", model.classes()}, {"model", m}};
}

inline Classifier load_model(const std::string& path, std::uint64_t space_cap = kDefaultSpaceCap) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("model file " + path + ": " + e.what());
  }
  return model_from_json(doc, space_cap);
}

/// "v1,...,vm[,label]": values by their domain text. When the label is
/// given it must match the model's prediction.
inline Instance parse_instance(const std::string& line, const Classifier& model) {
  const auto parts = detail::split(detail::trim(line), ',');
  const auto m = model.num_features();
  if (parts.size() != m && parts.size() != m + 1)
    throw ParseError("instance needs " + std::to_string(m) + " values plus an optional label, got " +
                     std::to_string(parts.size()) + " fields");
  Point p(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto v = model.space().find_value(i, parts[i]);
    if (!v) throw ParseError("value '" + parts[i] + "' not in domain of " + model.space().feature(i).name);
    p[i] = *v;
  }
  Instance inst = make_instance(model, std::move(p));
  if (parts.size() == m + 1 && parts[m] != model.classes()[inst.label])
    throw ParseError("instance label '" + parts[m] + "' differs from the model prediction '" +
                     model.classes()[inst.label] + "'");
  return inst;
}

inline std::string format_instance(const Instance& inst, const Classifier& model) {
  std::string s;
  for (std::size_t i = 0; i < inst.point.size(); ++i) s += model.space().feature(i).domain[inst.point[i]] + ",";
  return s + model.classes()[inst.label];
}

inline json event_to_json(const TraceEvent& e, bool logical_time) {
  json features = json::array();
  for (auto i : e.features.indices()) features.push_back(i + 1);
  json t = logical_time ? json(static_cast<long long>(std::llround(e.t))) : json(e.t);
  return json{{"t", t}, {"kind", to_string(e.kind)}, {"features", features}};
}

/// One JSON object per line: {"t":..., "kind":"AXp"|"CXp"|"switch", "features":[...]}.
/// Logical-time traces write t as an integer.
inline void write_trace(std::ostream& out, const EnumerationTrace& trace) {
  for (const auto& e : trace.events) out << event_to_json(e, trace.logical_time).dump() << '\n';
}

/// Inverse of write_trace. A trace is logical when it is non-empty and every
/// t is an integer.
inline EnumerationTrace read_trace(std::istream& in, std::size_t num_features) {
  EnumerationTrace trace;
  trace.num_features = num_features;
  bool all_integer = true;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      TraceEvent e;
      const auto& t = j.at("t");
      if (!t.is_number()) throw ParseError("t must be a number");
      all_integer = all_integer && t.is_number_integer();
      e.t = t.get<double>();
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "AXp")
        e.kind = EventKind::axp;
      else if (kind == "CXp")
        e.kind = EventKind::cxp;
      else if (kind == "switch")
        e.kind = EventKind::phase_switch;
      else
        throw ParseError("unknown event kind '" + kind + "'");
      for (const auto& f : j.at("features")) {
        const auto k = f.get<long long>();
        if (k < 1 || static_cast<std::size_t>(k) > num_features) throw ParseError("feature index out of range");
        e.features.insert(static_cast<std::size_t>(k - 1));
      }
      trace.events.push_back(e);
    } catch (const json::exception& ex) {
      throw ParseError("trace line " + std::to_string(lineno) + ": " + ex.what());
    } catch (const ParseError& ex) {
      throw ParseError("trace line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  trace.logical_time = !trace.events.empty() && all_integer;
  return trace;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// "feature,value" header then one row per feature.
inline void write_ffa_csv(std::ostream& out, const std::vector<double>& values) {
  out << "feature,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << (i + 1) << ',' << format_double(values[i]) << '\n';
}

inline std::vector<double> read_ffa_csv(std::istream& in) {
  std::vector<std::pair<std::size_t, double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("feature", 0) == 0) continue;
    }
    const auto parts = detail::split(line, ',');
    if (parts.size() < 2) throw ParseError("attribution row needs feature,value: '" + line + "'");
    try {
      rows.emplace_back(std::stoul(parts[0]), std::stod(parts[1]));
    } catch (const std::exception&) {
      throw ParseError("bad attribution row '" + line + "'");
    }
  }
  std::vector<double> values(rows.size(), 0.0);
  std::vector<bool> seen(rows.size(), false);
  for (auto [f, v] : rows) {
    if (f < 1 || f > rows.size() || seen[f - 1]) throw ParseError("attribution rows must list features 1..m once");
    seen[f - 1] = true;
    values[f - 1] = v;
  }
  return values;
}

/// One edge "u v" per line; a lone token declares an isolated vertex; '#'
/// starts a comment. Vertices are numbered in order of first appearance.
inline Graph parse_edge_list(std::istream& in) {
  Graph g;
  auto vertex = [&](const std::string& name) {
    if (auto v = g.find(name)) return *v;
    return g.add_vertex(name);
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() > 2) throw ParseError("edge list line " + std::to_string(lineno) + ": expected 'u v'");
    const auto u = vertex(tok[0]);
    if (tok.size() == 1) continue;
    const auto v = vertex(tok[1]);
    if (u == v) throw ParseError("edge list line " + std::to_string(lineno) + ": self-loop");
    if (g.has_edge(u, v)) throw ParseError("edge list line " + std::to_string(lineno) + ": duplicate edge");
    g.add_edge(u, v);
  }
  return g;
}

}  // namespace ffa::io
