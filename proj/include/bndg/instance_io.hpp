#pragma once

// JSON instance and strategy files.
//
//   {"version": 1, "kind": "multicast",
//    "graph": {"nodes": ["r", "a"], "root": "r", "edges": [{"u": "r", "v": "a", "cost": "3/2"}]},
//    "players": [{"distribution": [{"type": "a", "prob": "1"}]}],
//    "caps": {"strategies": 1000}}
//
// Cover games use "cover": {"node_costs": [{"node": "u", "cost": "1"}], "hyperedges": [["u", "v"]]}.
// Types are a node name (multicast), a [source, sink] pair, or a node list (covers).
// Rationals are "p/q" or integer strings; JSON integers are accepted too.

#include <string>
#include <string_view>

#include <json.hpp>

#include "bndg/game.hpp"

namespace bndg {

using Json = nlohmann::json;

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports the byte just past the offending token
    throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
}

inline const Json& member(const Json& obj, const char* key, const std::string& field) {
  if (!obj.is_object()) throw ValidationError(field, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(field + "." + key, "missing field");
  return *it;
}

inline const Json* optional_member(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline const Json& array_of(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field, "expected an array");
  return j;
}

inline std::string string_of(const Json& j, const std::string& field) {
  if (!j.is_string()) throw ValidationError(field, "expected a string");
  return j.get<std::string>();
}

inline Rational rational_of(const Json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw ValidationError(field, e.what());
  }
  throw ValidationError(field, "expected a rational string \"p/q\"");
}

inline std::uint64_t count_of(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned()) throw ValidationError(field, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline NodeId node_of(const GameInstance& inst, const Json& j, const std::string& field) {
  std::string name = string_of(j, field);
  auto v = is_graph_game(inst.kind) ? inst.graph.find(name) : inst.cover.find(name);
  if (!v) throw ValidationError(field, "unknown node '" + name + "'");
  return *v;
}

inline GameType type_of(const GameInstance& inst, const Json& j, const std::string& field) {
  switch (inst.kind) {
    case GameKind::multicast: return multicast_type(node_of(inst, j, field));
    case GameKind::source_sink: {
      if (!j.is_array() || j.size() != 2) throw ValidationError(field, "expected [source, sink]");
      return pair_type(node_of(inst, j[0], field + "[0]"), node_of(inst, j[1], field + "[1]"));
    }
    case GameKind::vertex_cover:
    case GameKind::hypergraph_cover: {
      std::vector<NodeId> nodes;
      for (std::size_t k = 0; k < array_of(j, field).size(); ++k) {
        nodes.push_back(node_of(inst, j[k], field + "[" + std::to_string(k) + "]"));
      }
      return cover_type(std::move(nodes));
    }
  }
  return {};
}

inline Json type_json(const GameInstance& inst, const GameType& t) {
  if (inst.kind == GameKind::multicast) return inst.node_name(t.nodes.at(0));
  Json arr = Json::array();
  for (NodeId v : t.nodes) arr.push_back(inst.node_name(v));
  return arr;
}

inline void read_caps(const Json& j, Caps& caps) {
  if (!j.is_object()) throw ValidationError("caps", "expected an object");
  for (const auto& [key, value] : j.items()) {
    std::string field = "caps." + key;
    if (key == "strategies") caps.strategies = count_of(value, field);
    else if (key == "support") caps.support = count_of(value, field);
    else if (key == "forest_edges") caps.forest_edges = count_of(value, field);
    else if (key == "cover_nodes") caps.cover_nodes = count_of(value, field);
    else if (key == "table_entries") caps.table_entries = count_of(value, field);
    else if (key == "actions_per_type") caps.actions_per_type = count_of(value, field);
    else throw ValidationError(field, "unknown cap");
  }
}

}  // namespace detail

/// Parses and validates an instance document.
inline GameInstance parse_instance(std::string_view text) {
  using namespace detail;
  Json doc = parse_json(text);
  if (!doc.is_object()) throw ValidationError("$", "expected a top-level object");
  const Json& version = member(doc, "version", "$");
  if (!version.is_number_integer() || version.get<std::int64_t>() != 1) {
    throw ValidationError("version", "only version 1 is supported");
  }
  GameInstance inst;
  auto kind = parse_kind(string_of(member(doc, "kind", "$"), "kind"));
  if (!kind) throw ValidationError("kind", "unknown game kind");
  inst.kind = *kind;

  if (is_graph_game(inst.kind)) {
    const Json& g = member(doc, "graph", "$");
    const Json& nodes = array_of(member(g, "nodes", "graph"), "graph.nodes");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      std::string field = "graph.nodes[" + std::to_string(k) + "]";
      try {
        inst.graph.add_node(string_of(nodes[k], field));
      } catch (const ValidationError&) {
        throw;
      } catch (const Error& e) {
        throw ValidationError(field, e.what());
      }
    }
    if (const Json* root = optional_member(g, "root")) inst.graph.set_root(node_of(inst, *root, "graph.root"));
    const Json& edges = array_of(member(g, "edges", "graph"), "graph.edges");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      std::string field = "graph.edges[" + std::to_string(k) + "]";
      NodeId u = node_of(inst, member(edges[k], "u", field), field + ".u");
      NodeId v = node_of(inst, member(edges[k], "v", field), field + ".v");
      Rational cost = rational_of(member(edges[k], "cost", field), field + ".cost");
      try {
        inst.graph.add_edge(u, v, cost);
      } catch (const Error& e) {
        throw ValidationError(field, e.what());
      }
    }
  } else {
    const Json& c = member(doc, "cover", "$");
    const Json& costs = array_of(member(c, "node_costs", "cover"), "cover.node_costs");
    for (std::size_t k = 0; k < costs.size(); ++k) {
      std::string field = "cover.node_costs[" + std::to_string(k) + "]";
      std::string name = string_of(member(costs[k], "node", field), field + ".node");
      if (inst.cover.find(name)) throw ValidationError(field + ".node", "duplicate node id '" + name + "'");
      inst.cover.names.push_back(name);
      inst.cover.costs.push_back(rational_of(member(costs[k], "cost", field), field + ".cost"));
    }
    if (const Json* hyper = optional_member(c, "hyperedges")) {
      for (std::size_t k = 0; k < array_of(*hyper, "cover.hyperedges").size(); ++k) {
        std::string field = "cover.hyperedges[" + std::to_string(k) + "]";
        auto h = type_of(inst, (*hyper)[k], field).nodes;
        if (h.empty()) throw ValidationError(field, "hyperedge must be nonempty");
        inst.cover.hyperedges.push_back(std::move(h));
      }
    }
  }

  const Json& players = array_of(member(doc, "players", "$"), "players");
  for (std::size_t i = 0; i < players.size(); ++i) {
    std::string field = "players[" + std::to_string(i) + "]";
    const Json& dist = array_of(member(players[i], "distribution", field), field + ".distribution");
    PlayerSpec spec;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      std::string f = field + ".distribution[" + std::to_string(k) + "]";
      GameType t = type_of(inst, member(dist[k], "type", f), f + ".type");
      spec.distribution.push_back({std::move(t), rational_of(member(dist[k], "prob", f), f + ".prob")});
    }
    inst.players.push_back(std::move(spec));
  }
  if (const Json* caps = optional_member(doc, "caps")) read_caps(*caps, inst.caps);
  validate(inst);
  return inst;
}

inline Json instance_json(const GameInstance& inst) {
  Json doc;
  doc["version"] = 1;
  doc["kind"] = std::string(to_string(inst.kind));
  if (is_graph_game(inst.kind)) {
    Json g;
    g["nodes"] = Json::array();
    for (const auto& name : inst.graph.names()) g["nodes"].push_back(name);
    if (inst.graph.root()) g["root"] = inst.graph.name(*inst.graph.root());
    g["edges"] = Json::array();
    for (const auto& e : inst.graph.edges()) {
      g["edges"].push_back({{"u", inst.graph.name(e.u)}, {"v", inst.graph.name(e.v)}, {"cost", e.cost.str()}});
    }
    doc["graph"] = std::move(g);
  } else {
    Json c;
    c["node_costs"] = Json::array();
    for (std::size_t v = 0; v < inst.cover.names.size(); ++v) {
      c["node_costs"].push_back({{"node", inst.cover.names[v]}, {"cost", inst.cover.costs[v].str()}});
    }
    if (!inst.cover.hyperedges.empty()) {
      c["hyperedges"] = Json::array();
      for (const auto& h : inst.cover.hyperedges) c["hyperedges"].push_back(detail::type_json(inst, GameType{h}));
    }
    doc["cover"] = std::move(c);
  }
  doc["players"] = Json::array();
  for (const auto& p : inst.players) {
    Json dist = Json::array();
    for (const auto& tw : p.distribution) dist.push_back({{"type", detail::type_json(inst, tw.type)}, {"prob", tw.prob.str()}});
    doc["players"].push_back({{"distribution", std::move(dist)}});
  }
  if (inst.caps != Caps{}) {
    doc["caps"] = {{"strategies", inst.caps.strategies},       {"support", inst.caps.support},
                   {"forest_edges", inst.caps.forest_edges},   {"cover_nodes", inst.caps.cover_nodes},
                   {"table_entries", inst.caps.table_entries}, {"actions_per_type", inst.caps.actions_per_type}};
  }
  return doc;
}

inline std::string serialize_instance(const GameInstance& inst) { return instance_json(inst).dump(2) + "\n"; }

/// Structural equality of two instances (names, ids, costs, distributions, caps).
inline bool same_instance(const GameInstance& a, const GameInstance& b) {
  if (a.kind != b.kind || a.players != b.players || a.caps != b.caps) return false;
  if (is_graph_game(a.kind)) {
    const auto &ga = a.graph, &gb = b.graph;
    if (ga.root() != gb.root() || ga.edge_count() != gb.edge_count()) return false;
    if (!std::equal(ga.names().begin(), ga.names().end(), gb.names().begin(), gb.names().end())) return false;
    for (EdgeId e = 0; e < ga.edge_count(); ++e) {
      const auto &x = ga.edge(e), &y = gb.edge(e);
      if (x.u != y.u || x.v != y.v || x.cost != y.cost) return false;
    }
    return true;
  }
  return a.cover.names == b.cover.names && a.cover.costs == b.cover.costs && a.cover.hyperedges == b.cover.hyperedges;
}

// ---------------------------------------------------------------------------
// Strategy files: {"players": [{"strategy": [{"type": ..., "action": [node, ...]}]}]}
// Path actions list their node sequence; cover actions list the chosen node.

inline Json action_json(const GameInstance& inst, const Action& a) {
  Json nodes = Json::array();
  if (is_graph_game(inst.kind)) {
    if (!a.elements.empty()) {
      for (NodeId v : a.path) nodes.push_back(inst.node_name(v));
    }
  } else {
    for (auto v : a.elements) nodes.push_back(inst.node_name(v));
  }
  return nodes;
}

inline Json strategy_json(const GameInstance& inst, const StrategyProfile& s) {
  Json players = Json::array();
  for (std::size_t i = 0; i < s.actions.size(); ++i) {
    Json entries = Json::array();
    for (std::size_t k = 0; k < s.actions[i].size(); ++k) {
      const Action& a = s.actions[i][k];
      entries.push_back({{"type", detail::type_json(inst, inst.players[i].distribution[k].type)},
                         {"action", action_json(inst, a)},
                         {"cost", a.cost.str()}});
    }
    players.push_back({{"strategy", std::move(entries)}});
  }
  return {{"players", std::move(players)}};
}

inline StrategyProfile parse_strategy(const GameInstance& inst, std::string_view text) {
  using namespace detail;
  Json doc = parse_json(text);
  const Json& players = array_of(member(doc, "players", "$"), "players");
  if (players.size() != inst.player_count()) throw ValidationError("players", "player count differs from the instance");
  auto cat = build_catalog(inst);
  StrategyProfile s;
  s.actions.resize(inst.player_count());
  for (std::size_t i = 0; i < players.size(); ++i) {
    std::string field = "players[" + std::to_string(i) + "].strategy";
    const Json& entries = array_of(member(players[i], "strategy", "players[" + std::to_string(i) + "]"), field);
    const auto& dist = inst.players[i].distribution;
    std::vector<std::optional<Action>> chosen(dist.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      std::string f = field + "[" + std::to_string(k) + "]";
      GameType t = type_of(inst, member(entries[k], "type", f), f + ".type");
      auto pos = std::find_if(dist.begin(), dist.end(), [&](const TypeWeight& tw) { return tw.type == t; });
      if (pos == dist.end()) throw ValidationError(f + ".type", "type is not in the player's support");
      auto slot = static_cast<std::size_t>(pos - dist.begin());
      if (chosen[slot]) throw ValidationError(f + ".type", "type listed twice");
      const Json& nodes = array_of(member(entries[k], "action", f), f + ".action");
      std::vector<std::size_t> elements;
      for (std::size_t m = 0; m < nodes.size(); ++m) {
        NodeId v = node_of(inst, nodes[m], f + ".action[" + std::to_string(m) + "]");
        if (!is_graph_game(inst.kind)) {
          elements.push_back(v);
        } else if (m > 0) {
          auto e = inst.graph.edge_between(node_of(inst, nodes[m - 1], f + ".action"), v);
          if (!e) throw ValidationError(f + ".action", "consecutive nodes are not adjacent");
          elements.push_back(*e);
        }
      }
      std::sort(elements.begin(), elements.end());
      const auto& acts = cat[i][slot];
      auto hit = std::find_if(acts.begin(), acts.end(), [&](const Action& a) { return a.elements == elements; });
      if (hit == acts.end()) throw ValidationError(f + ".action", "not a minimal feasible action for this type");
      chosen[slot] = *hit;
    }
    for (std::size_t k = 0; k < dist.size(); ++k) {
      if (!chosen[k]) throw ValidationError(field, "strategy does not cover support type '" + inst.type_name(dist[k].type) + "'");
      s.actions[i].push_back(*chosen[k]);
    }
  }
  return s;
}

}  // namespace bndg
