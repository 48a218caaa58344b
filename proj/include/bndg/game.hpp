#pragma once

// Bayesian network design games: instances, feasible actions, fair cost
// shares and Rosenthal's potential.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bndg/graph.hpp"
#include "bndg/rational.hpp"

namespace bndg {

enum class GameKind { multicast, source_sink, vertex_cover, hypergraph_cover };

inline std::string_view to_string(GameKind kind) {
  switch (kind) {
    case GameKind::multicast: return "multicast";
    case GameKind::source_sink: return "source-sink";
    case GameKind::vertex_cover: return "vertex-cover";
    case GameKind::hypergraph_cover: return "hypergraph-cover";
  }
  return "?";
}

inline std::optional<GameKind> parse_kind(std::string_view s) {
  if (s == "multicast") return GameKind::multicast;
  if (s == "source-sink") return GameKind::source_sink;
  if (s == "vertex-cover") return GameKind::vertex_cover;
  if (s == "hypergraph-cover") return GameKind::hypergraph_cover;
  return std::nullopt;
}

inline bool is_graph_game(GameKind kind) { return kind == GameKind::multicast || kind == GameKind::source_sink; }

/// A player's private type. multicast: {source}; source-sink: {source, sink};
/// covers: the sorted (hyper)edge.
struct GameType {
  std::vector<NodeId> nodes;

  friend auto operator<=>(const GameType&, const GameType&) = default;
  friend bool operator==(const GameType&, const GameType&) = default;
};

struct TypeWeight {
  GameType type;
  Rational prob;
};

struct PlayerSpec {
  std::vector<TypeWeight> distribution;

  friend bool operator==(const PlayerSpec& a, const PlayerSpec& b) {
    return std::equal(a.distribution.begin(), a.distribution.end(), b.distribution.begin(), b.distribution.end(),
                      [](const TypeWeight& x, const TypeWeight& y) { return x.type == y.type && x.prob == y.prob; });
  }
};

/// Cover ground set: weighted nodes and, optionally, the universe of admissible hyperedges.
struct CoverGround {
  std::vector<std::string> names;
  std::vector<Rational> costs;
  std::vector<std::vector<NodeId>> hyperedges;

  std::optional<NodeId> find(std::string_view name) const {
    for (NodeId v = 0; v < names.size(); ++v) {
      if (names[v] == name) return v;
    }
    return std::nullopt;
  }
};

struct Caps {
  std::uint64_t strategies = 10'000'000;
  std::uint64_t support = 1'000'000;
  std::size_t forest_edges = 20;
  std::size_t cover_nodes = 24;
  std::uint64_t table_entries = 4'000'000;
  std::size_t actions_per_type = 100'000;

  friend bool operator==(const Caps&, const Caps&) = default;
};

struct GameInstance {
  GameKind kind = GameKind::multicast;
  Graph graph;
  CoverGround cover;
  std::vector<PlayerSpec> players;
  Caps caps;

  std::size_t player_count() const noexcept { return players.size(); }

  std::size_t element_count() const noexcept {
    return is_graph_game(kind) ? graph.edge_count() : cover.costs.size();
  }

  const Rational& element_cost(std::size_t e) const {
    return is_graph_game(kind) ? graph.edge(e).cost : cover.costs.at(e);
  }

  std::string node_name(NodeId v) const { return is_graph_game(kind) ? graph.name(v) : cover.names.at(v); }

  std::string element_name(std::size_t e) const {
    if (!is_graph_game(kind)) return cover.names.at(e);
    const auto& edge = graph.edge(e);
    return graph.name(edge.u) + "-" + graph.name(edge.v);
  }

  std::string type_name(const GameType& t) const {
    std::string s;
    for (std::size_t k = 0; k < t.nodes.size(); ++k) {
      if (k) s += kind == GameKind::source_sink ? ">" : "|";
      s += node_name(t.nodes[k]);
    }
    return s;
  }
};

/// A minimal feasible action: sorted ground-element ids and their total cost.
/// For path actions `path` also records the node sequence.
struct Action {
  std::vector<std::size_t> elements;
  std::vector<NodeId> path;
  Rational cost;

  friend bool operator==(const Action& a, const Action& b) { return a.elements == b.elements; }
  friend bool operator<(const Action& a, const Action& b) { return a.elements < b.elements; }
};

using ActionProfile = std::vector<Action>;

/// Per player, one action for every support type (aligned with the distribution order).
struct StrategyProfile {
  std::vector<std::vector<Action>> actions;

  const Action& at(std::size_t player, std::size_t type_index) const { return actions.at(player).at(type_index); }
  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

/// Index of each player's realized type within its distribution.
using TypeProfile = std::vector<std::size_t>;

// ---------------------------------------------------------------------------
// Validation

inline void validate_type(const GameInstance& inst, const GameType& t, const std::string& field) {
  std::size_t nodes = is_graph_game(inst.kind) ? inst.graph.node_count() : inst.cover.names.size();
  for (NodeId v : t.nodes) {
    if (v >= nodes) throw ValidationError(field, "type references an unknown node");
  }
  switch (inst.kind) {
    case GameKind::multicast:
      if (t.nodes.size() != 1) throw ValidationError(field, "multicast type must be a single source node");
      break;
    case GameKind::source_sink:
      if (t.nodes.size() != 2) throw ValidationError(field, "source-sink type must be a (source, sink) pair");
      break;
    case GameKind::vertex_cover:
    case GameKind::hypergraph_cover: {
      if (inst.kind == GameKind::vertex_cover && t.nodes.size() != 2) {
        throw ValidationError(field, "vertex-cover type must be a node pair");
      }
      if (t.nodes.empty()) throw ValidationError(field, "hyperedge type must be nonempty");
      if (!std::is_sorted(t.nodes.begin(), t.nodes.end()) ||
          std::adjacent_find(t.nodes.begin(), t.nodes.end()) != t.nodes.end()) {
        throw ValidationError(field, "hyperedge nodes must be distinct (stored sorted)");
      }
      if (!inst.cover.hyperedges.empty() &&
          std::find(inst.cover.hyperedges.begin(), inst.cover.hyperedges.end(), t.nodes) ==
              inst.cover.hyperedges.end()) {
        throw ValidationError(field, "type is not one of the declared hyperedges");
      }
      break;
    }
  }
}

inline void validate(const GameInstance& inst) {
  if (inst.players.empty()) throw ValidationError("players", "at least one player is required");
  if (is_graph_game(inst.kind)) {
    if (inst.kind == GameKind::multicast && !inst.graph.root()) {
      throw ValidationError("graph.root", "multicast games need a root");
    }
    for (const auto& e : inst.graph.edges()) {
      if (e.cost.is_negative()) throw ValidationError("graph.edges", "negative edge cost");
    }
  } else {
    if (inst.cover.costs.size() != inst.cover.names.size()) {
      throw ValidationError("cover.node_costs", "cost/name count mismatch");
    }
    for (const auto& c : inst.cover.costs) {
      if (c.is_negative()) throw ValidationError("cover.node_costs", "negative node cost");
    }
  }
  std::optional<std::size_t> arity;
  for (std::size_t i = 0; i < inst.players.size(); ++i) {
    std::string field = "players[" + std::to_string(i) + "].distribution";
    const auto& dist = inst.players[i].distribution;
    if (dist.empty()) throw ValidationError(field, "empty type distribution");
    Rational total;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      std::string f = field + "[" + std::to_string(k) + "]";
      validate_type(inst, dist[k].type, f);
      if (dist[k].prob <= Rational(0) || dist[k].prob > Rational(1)) {
        throw ValidationError(f + ".prob", "support probabilities must lie in (0, 1]");
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (dist[j].type == dist[k].type) throw ValidationError(f + ".type", "duplicate support type");
      }
      if (inst.kind == GameKind::hypergraph_cover) {
        if (arity && *arity != dist[k].type.nodes.size()) {
          throw ValidationError(f + ".type", "hyperedges must have uniform size");
        }
        arity = dist[k].type.nodes.size();
      }
      total += dist[k].prob;
    }
    if (total != Rational(1)) throw ValidationError(field, "probabilities sum to " + total.str() + ", not 1");
  }
  if (inst.kind == GameKind::hypergraph_cover) {
    for (const auto& h : inst.cover.hyperedges) {
      if (arity && h.size() != *arity) throw ValidationError("cover.hyperedges", "hyperedges must have uniform size");
    }
  }
}

// ---------------------------------------------------------------------------
// Feasible actions

namespace detail {

inline void collect_paths(const Graph& g, NodeId cur, NodeId target, std::vector<bool>& on_path,
                          std::vector<NodeId>& nodes, std::vector<EdgeId>& edges, std::vector<Action>& out,
                          std::size_t cap) {
  if (cur == target) {
    Action a;
    a.elements.assign(edges.begin(), edges.end());
    std::sort(a.elements.begin(), a.elements.end());
    a.path = nodes;
    a.cost = g.cost_of(edges);
    out.push_back(std::move(a));
    if (out.size() > cap) throw Error(ErrorCode::too_large, "more than " + std::to_string(cap) + " simple paths");
    return;
  }
  for (const auto& inc : g.neighbors(cur)) {
    if (on_path[inc.neighbor]) continue;
    on_path[inc.neighbor] = true;
    nodes.push_back(inc.neighbor);
    edges.push_back(inc.edge);
    collect_paths(g, inc.neighbor, target, on_path, nodes, edges, out, cap);
    edges.pop_back();
    nodes.pop_back();
    on_path[inc.neighbor] = false;
  }
}

}  // namespace detail

/// All simple paths from u to v, ordered by their sorted edge-id lists.
inline std::vector<Action> simple_paths(const Graph& g, NodeId u, NodeId v, std::size_t cap = 100'000) {
  std::vector<Action> out;
  std::vector<bool> on_path(g.node_count(), false);
  std::vector<NodeId> nodes{u};
  std::vector<EdgeId> edges;
  on_path[u] = true;
  detail::collect_paths(g, u, v, on_path, nodes, edges, out, cap);
  std::sort(out.begin(), out.end());
  return out;
}

/// Minimal feasible actions of a player with type `t`, in lexicographic order.
/// A multicast source at the root (or a source-sink pair with equal ends) has
/// exactly one action: the empty one.
inline std::vector<Action> feasible_actions(const GameInstance& inst, std::size_t player, const GameType& t) {
  validate_type(inst, t, "players[" + std::to_string(player) + "].type");
  std::vector<Action> out;
  switch (inst.kind) {
    case GameKind::multicast:
    case GameKind::source_sink: {
      NodeId s = t.nodes[0];
      NodeId r = inst.kind == GameKind::multicast ? *inst.graph.root() : t.nodes[1];
      out = simple_paths(inst.graph, s, r, inst.caps.actions_per_type);
      break;
    }
    case GameKind::vertex_cover:
    case GameKind::hypergraph_cover:
      for (NodeId v : t.nodes) out.push_back(Action{{v}, {}, inst.cover.costs.at(v)});
      std::sort(out.begin(), out.end());
      break;
  }
  if (out.empty()) {
    throw Error(ErrorCode::no_feasible_action, "type '" + inst.type_name(t) + "' admits no feasible action");
  }
  return out;
}

/// feasible_actions for every (player, support type), computed once per distinct type.
using ActionCatalog = std::vector<std::vector<std::vector<Action>>>;

inline ActionCatalog build_catalog(const GameInstance& inst) {
  std::map<GameType, std::vector<Action>> memo;
  ActionCatalog cat(inst.player_count());
  for (std::size_t i = 0; i < inst.player_count(); ++i) {
    for (const auto& tw : inst.players[i].distribution) {
      auto it = memo.find(tw.type);
      if (it == memo.end()) it = memo.emplace(tw.type, feasible_actions(inst, i, tw.type)).first;
      cat[i].push_back(it->second);
    }
  }
  return cat;
}

// ---------------------------------------------------------------------------
// Complete-information costs

inline std::vector<std::size_t> congestion(const GameInstance& inst, const ActionProfile& profile) {
  std::vector<std::size_t> n(inst.element_count(), 0);
  for (const auto& a : profile) {
    for (auto e : a.elements) ++n.at(e);
  }
  return n;
}

/// c_i(a) = sum over e in a_i of c_e / n_e(a).
inline Rational player_cost(const GameInstance& inst, const ActionProfile& profile, std::size_t i) {
  auto n = congestion(inst, profile);
  Rational total;
  for (auto e : profile.at(i).elements) {
    total += inst.element_cost(e) / Rational(static_cast<std::int64_t>(n[e]));
  }
  return total;
}

/// C(a): total cost of every element used by somebody.
inline Rational social_cost(const GameInstance& inst, const ActionProfile& profile) {
  auto n = congestion(inst, profile);
  Rational total;
  for (std::size_t e = 0; e < n.size(); ++e) {
    if (n[e] > 0) total += inst.element_cost(e);
  }
  return total;
}

/// Rosenthal's potential: sum over e of c_e * H_{n_e(a)}.
inline Rational rosenthal_potential(const GameInstance& inst, const ActionProfile& profile) {
  auto n = congestion(inst, profile);
  Rational total;
  for (std::size_t e = 0; e < n.size(); ++e) {
    if (n[e] > 0) total += inst.element_cost(e) * harmonic(n[e]);
  }
  return total;
}

struct IdentityCheck {
  Rational lhs;
  Rational rhs;
  bool holds() const { return lhs == rhs; }
};

/// Both sides of c_i(a) - c_i(a'_i, a_-i) = Phi(a) - Phi(a'_i, a_-i).
inline IdentityCheck potential_difference_check(const GameInstance& inst, const ActionProfile& profile,
                                                std::size_t i, const Action& deviation) {
  ActionProfile moved = profile;
  moved.at(i) = deviation;
  return {player_cost(inst, profile, i) - player_cost(inst, moved, i),
          rosenthal_potential(inst, profile) - rosenthal_potential(inst, moved)};
}

inline GameType multicast_type(NodeId s) { return GameType{{s}}; }

inline GameType pair_type(NodeId s, NodeId r) { return GameType{{s, r}}; }

inline GameType cover_type(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  return GameType{std::move(nodes)};
}

}  // namespace bndg
