#pragma once

// Seeded random instances for test corpora. Graphs are a random spanning tree
// plus extra edges; costs are k / cost_den with k in [1, max_cost * cost_den].
// When the strategy space exceeds the caps the generator retries with fewer
// extra edges.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "bndg/expectation.hpp"
#include "bndg/game.hpp"
#include "bndg/rng.hpp"

namespace bndg {

struct GenParams {
  GameKind kind = GameKind::multicast;
  std::size_t nodes = 5;
  std::size_t players = 2;
  std::size_t types = 2;        // support size per player
  std::size_t extra_edges = 2;  // beyond the spanning tree
  std::size_t arity = 3;        // hypergraph-cover edge size
  bool iid = true;
  bool independent_decisions = false;  // multicast: player i on {v_i, r}
  std::int64_t max_cost = 4;
  std::int64_t cost_den = 2;
  std::uint64_t seed = 0;
};

namespace detail {

inline Rational random_cost(CounterRng& rng, const GenParams& p) {
  return Rational(rng.between(1, p.max_cost * p.cost_den), p.cost_den);
}

inline std::vector<std::size_t> draw_distinct(CounterRng& rng, std::size_t pool, std::size_t count) {
  std::vector<std::size_t> all(pool);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < count && !all.empty(); ++k) {
    std::size_t j = rng.below(all.size());
    out.push_back(all[j]);
    all.erase(all.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return out;
}

inline std::vector<Rational> random_probs(CounterRng& rng, std::size_t count) {
  std::vector<std::int64_t> w(count);
  std::int64_t total = 0;
  for (auto& x : w) total += x = rng.between(1, 3);
  std::vector<Rational> out;
  for (auto x : w) out.emplace_back(x, total);
  return out;
}

inline std::vector<GameType> candidate_types(const GenParams& p) {
  std::vector<GameType> out;
  std::size_t n = p.nodes;
  switch (p.kind) {
    case GameKind::multicast:
      for (NodeId v = 1; v < n; ++v) out.push_back(multicast_type(v));
      break;
    case GameKind::source_sink:
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
          if (u != v) out.push_back(pair_type(u, v));
        }
      }
      break;
    case GameKind::vertex_cover:
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) out.push_back(cover_type({u, v}));
      }
      break;
    case GameKind::hypergraph_cover: {
      std::size_t d = std::min(p.arity, n);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != d) continue;
        std::vector<NodeId> h;
        for (NodeId v = 0; v < n; ++v) {
          if (mask >> v & 1) h.push_back(v);
        }
        out.push_back(GameType{h});
      }
      break;
    }
  }
  return out;
}

inline PlayerSpec random_player(CounterRng& rng, const std::vector<GameType>& pool, std::size_t types) {
  auto pick = draw_distinct(rng, pool.size(), types);
  std::sort(pick.begin(), pick.end());
  auto probs = random_probs(rng, pick.size());
  PlayerSpec spec;
  for (std::size_t k = 0; k < pick.size(); ++k) spec.distribution.push_back({pool[pick[k]], probs[k]});
  return spec;
}

/// Strategy-space and table sizes the exhaustive searches would need.
inline bool within_caps(const GameInstance& inst) {
  if (support_size(inst) > inst.caps.support) return false;
  ActionCatalog cat;
  try {
    cat = build_catalog(inst);
  } catch (const Error&) {
    return false;
  }
  std::uint64_t space = 1;
  for (const auto& per : cat) {
    for (const auto& acts : per) space = saturating_mul(space, acts.size());
  }
  if (space > inst.caps.strategies) return false;
  std::uint64_t entries = 0;
  for_each_type_profile(inst, [&](const TypeProfile& idx, const Rational&) {
    std::uint64_t joint = 1;
    for (std::size_t i = 0; i < idx.size(); ++i) joint = saturating_mul(joint, cat[i][idx[i]].size());
    entries = joint == UINT64_MAX || entries + joint < entries ? UINT64_MAX : entries + joint;
  });
  return entries <= inst.caps.table_entries;
}

}  // namespace detail

inline GameInstance generate_instance(const GenParams& p) {
  using namespace detail;
  if (p.nodes < 2 || p.players < 1 || p.types < 1 || p.max_cost < 1 || p.cost_den < 1) {
    throw Error(ErrorCode::invalid_argument, "generator needs nodes >= 2 and positive players, types and costs");
  }
  if (p.kind == GameKind::hypergraph_cover && p.arity > p.nodes) {
    throw Error(ErrorCode::invalid_argument, "hyperedge arity exceeds the node count");
  }
  if (p.independent_decisions && p.kind != GameKind::multicast) {
    throw Error(ErrorCode::invalid_argument, "the independent-decisions model is a multicast model");
  }
  auto pool = candidate_types(p);
  for (std::size_t extra = p.extra_edges, attempt = 0;; ++attempt) {
    CounterRng rng(p.seed, attempt);
    GameInstance inst;
    inst.kind = p.kind;
    if (is_graph_game(p.kind)) {
      inst.graph.add_node(p.kind == GameKind::multicast ? "r" : "v0");
      for (std::size_t v = 1; v < p.nodes; ++v) inst.graph.add_node("v" + std::to_string(v));
      if (p.kind == GameKind::multicast) inst.graph.set_root(0);
      for (NodeId v = 1; v < p.nodes; ++v) inst.graph.add_edge(rng.below(v), v, random_cost(rng, p));
      std::vector<std::pair<NodeId, NodeId>> free;
      for (NodeId u = 0; u < p.nodes; ++u) {
        for (NodeId v = u + 1; v < p.nodes; ++v) {
          if (!inst.graph.edge_between(u, v)) free.emplace_back(u, v);
        }
      }
      for (std::size_t k = 0; k < extra && !free.empty(); ++k) {
        std::size_t j = rng.below(free.size());
        inst.graph.add_edge(free[j].first, free[j].second, random_cost(rng, p));
        free.erase(free.begin() + static_cast<std::ptrdiff_t>(j));
      }
    } else {
      for (std::size_t v = 0; v < p.nodes; ++v) {
        inst.cover.names.push_back("u" + std::to_string(v));
        inst.cover.costs.push_back(random_cost(rng, p));
      }
    }
    if (p.independent_decisions) {
      for (std::size_t i = 0; i < p.players; ++i) {
        NodeId v = 1 + i % (p.nodes - 1);
        Rational q(rng.between(1, 3), 4);
        inst.players.push_back(PlayerSpec{{{multicast_type(0), Rational(1) - q}, {multicast_type(v), q}}});
      }
    } else if (p.iid) {
      inst.players.assign(p.players, random_player(rng, pool, p.types));
    } else {
      for (std::size_t i = 0; i < p.players; ++i) inst.players.push_back(random_player(rng, pool, p.types));
    }
    validate(inst);
    if (within_caps(inst)) return inst;
    if (extra == 0 || !is_graph_game(p.kind)) {
      throw Error(ErrorCode::too_large, "generated instance exceeds the enumeration caps");
    }
    --extra;
  }
}

}  // namespace bndg
