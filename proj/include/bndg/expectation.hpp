#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bndg/game.hpp"
#include "bndg/steiner.hpp"
#include "bndg/subsets.hpp"

namespace bndg {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return UINT64_MAX;
  return r;
}

inline std::uint64_t support_size(const GameInstance& inst) {
  std::uint64_t total = 1;
  for (const auto& p : inst.players) total = saturating_mul(total, p.distribution.size());
  return total;
}

inline void require_support(std::uint64_t size, std::uint64_t cap) {
  if (size > cap) {
    throw Error(ErrorCode::support_too_large,
                std::to_string(size) + " type profiles exceed the cap of " + std::to_string(cap));
  }
}

/// Visits every type profile in odometer order (last player fastest) with its
/// product probability.
template <class Visit>
void for_each_type_profile(std::span<const PlayerSpec> players, std::uint64_t cap, Visit&& visit) {
  std::uint64_t total = 1;
  for (const auto& p : players) total = saturating_mul(total, p.distribution.size());
  require_support(total, cap);
  TypeProfile idx(players.size(), 0);
  while (true) {
    Rational prob(1);
    for (std::size_t i = 0; i < players.size(); ++i) prob *= players[i].distribution[idx[i]].prob;
    visit(std::as_const(idx), prob);
    std::size_t i = players.size();
    while (i > 0) {
      --i;
      if (++idx[i] < players[i].distribution.size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (players.empty()) return;
  }
}

template <class Visit>
void for_each_type_profile(const GameInstance& inst, Visit&& visit) {
  for_each_type_profile(std::span<const PlayerSpec>(inst.players), inst.caps.support, std::forward<Visit>(visit));
}

inline std::vector<GameType> realized_types(const GameInstance& inst, const TypeProfile& idx) {
  std::vector<GameType> out;
  out.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out.push_back(inst.players[i].distribution[idx[i]].type);
  return out;
}

inline ActionProfile realize(const StrategyProfile& s, const TypeProfile& idx) {
  ActionProfile a;
  a.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) a.push_back(s.at(i, idx[i]));
  return a;
}

/// K(s) = E_t[C(s(t))].
inline Rational expected_social_cost(const GameInstance& inst, const StrategyProfile& s) {
  Rational total;
  for_each_type_profile(inst, [&](const TypeProfile& idx, const Rational& p) {
    total += p * social_cost(inst, realize(s, idx));
  });
  return total;
}

/// Psi(s) = E_t[Phi(s(t))].
inline Rational expected_potential(const GameInstance& inst, const StrategyProfile& s) {
  Rational total;
  for_each_type_profile(inst, [&](const TypeProfile& idx, const Rational& p) {
    total += p * rosenthal_potential(inst, realize(s, idx));
  });
  return total;
}

/// K_i(s) = E_t[c_i(s(t))].
inline Rational expected_player_cost(const GameInstance& inst, const StrategyProfile& s, std::size_t i) {
  Rational total;
  for_each_type_profile(inst, [&](const TypeProfile& idx, const Rational& p) {
    total += p * player_cost(inst, realize(s, idx), i);
  });
  return total;
}

struct Optimum {
  std::vector<std::size_t> elements;
  Rational cost;
};

/// Cheapest ground-element set containing a feasible action for every realized type.
inline Optimum ex_post_opt(const GameInstance& inst, std::span<const GameType> types) {
  switch (inst.kind) {
    case GameKind::multicast: {
      std::vector<NodeId> terms{*inst.graph.root()};
      for (const auto& t : types) terms.push_back(t.nodes[0]);
      auto tree = steiner_tree_exact(inst.graph, terms);
      return {tree.ids, tree.cost};
    }
    case GameKind::source_sink: {
      std::vector<std::pair<NodeId, NodeId>> pairs;
      for (const auto& t : types) pairs.emplace_back(t.nodes[0], t.nodes[1]);
      auto forest = steiner_forest_exact(inst.graph, pairs, inst.caps.forest_edges);
      return {forest.ids, forest.cost};
    }
    case GameKind::vertex_cover:
    case GameKind::hypergraph_cover: {
      std::vector<std::vector<NodeId>> hyper;
      for (const auto& t : types) hyper.push_back(t.nodes);
      auto c = cover_exact(inst.cover.costs, hyper, inst.caps.cover_nodes);
      return {c.nodes, c.cost};
    }
  }
  return {};
}

/// Cost of ex_post_opt only (skips edge-set recovery for multicast).
inline Rational ex_post_opt_cost(const GameInstance& inst, std::span<const GameType> types) {
  if (inst.kind == GameKind::multicast) {
    std::vector<NodeId> terms{*inst.graph.root()};
    for (const auto& t : types) terms.push_back(t.nodes[0]);
    return steiner_tree_cost(inst.graph, terms);
  }
  return ex_post_opt(inst, types).cost;
}

/// Memoizes OPT over the set of realized types (OPT ignores multiplicity and order).
class OptCache {
 public:
  explicit OptCache(const GameInstance& inst) : inst_(&inst) {}

  const Rational& cost(std::vector<GameType> types) {
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    auto it = memo_.find(types);
    if (it == memo_.end()) it = memo_.emplace(types, ex_post_opt_cost(*inst_, types)).first;
    return it->second;
  }

 private:
  const GameInstance* inst_;
  std::map<std::vector<GameType>, Rational> memo_;
};

inline Rational expected_opt(const GameInstance& inst) {
  OptCache cache(inst);
  Rational total;
  for_each_type_profile(inst, [&](const TypeProfile& idx, const Rational& p) {
    total += p * cache.cost(realized_types(inst, idx));
  });
  return total;
}

}  // namespace bndg
