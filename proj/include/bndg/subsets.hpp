#pragma once

// Exhaustive minimum-cost subset search.
//
// Subsets are visited in lexicographic order of their sorted member lists
// (a prefix before its extensions), so the first minimum found is the
// lexicographically smallest one. Costs are non-negative, which lets any
// branch whose partial cost reaches the incumbent be cut.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bndg/graph.hpp"

namespace bndg {

inline constexpr std::size_t default_forest_edge_cap = 20;
inline constexpr std::size_t default_cover_node_cap = 24;

struct SubsetSearch {
  std::vector<std::size_t> members;
  Rational cost;
};

/// `feasible(chosen)` decides a leaf; `hopeless(chosen, next)` may return true
/// when no extension of `chosen` using items >= next can be feasible.
template <class Feasible, class Hopeless>
std::optional<SubsetSearch> lex_min_subset(std::span<const Rational> costs, Feasible&& feasible,
                                           Hopeless&& hopeless) {
  std::optional<SubsetSearch> best;
  std::vector<std::size_t> chosen;
  Rational cost;
  std::size_t m = costs.size();

  std::function<void(std::size_t)> visit = [&](std::size_t next) {
    if (best && cost >= best->cost) return;
    if (feasible(std::as_const(chosen))) {
      best = SubsetSearch{chosen, cost};
      return;  // extensions cost at least as much and sort later
    }
    if (hopeless(std::as_const(chosen), next)) return;
    for (std::size_t e = next; e < m; ++e) {
      chosen.push_back(e);
      cost += costs[e];
      visit(e + 1);
      cost -= costs[e];
      chosen.pop_back();
    }
  };
  visit(0);
  return best;
}

template <class Feasible>
std::optional<SubsetSearch> lex_min_subset(std::span<const Rational> costs, Feasible&& feasible) {
  return lex_min_subset(costs, std::forward<Feasible>(feasible),
                        [](const std::vector<std::size_t>&, std::size_t) { return false; });
}

inline std::vector<Rational> edge_costs(const Graph& g) {
  std::vector<Rational> c;
  c.reserve(g.edge_count());
  for (const auto& e : g.edges()) c.push_back(e.cost);
  return c;
}

/// Cheapest edge subset satisfying a monotone predicate. Test oracle for every
/// optimum computed elsewhere.
inline EdgeSet min_feasible_subset_bruteforce(const Graph& g, const std::function<bool(const EdgeSet&)>& feasible,
                                              std::size_t cap = default_forest_edge_cap) {
  if (g.edge_count() > cap) {
    throw Error(ErrorCode::too_large, std::to_string(g.edge_count()) + " edges exceed the cap of " +
                                          std::to_string(cap));
  }
  auto costs = edge_costs(g);
  auto found = lex_min_subset(costs, [&](const std::vector<std::size_t>& chosen) {
    EdgeSet s{chosen, g.cost_of(chosen)};
    return feasible(s);
  });
  if (!found) throw Error(ErrorCode::infeasible, "no edge subset satisfies the predicate");
  return EdgeSet{found->members, found->cost};
}

/// Minimum-cost edge set in which every pair is connected.
inline EdgeSet steiner_forest_exact(const Graph& g, std::span<const std::pair<NodeId, NodeId>> pairs,
                                    std::size_t cap = default_forest_edge_cap) {
  auto all = components(g);
  std::vector<std::pair<NodeId, NodeId>> need;
  for (auto [s, t] : pairs) {
    if (all.find(s) != all.find(t)) {
      throw Error(ErrorCode::disconnected, "'" + g.name(s) + "' and '" + g.name(t) + "' are not connected");
    }
    if (s != t) need.emplace_back(s, t);
  }
  if (need.empty()) return {};
  if (g.edge_count() > cap) {
    throw Error(ErrorCode::too_large, std::to_string(g.edge_count()) + " edges exceed the cap of " +
                                          std::to_string(cap));
  }
  auto costs = edge_costs(g);
  auto found = lex_min_subset(costs, [&](const std::vector<std::size_t>& chosen) {
    auto ds = components(g, chosen);
    for (auto [s, t] : need) {
      if (ds.find(s) != ds.find(t)) return false;
    }
    return true;
  });
  return EdgeSet{found->members, found->cost};
}

struct NodeCover {
  std::vector<NodeId> nodes;
  Rational cost;
};

/// Minimum-cost node set hitting every hyperedge.
inline NodeCover cover_exact(std::span<const Rational> node_costs, std::span<const std::vector<NodeId>> hyperedges,
                             std::size_t cap = default_cover_node_cap) {
  if (hyperedges.empty()) return {};
  if (node_costs.size() > cap || node_costs.size() > 63) {
    throw Error(ErrorCode::too_large, std::to_string(node_costs.size()) + " nodes exceed the cap of " +
                                          std::to_string(cap));
  }
  std::vector<std::uint64_t> masks;
  std::vector<NodeId> top;  // largest member of each hyperedge
  for (const auto& h : hyperedges) {
    if (h.empty()) throw Error(ErrorCode::invalid_argument, "empty hyperedge");
    std::uint64_t mask = 0;
    NodeId hi = 0;
    for (NodeId v : h) {
      if (v >= node_costs.size()) throw Error(ErrorCode::invalid_argument, "hyperedge node out of range");
      mask |= std::uint64_t{1} << v;
      hi = std::max(hi, v);
    }
    masks.push_back(mask);
    top.push_back(hi);
  }
  auto chosen_mask = [](const std::vector<std::size_t>& chosen) {
    std::uint64_t m = 0;
    for (auto v : chosen) m |= std::uint64_t{1} << v;
    return m;
  };
  auto found = lex_min_subset(
      node_costs,
      [&](const std::vector<std::size_t>& chosen) {
        auto m = chosen_mask(chosen);
        for (auto h : masks) {
          if ((h & m) == 0) return false;
        }
        return true;
      },
      [&](const std::vector<std::size_t>& chosen, std::size_t next) {
        auto m = chosen_mask(chosen);
        for (std::size_t k = 0; k < masks.size(); ++k) {
          if ((masks[k] & m) == 0 && top[k] < next) return true;
        }
        return false;
      });
  return NodeCover{found->members, found->cost};
}

}  // namespace bndg
