#pragma once

// Exact Steiner trees by the Dreyfus-Wagner subset dynamic program.
//
// steiner_tree_cost() runs the DP once. steiner_tree_exact() additionally
// recovers the lexicographically smallest optimal connected edge set by
// deciding edges in id order: edge e is kept iff some optimal solution
// agrees with every decision so far and contains e. Each decision is one
// DP run on a modified graph (rejected edges removed, kept edges free, one
// representative of every kept component added as a terminal).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bndg/graph.hpp"

namespace bndg {

namespace detail {

using OptCost = std::optional<Rational>;

inline void relax(OptCost& slot, const Rational& value) {
  if (!slot || value < *slot) slot = value;
}

/// Dreyfus-Wagner on explicit per-edge costs; nullopt entries are absent edges.
/// Returns nullopt when the terminals are not mutually reachable.
inline OptCost dreyfus_wagner(const Graph& g, std::span<const OptCost> cost, std::span<const NodeId> terminals) {
  std::size_t n = g.node_count();
  std::vector<NodeId> term(terminals.begin(), terminals.end());
  std::sort(term.begin(), term.end());
  term.erase(std::unique(term.begin(), term.end()), term.end());
  if (term.size() <= 1) return Rational(0);
  if (term.size() > 20) throw Error(ErrorCode::too_large, "more than 20 Steiner terminals");

  std::vector<OptCost> d(n * n);
  for (NodeId v = 0; v < n; ++v) d[v * n + v] = Rational(0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!cost[e]) continue;
    relax(d[g.edge(e).u * n + g.edge(e).v], *cost[e]);
    relax(d[g.edge(e).v * n + g.edge(e).u], *cost[e]);
  }
  for (NodeId k = 0; k < n; ++k) {
    for (NodeId i = 0; i < n; ++i) {
      if (!d[i * n + k]) continue;
      for (NodeId j = 0; j < n; ++j) {
        if (d[k * n + j]) relax(d[i * n + j], *d[i * n + k] + *d[k * n + j]);
      }
    }
  }
  NodeId last = term.back();
  for (std::size_t i = 0; i + 1 < term.size(); ++i) {
    if (!d[term[i] * n + last]) return std::nullopt;
  }

  std::size_t k = term.size() - 1;
  std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<OptCost> dp((full + 1) * n);
  for (std::size_t i = 0; i < k; ++i) {
    for (NodeId v = 0; v < n; ++v) dp[(std::size_t{1} << i) * n + v] = d[term[i] * n + v];
  }
  std::vector<OptCost> merged(n);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;
    std::fill(merged.begin(), merged.end(), std::nullopt);
    std::size_t low = mask & (~mask + 1);
    for (std::size_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
      if ((sub & low) == 0) continue;  // each split once
      std::size_t rest = mask ^ sub;
      for (NodeId u = 0; u < n; ++u) {
        const auto& a = dp[sub * n + u];
        const auto& b = dp[rest * n + u];
        if (a && b) relax(merged[u], *a + *b);
      }
    }
    for (NodeId v = 0; v < n; ++v) {
      OptCost best;
      for (NodeId u = 0; u < n; ++u) {
        if (merged[u] && d[u * n + v]) relax(best, *merged[u] + *d[u * n + v]);
      }
      dp[mask * n + v] = best;
    }
  }
  return dp[full * n + last];
}

inline std::vector<OptCost> plain_costs(const Graph& g) {
  std::vector<OptCost> c;
  c.reserve(g.edge_count());
  for (const auto& e : g.edges()) c.emplace_back(e.cost);
  return c;
}

}  // namespace detail

inline Rational steiner_tree_cost(const Graph& g, std::span<const NodeId> terminals) {
  auto cost = detail::plain_costs(g);
  auto opt = detail::dreyfus_wagner(g, cost, terminals);
  if (!opt) throw Error(ErrorCode::disconnected, "Steiner terminals are not mutually reachable");
  return *opt;
}

/// Minimum-cost connected edge set spanning `terminals`; lexicographically
/// smallest among all optimal ones.
inline EdgeSet steiner_tree_exact(const Graph& g, std::span<const NodeId> terminals) {
  std::vector<NodeId> term(terminals.begin(), terminals.end());
  std::sort(term.begin(), term.end());
  term.erase(std::unique(term.begin(), term.end()), term.end());
  if (term.size() <= 1) return {};
  Rational opt = steiner_tree_cost(g, term);

  std::vector<EdgeId> kept;
  std::vector<bool> rejected(g.edge_count(), false);

  auto is_solution = [&](const std::vector<EdgeId>& ids) {
    return !ids.empty() && g.cost_of(ids) == opt && connects(g, ids, term) && [&] {
      auto ds = components(g, ids);
      auto root = ds.find(term.front());
      return std::all_of(ids.begin(), ids.end(), [&](EdgeId e) { return ds.find(g.edge(e).u) == root; });
    }();
  };

  auto extendable = [&](const std::vector<EdgeId>& trial) {
    std::vector<detail::OptCost> cost(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (!rejected[e]) cost[e] = g.edge(e).cost;
    }
    for (EdgeId e : trial) cost[e] = Rational(0);
    auto ds = components(g, trial);
    std::vector<NodeId> targets = term;
    for (EdgeId e : trial) targets.push_back(ds.find(g.edge(e).u));
    auto rest = detail::dreyfus_wagner(g, cost, targets);
    return rest && g.cost_of(trial) + *rest == opt;
  };

  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (is_solution(kept)) break;
    kept.push_back(e);
    if (!extendable(kept)) {
      kept.pop_back();
      rejected[e] = true;
    }
  }
  return EdgeSet{kept, g.cost_of(kept)};
}

}  // namespace bndg
