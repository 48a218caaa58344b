#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bndg/error.hpp"
#include "bndg/rational.hpp"

namespace bndg {

using NodeId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Rational cost;

  NodeId other(NodeId w) const noexcept { return w == u ? v : u; }
};

/// Undirected graph with non-negative rational edge costs.
///
/// Node and edge identifiers are dense indices in insertion order; that order
/// is the canonical order used for every lexicographic tie-break.
class Graph {
 public:
  struct Incidence {
    NodeId neighbor;
    EdgeId edge;
  };

  Graph() = default;

  explicit Graph(std::vector<std::string> names) {
    for (auto& name : names) add_node(std::move(name));
  }

  NodeId add_node(std::string name) {
    if (find(name)) throw Error(ErrorCode::invalid_argument, "duplicate node id '" + name + "'");
    names_.push_back(std::move(name));
    adjacency_.emplace_back();
    return names_.size() - 1;
  }

  EdgeId add_edge(NodeId u, NodeId v, Rational cost) {
    check_node(u);
    check_node(v);
    if (u == v) throw Error(ErrorCode::invalid_argument, "self-loop at '" + names_[u] + "'");
    if (cost.is_negative()) throw Error(ErrorCode::invalid_argument, "negative edge cost " + cost.str());
    if (edge_between(u, v)) {
      throw Error(ErrorCode::invalid_argument, "parallel edge '" + names_[u] + "'-'" + names_[v] + "'");
    }
    EdgeId id = edges_.size();
    edges_.push_back({std::min(u, v), std::max(u, v), cost});
    insert_sorted(adjacency_[u], {v, id});
    insert_sorted(adjacency_[v], {u, id});
    return id;
  }

  EdgeId add_edge(std::string_view u, std::string_view v, Rational cost) {
    auto a = find(u);
    auto b = find(v);
    if (!a || !b) throw Error(ErrorCode::invalid_argument, "unknown edge endpoint");
    return add_edge(*a, *b, cost);
  }

  void set_root(NodeId r) {
    check_node(r);
    root_ = r;
  }
  std::optional<NodeId> root() const noexcept { return root_; }

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const std::string& name(NodeId v) const { return names_.at(v); }
  std::span<const std::string> names() const noexcept { return names_; }

  /// Incident edges ordered by neighbor id.
  std::span<const Incidence> neighbors(NodeId v) const { return adjacency_.at(v); }

  std::optional<NodeId> find(std::string_view name) const {
    for (NodeId v = 0; v < names_.size(); ++v) {
      if (names_[v] == name) return v;
    }
    return std::nullopt;
  }

  std::optional<EdgeId> edge_between(NodeId u, NodeId v) const {
    for (const auto& inc : adjacency_.at(u)) {
      if (inc.neighbor == v) return inc.edge;
    }
    return std::nullopt;
  }

  Rational cost_of(std::span<const EdgeId> ids) const {
    Rational total;
    for (EdgeId e : ids) total += edges_.at(e).cost;
    return total;
  }

 private:
  void check_node(NodeId v) const {
    if (v >= names_.size()) throw Error(ErrorCode::invalid_argument, "node index out of range");
  }

  static void insert_sorted(std::vector<Incidence>& list, Incidence inc) {
    auto it = std::lower_bound(list.begin(), list.end(), inc,
                               [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
    list.insert(it, inc);
  }

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::optional<NodeId> root_;
};

/// A set of edges kept sorted by id, together with its total cost.
struct EdgeSet {
  std::vector<EdgeId> ids;
  Rational cost;

  bool contains(EdgeId e) const { return std::binary_search(ids.begin(), ids.end(), e); }
  bool empty() const noexcept { return ids.empty(); }
  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
};

inline EdgeSet make_edge_set(const Graph& g, std::vector<EdgeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  EdgeSet s;
  s.cost = g.cost_of(ids);
  s.ids = std::move(ids);
  return s;
}

inline EdgeSet edge_union(const Graph& g, const EdgeSet& a, const EdgeSet& b) {
  std::vector<EdgeId> ids;
  ids.reserve(a.ids.size() + b.ids.size());
  std::set_union(a.ids.begin(), a.ids.end(), b.ids.begin(), b.ids.end(), std::back_inserter(ids));
  return make_edge_set(g, std::move(ids));
}

/// Lexicographic order on sorted id sequences; a proper prefix sorts first.
template <class T>
bool lex_less(std::span<const T> a, std::span<const T> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Path {
  std::vector<NodeId> nodes;  // source first
  std::vector<EdgeId> edges;  // traversal order
  Rational cost;

  EdgeSet edge_set(const Graph& g) const { return make_edge_set(g, edges); }
};

class Metric {
 public:
  Metric() = default;
  explicit Metric(std::size_t n) : n_(n), d_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  const Rational& operator()(NodeId u, NodeId v) const { return d_[u * n_ + v]; }
  Rational& at(NodeId u, NodeId v) { return d_[u * n_ + v]; }

  /// Minimum distance from x to any node of `targets`; nullopt for an empty set.
  std::optional<Rational> distance_to_set(std::span<const NodeId> targets, NodeId x) const {
    std::optional<Rational> best;
    for (NodeId y : targets) {
      const Rational& d = (*this)(y, x);
      if (!best || d < *best) best = d;
    }
    return best;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Rational> d_;
};

// ---------------------------------------------------------------------------
// Connectivity

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline DisjointSets components(const Graph& g, std::span<const EdgeId> ids) {
  DisjointSets ds(g.node_count());
  for (EdgeId e : ids) ds.unite(g.edge(e).u, g.edge(e).v);
  return ds;
}

inline DisjointSets components(const Graph& g) {
  DisjointSets ds(g.node_count());
  for (const auto& e : g.edges()) ds.unite(e.u, e.v);
  return ds;
}

/// True when all `nodes` lie in one component of the subgraph formed by `ids`.
inline bool connects(const Graph& g, std::span<const EdgeId> ids, std::span<const NodeId> nodes) {
  if (nodes.size() <= 1) return true;
  auto ds = components(g, ids);
  auto root = ds.find(nodes.front());
  return std::all_of(nodes.begin(), nodes.end(), [&](NodeId v) { return ds.find(v) == root; });
}

inline bool is_connected(const Graph& g) {
  if (g.node_count() <= 1) return true;
  auto ds = components(g);
  for (NodeId v = 1; v < g.node_count(); ++v) {
    if (ds.find(v) != ds.find(0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Shortest paths
//
// Ties are broken first by hop count and then by lexicographically smallest
// node sequence; with strictly positive costs the hop criterion never fires.

namespace detail {

struct Label {
  std::optional<Rational> dist;
  std::size_t hops = 0;
};

inline bool label_less(const Rational& d, std::size_t h, const Label& l) {
  if (!l.dist) return true;
  if (d != *l.dist) return d < *l.dist;
  return h < l.hops;
}

/// Multi-target Dijkstra: distance (and hop count) from every node to the nearest target.
inline std::vector<Label> distances_to(const Graph& g, const std::vector<bool>& is_target,
                                       const std::function<bool(EdgeId)>& allowed) {
  std::size_t n = g.node_count();
  std::vector<Label> label(n);
  std::vector<bool> done(n, false);
  for (NodeId v = 0; v < n; ++v) {
    if (is_target[v]) label[v] = {Rational(0), 0};
  }
  for (std::size_t round = 0; round < n; ++round) {
    std::optional<NodeId> pick;
    for (NodeId v = 0; v < n; ++v) {
      if (done[v] || !label[v].dist) continue;
      if (!pick || label_less(*label[v].dist, label[v].hops, label[*pick])) pick = v;
    }
    if (!pick) break;
    done[*pick] = true;
    for (const auto& inc : g.neighbors(*pick)) {
      if (done[inc.neighbor] || (allowed && !allowed(inc.edge))) continue;
      Rational d = *label[*pick].dist + g.edge(inc.edge).cost;
      std::size_t h = label[*pick].hops + 1;
      if (label_less(d, h, label[inc.neighbor])) label[inc.neighbor] = {d, h};
    }
  }
  return label;
}

inline Path walk_down(const Graph& g, NodeId source, const std::vector<Label>& label,
                      const std::function<bool(EdgeId)>& allowed) {
  Path path;
  path.nodes.push_back(source);
  NodeId cur = source;
  while (label[cur].hops > 0) {
    bool advanced = false;
    for (const auto& inc : g.neighbors(cur)) {
      if (allowed && !allowed(inc.edge)) continue;
      const Label& next = label[inc.neighbor];
      if (!next.dist || next.hops + 1 != label[cur].hops) continue;
      if (*next.dist + g.edge(inc.edge).cost != *label[cur].dist) continue;
      path.nodes.push_back(inc.neighbor);
      path.edges.push_back(inc.edge);
      path.cost += g.edge(inc.edge).cost;
      cur = inc.neighbor;
      advanced = true;
      break;
    }
    if (!advanced) throw Error(ErrorCode::invalid_argument, "inconsistent shortest-path labels");
  }
  return path;
}

}  // namespace detail

/// Shortest path from `source` to the nearest node with `is_target[v]`, using
/// only edges accepted by `allowed` (all edges when empty).
inline Path shortest_path_to_set(const Graph& g, NodeId source, const std::vector<bool>& is_target,
                                 const std::function<bool(EdgeId)>& allowed = {}) {
  auto label = detail::distances_to(g, is_target, allowed);
  if (!label.at(source).dist) {
    throw Error(ErrorCode::unreachable, "no path from '" + g.name(source) + "' to the target set");
  }
  return detail::walk_down(g, source, label, allowed);
}

inline Path shortest_path(const Graph& g, NodeId u, NodeId v, const std::function<bool(EdgeId)>& allowed = {}) {
  std::vector<bool> target(g.node_count(), false);
  target.at(v) = true;
  auto label = detail::distances_to(g, target, allowed);
  if (!label.at(u).dist) {
    throw Error(ErrorCode::unreachable, "Unreachable('" + g.name(u) + "', '" + g.name(v) + "')");
  }
  return detail::walk_down(g, u, label, allowed);
}

/// Shortest path restricted to the subgraph formed by `subset` (sorted edge ids).
inline Path shortest_path_within(const Graph& g, NodeId u, NodeId v, const EdgeSet& subset) {
  return shortest_path(g, u, v, [&](EdgeId e) { return subset.contains(e); });
}

/// All-pairs shortest-path distances (Floyd-Warshall).
inline Metric metric_closure(const Graph& g) {
  std::size_t n = g.node_count();
  std::vector<std::optional<Rational>> d(n * n);
  for (NodeId v = 0; v < n; ++v) d[v * n + v] = Rational(0);
  for (const auto& e : g.edges()) {
    auto& uv = d[e.u * n + e.v];
    if (!uv || e.cost < *uv) {
      uv = e.cost;
      d[e.v * n + e.u] = e.cost;
    }
  }
  for (NodeId k = 0; k < n; ++k) {
    for (NodeId i = 0; i < n; ++i) {
      if (!d[i * n + k]) continue;
      for (NodeId j = 0; j < n; ++j) {
        if (!d[k * n + j]) continue;
        Rational via = *d[i * n + k] + *d[k * n + j];
        auto& ij = d[i * n + j];
        if (!ij || via < *ij) ij = via;
      }
    }
  }
  Metric m(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (!d[i * n + j]) throw Error(ErrorCode::disconnected, "graph is not connected");
      m.at(i, j) = *d[i * n + j];
    }
  }
  return m;
}

struct SpanningTree {
  std::vector<std::pair<NodeId, NodeId>> pairs;  // u < v
  Rational cost;
};

/// Minimum spanning tree of `terminals` in the complete graph given by `m`.
/// Kruskal over pairs ordered by (distance, u, v).
inline SpanningTree mst_over_terminals(const Metric& m, std::span<const NodeId> terminals) {
  std::vector<NodeId> s(terminals.begin(), terminals.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  struct Candidate {
    Rational d;
    NodeId u, v;
  };
  std::vector<Candidate> cand;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) cand.push_back({m(s[i], s[j]), s[i], s[j]});
  }
  std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  DisjointSets ds(m.size());
  SpanningTree tree;
  for (const auto& c : cand) {
    if (ds.unite(c.u, c.v)) {
      tree.pairs.emplace_back(c.u, c.v);
      tree.cost += c.d;
    }
  }
  return tree;
}

}  // namespace bndg
