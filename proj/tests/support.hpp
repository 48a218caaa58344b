#pragma once

#include <string>
#include <vector>

#include "bndg/bndg.hpp"

namespace support {

using bndg::GameInstance;
using bndg::Graph;
using bndg::Rational;

/// r, a, b with (r,a) = 2, (r,b) = 2, (a,b) = 1; edge ids in that order.
inline Graph triangle() {
  Graph g({"r", "a", "b"});
  g.add_edge(0, 1, 2);
  g.add_edge(0, 2, 2);
  g.add_edge(1, 2, 1);
  g.set_root(0);
  return g;
}

inline GameInstance multicast(Graph g, std::vector<bndg::PlayerSpec> players) {
  GameInstance inst;
  inst.kind = bndg::GameKind::multicast;
  inst.graph = std::move(g);
  inst.players = std::move(players);
  bndg::validate(inst);
  return inst;
}

inline bndg::PlayerSpec point(bndg::NodeId v) { return {{{bndg::multicast_type(v), Rational(1)}}}; }

inline bndg::PlayerSpec uniform(std::vector<bndg::NodeId> nodes) {
  bndg::PlayerSpec p;
  for (auto v : nodes) p.distribution.push_back({bndg::multicast_type(v), Rational(1, static_cast<std::int64_t>(nodes.size()))});
  return p;
}

/// Connected random graph: spanning tree plus up to `extra` more edges.
/// Costs are k/2 for k in [lo, 8]; lo = 0 admits zero-cost edges.
inline Graph random_graph(bndg::CounterRng& rng, std::size_t nodes, std::size_t extra, std::int64_t lo = 1) {
  Graph g;
  for (std::size_t v = 0; v < nodes; ++v) g.add_node("n" + std::to_string(v));
  for (bndg::NodeId v = 1; v < nodes; ++v) g.add_edge(rng.below(v), v, Rational(rng.between(lo, 8), 2));
  for (std::size_t k = 0; k < extra; ++k) {
    bndg::NodeId u = rng.below(nodes), v = rng.below(nodes);
    if (u != v && !g.edge_between(u, v)) g.add_edge(u, v, Rational(rng.between(lo, 8), 2));
  }
  g.set_root(0);
  return g;
}

/// A varied suite of small generated instances of the given kind.
inline std::vector<GameInstance> suite(bndg::GameKind kind, std::size_t count, std::uint64_t seed0, bool iid_only = false) {
  std::vector<GameInstance> out;
  for (std::uint64_t k = 0; out.size() < count; ++k) {
    bndg::GenParams p;
    p.kind = kind;
    p.seed = seed0 + k;
    p.players = 1 + k % 3;
    p.types = 1 + (k / 3) % 3;
    p.nodes = kind == bndg::GameKind::source_sink || kind == bndg::GameKind::multicast ? 3 + k % 3 : 3 + k % 4;
    p.extra_edges = k % 4;
    p.iid = iid_only || k % 2 == 0;
    p.arity = 2 + k % 2;
    p.cost_den = 1 + static_cast<std::int64_t>(k % 3);
    if (kind == bndg::GameKind::hypergraph_cover && p.arity > p.nodes) p.arity = p.nodes;
    out.push_back(bndg::generate_instance(p));
  }
  return out;
}

}  // namespace support
