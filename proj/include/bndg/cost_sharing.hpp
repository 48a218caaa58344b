#pragma once

// Strict cost-sharing schemes over client sets, and the property checks
// for competitiveness, beta-strictness and cross-monotonicity.

#include <algorithm>
#include <concepts>
#include <span>
#include <string>
#include <vector>

#include "bndg/game.hpp"
#include "bndg/graph.hpp"
#include "bndg/steiner.hpp"

namespace bndg {

using ClientSet = std::vector<NodeId>;

inline ClientSet make_client_set(std::span<const NodeId> clients) {
  ClientSet u(clients.begin(), clients.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

inline ClientSet with_client(std::span<const NodeId> u, NodeId x) {
  ClientSet out(u.begin(), u.end());
  out.push_back(x);
  return make_client_set(out);
}

/// (A, B, xi) with declared constants. Client sets passed in may contain
/// duplicates; schemes act on the underlying set.
template <class S>
concept CostSharingScheme = requires(const S& s, std::span<const NodeId> u, const EdgeSet& f, NodeId x,
                                     const GameType& t) {
  { s.approximate(u) } -> std::same_as<EdgeSet>;
  { s.augment(f, x) } -> std::same_as<EdgeSet>;
  { s.share(u, x) } -> std::same_as<Rational>;
  { s.optimum_cost(u) } -> std::same_as<Rational>;
  { s.is_solution(u, f) } -> std::same_as<bool>;
  { s.alpha() } -> std::convertible_to<Rational>;
  { s.beta() } -> std::convertible_to<Rational>;
  { s.client_of(t) } -> std::same_as<NodeId>;
  { s.name() } -> std::convertible_to<std::string>;
  { s.graph() } -> std::same_as<const Graph&>;
};

/// Rooted Steiner tree: A is the exact optimum on U + r, B is a shortest
/// path to the current tree (or r), xi(U, x) = d((U + r) - x, x) / 2.
class SteinerScheme {
 public:
  explicit SteinerScheme(const Graph& g) : g_(&g), metric_(metric_closure(g)) {
    if (!g.root()) throw Error(ErrorCode::invalid_argument, "the Steiner scheme needs a rooted graph");
    root_ = *g.root();
  }

  const Graph& graph() const noexcept { return *g_; }
  NodeId root() const noexcept { return root_; }
  const Metric& metric() const noexcept { return metric_; }
  Rational alpha() const { return Rational(1); }
  Rational beta() const { return Rational(2); }
  std::string name() const { return "steiner-tree"; }

  NodeId client_of(const GameType& t) const { return t.nodes.at(0); }

  ClientSet rooted(std::span<const NodeId> u) const { return with_client(u, root_); }

  EdgeSet approximate(std::span<const NodeId> u) const { return steiner_tree_exact(*g_, rooted(u)); }

  EdgeSet augment(const EdgeSet& f, NodeId x) const {
    std::vector<bool> target(g_->node_count(), false);
    target[root_] = true;
    for (EdgeId e : f.ids) {
      target[g_->edge(e).u] = true;
      target[g_->edge(e).v] = true;
    }
    return shortest_path_to_set(*g_, x, target).edge_set(*g_);
  }

  Rational share(std::span<const NodeId> u, NodeId x) const {
    ClientSet set = make_client_set(u);
    if (x == root_ || !std::binary_search(set.begin(), set.end(), x)) return Rational(0);
    ClientSet others = rooted(set);
    others.erase(std::find(others.begin(), others.end(), x));
    return *metric_.distance_to_set(others, x) / Rational(2);
  }

  Rational optimum_cost(std::span<const NodeId> u) const { return steiner_tree_cost(*g_, rooted(u)); }

  bool is_solution(std::span<const NodeId> u, const EdgeSet& f) const { return connects(*g_, f.ids, rooted(u)); }

 private:
  const Graph* g_;
  Metric metric_;
  NodeId root_ = 0;
};

static_assert(CostSharingScheme<SteinerScheme>);

inline SteinerScheme steiner_scheme(const Graph& g) { return SteinerScheme(g); }

/// Wraps a scheme and replaces its declared (alpha, beta).
template <CostSharingScheme S>
class DeclaredConstants {
 public:
  DeclaredConstants(S inner, Rational alpha, Rational beta)
      : inner_(std::move(inner)), alpha_(std::move(alpha)), beta_(std::move(beta)) {}

  const Graph& graph() const noexcept { return inner_.graph(); }
  Rational alpha() const { return alpha_; }
  Rational beta() const { return beta_; }
  std::string name() const { return inner_.name(); }
  NodeId client_of(const GameType& t) const { return inner_.client_of(t); }
  EdgeSet approximate(std::span<const NodeId> u) const { return inner_.approximate(u); }
  EdgeSet augment(const EdgeSet& f, NodeId x) const { return inner_.augment(f, x); }
  Rational share(std::span<const NodeId> u, NodeId x) const { return inner_.share(u, x); }
  Rational optimum_cost(std::span<const NodeId> u) const { return inner_.optimum_cost(u); }
  bool is_solution(std::span<const NodeId> u, const EdgeSet& f) const { return inner_.is_solution(u, f); }

 private:
  S inner_;
  Rational alpha_, beta_;
};

struct PropertyCheck {
  Rational lhs;
  Rational rhs;
  bool pass = false;
};

inline PropertyCheck make_le(Rational lhs, Rational rhs) {
  bool ok = lhs <= rhs;
  return {std::move(lhs), std::move(rhs), ok};
}

/// sum over x in U of xi(U, x) <= c(OPT(U)).
template <CostSharingScheme S>
PropertyCheck check_competitiveness(const S& scheme, std::span<const NodeId> u) {
  ClientSet set = make_client_set(u);
  Rational total;
  for (NodeId x : set) total += scheme.share(set, x);
  return make_le(std::move(total), scheme.optimum_cost(set));
}

/// c(B(A(U), x)) <= beta * xi(U + x, x).
template <CostSharingScheme S>
PropertyCheck check_strictness(const S& scheme, std::span<const NodeId> u, NodeId x) {
  EdgeSet aug = scheme.augment(scheme.approximate(u), x);
  return make_le(aug.cost, Rational(scheme.beta()) * scheme.share(with_client(u, x), x));
}

/// xi(U', x) <= xi(U, x) for U subset of U' and x in U.
template <CostSharingScheme S>
PropertyCheck check_cross_monotonicity(const S& scheme, std::span<const NodeId> u, std::span<const NodeId> u_prime,
                                       NodeId x) {
  ClientSet a = make_client_set(u), b = make_client_set(u_prime);
  if (!std::includes(b.begin(), b.end(), a.begin(), a.end()) || !std::binary_search(a.begin(), a.end(), x)) {
    throw Error(ErrorCode::invalid_argument, "cross-monotonicity needs U subset of U' and x in U");
  }
  return make_le(scheme.share(b, x), scheme.share(a, x));
}

/// c(A(U)) <= alpha * c(OPT(U)).
template <CostSharingScheme S>
PropertyCheck check_approximation(const S& scheme, std::span<const NodeId> u) {
  return make_le(scheme.approximate(u).cost, Rational(scheme.alpha()) * scheme.optimum_cost(u));
}

/// A(U) solves U and A(U) + B(A(U), x) solves U + x.
template <CostSharingScheme S>
bool check_soundness(const S& scheme, std::span<const NodeId> u, NodeId x) {
  EdgeSet f = scheme.approximate(u);
  if (!scheme.is_solution(u, f)) return false;
  return scheme.is_solution(with_client(u, x), edge_union(scheme.graph(), f, scheme.augment(f, x)));
}

/// Steiner competitiveness through the spanning tree:
/// sum xi(U, x) <= MST(U + r) / 2 and MST(U + r) / 2 <= c(OPT(U + r)).
inline std::pair<PropertyCheck, PropertyCheck> check_mst_chain(const SteinerScheme& scheme,
                                                               std::span<const NodeId> u) {
  ClientSet set = make_client_set(u);
  Rational total;
  for (NodeId x : set) total += scheme.share(set, x);
  Rational half_mst = mst_over_terminals(scheme.metric(), scheme.rooted(set)).cost / Rational(2);
  return {make_le(total, half_mst), make_le(half_mst, scheme.optimum_cost(set))};
}

}  // namespace bndg
