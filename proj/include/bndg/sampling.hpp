#pragma once

// Sampling-and-augmentation strategies. A common sample D of clients is
// drawn once; every player of type t then plays the cheapest feasible action
// inside A(D) + B(A(D), t).
//
// iid:    all players share one distribution rho and D ~ rho^(n-1).
// noniid: D = (d_1, ..., d_n) with d_j ~ pi_j.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bndg/cost_sharing.hpp"
#include "bndg/expectation.hpp"
#include "bndg/game.hpp"
#include "bndg/rng.hpp"

namespace bndg {

enum class Variant { iid, noniid };

inline std::string_view to_string(Variant v) { return v == Variant::iid ? "iid" : "noniid"; }

inline std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "iid") return Variant::iid;
  if (s == "noniid") return Variant::noniid;
  return std::nullopt;
}

inline bool identical_distributions(const GameInstance& inst) {
  return std::all_of(inst.players.begin(), inst.players.end(),
                     [&](const PlayerSpec& p) { return p == inst.players.front(); });
}

struct SampleProfile {
  std::vector<GameType> draws;
  bool enumerated = true;  // otherwise drawn from stream (seed, index)
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

/// Per-slot distributions D is drawn from.
inline std::vector<PlayerSpec> sample_distributions(const GameInstance& inst, Variant variant) {
  if (variant == Variant::noniid) return inst.players;
  if (!identical_distributions(inst)) {
    throw Error(ErrorCode::invalid_argument, "the iid construction needs identical player distributions");
  }
  return std::vector<PlayerSpec>(inst.player_count() - 1, inst.players.front());
}

struct Construction {
  EdgeSet first_stage;                            // A(D)
  std::vector<std::vector<Rational>> augmentation;  // [player][type]: c(B(A(D), t))
  StrategyProfile profile;
};

namespace detail {

inline bool within(const Action& a, const EdgeSet& allowed) {
  return std::includes(allowed.ids.begin(), allowed.ids.end(), a.elements.begin(), a.elements.end());
}

template <CostSharingScheme S>
Construction construct(const GameInstance& inst, const S& scheme, const ActionCatalog& cat,
                       std::span<const GameType> draws) {
  if (!is_graph_game(inst.kind)) throw Error(ErrorCode::invalid_argument, "sampling strategies need a graph game");
  std::vector<NodeId> clients;
  for (const auto& t : draws) clients.push_back(scheme.client_of(t));
  Construction out;
  out.first_stage = scheme.approximate(clients);
  out.augmentation.resize(inst.player_count());
  out.profile.actions.resize(inst.player_count());
  std::map<GameType, std::pair<Rational, std::size_t>> memo;  // type -> (aug cost, action index)
  for (std::size_t i = 0; i < inst.player_count(); ++i) {
    for (std::size_t k = 0; k < cat[i].size(); ++k) {
      const GameType& t = inst.players[i].distribution[k].type;
      auto it = memo.find(t);
      if (it == memo.end()) {
        EdgeSet aug = scheme.augment(out.first_stage, scheme.client_of(t));
        EdgeSet allowed = edge_union(inst.graph, out.first_stage, aug);
        std::optional<std::size_t> best;
        for (std::size_t a = 0; a < cat[i][k].size(); ++a) {
          if (within(cat[i][k][a], allowed) && (!best || cat[i][k][a].cost < cat[i][k][*best].cost)) best = a;
        }
        if (!best) {
          throw Error(ErrorCode::no_feasible_action,
                      "A(D) + B(A(D), t) contains no feasible action for type '" + inst.type_name(t) + "'");
        }
        it = memo.emplace(t, std::pair{aug.cost, *best}).first;
      }
      out.augmentation[i].push_back(it->second.first);
      out.profile.actions[i].push_back(cat[i][k][it->second.second]);
    }
  }
  return out;
}

inline void require_in_support(const PlayerSpec& p, const GameType& t, std::size_t j) {
  bool found = std::any_of(p.distribution.begin(), p.distribution.end(),
                           [&](const TypeWeight& tw) { return tw.type == t; });
  if (!found) throw Error(ErrorCode::invalid_argument, "sample " + std::to_string(j) + " is outside its support");
}

}  // namespace detail

template <CostSharingScheme S>
StrategyProfile construct_strategy_iid(const GameInstance& inst, const S& scheme, const SampleProfile& d) {
  auto dists = sample_distributions(inst, Variant::iid);
  if (d.draws.size() != dists.size()) throw Error(ErrorCode::invalid_argument, "the iid sample must have n-1 draws");
  for (std::size_t j = 0; j < d.draws.size(); ++j) detail::require_in_support(dists[j], d.draws[j], j);
  return detail::construct(inst, scheme, build_catalog(inst), d.draws).profile;
}

template <CostSharingScheme S>
StrategyProfile construct_strategy_noniid(const GameInstance& inst, const S& scheme, const SampleProfile& d) {
  if (d.draws.size() != inst.player_count()) throw Error(ErrorCode::invalid_argument, "the sample must have n draws");
  for (std::size_t j = 0; j < d.draws.size(); ++j) detail::require_in_support(inst.players[j], d.draws[j], j);
  return detail::construct(inst, scheme, build_catalog(inst), d.draws).profile;
}

struct ConstructionReport {
  Variant variant = Variant::iid;
  bool exact = true;
  std::uint64_t samples = 0;  // (D, t) cells enumerated, or Monte-Carlo draws
  std::uint64_t seed = 0;
  Rational alpha, beta;
  Rational first_stage;   // E[c(A(D))]
  Rational augmentation;  // E[sum_i c(B(A(D), t_i))]
  Rational total;         // E[C(s_D(t))]
  Rational expected_opt;
  Rational bound;         // (alpha + beta) E[OPT]
  bool pass = false;      // total <= bound
  PropertyCheck first_stage_check;   // first_stage <= alpha E[OPT]
  PropertyCheck augmentation_check;  // augmentation <= beta E[OPT]
  PropertyCheck union_check;         // total <= first_stage + augmentation
  std::optional<PropertyCheck> regrouping;  // exact iid only; lhs == rhs
  std::optional<Rational> ig_upper_bound;   // exact only: min_D K(s_D) / E[OPT]
  std::optional<SampleProfile> best_sample;  // exact only
  std::optional<double> standard_error;      // Monte-Carlo only
};

namespace detail {

template <CostSharingScheme S>
void fill_bounds(ConstructionReport& r, const S& scheme) {
  r.alpha = scheme.alpha();
  r.beta = scheme.beta();
  r.bound = (r.alpha + r.beta) * r.expected_opt;
  r.pass = r.total <= r.bound;
  r.first_stage_check = make_le(r.first_stage, r.alpha * r.expected_opt);
  r.augmentation_check = make_le(r.augmentation, r.beta * r.expected_opt);
  r.union_check = make_le(r.total, r.first_stage + r.augmentation);
}

inline Rational expected_augmentation(const GameInstance& inst, const Construction& c) {
  Rational total;
  for (std::size_t i = 0; i < inst.player_count(); ++i) {
    for (std::size_t k = 0; k < c.augmentation[i].size(); ++k) {
      total += inst.players[i].distribution[k].prob * c.augmentation[i][k];
    }
  }
  return total;
}

}  // namespace detail

/// n E_{t ~ rho, D ~ rho^(n-1)}[xi(D + t, t)] versus E_{R ~ rho^n}[sum_j xi(R, R_j)].
template <CostSharingScheme S>
PropertyCheck regrouping_identity(const GameInstance& inst, const S& scheme) {
  const std::size_t n = inst.player_count();
  sample_distributions(inst, Variant::iid);  // requires identical distributions
  std::vector<PlayerSpec> rho_n(n, inst.players.front());
  Rational lhs, rhs;
  for_each_type_profile(std::span<const PlayerSpec>(rho_n), inst.caps.support,
                        [&](const TypeProfile& idx, const Rational& p) {
                          std::vector<NodeId> r;
                          for (std::size_t j = 0; j < n; ++j) r.push_back(scheme.client_of(rho_n[j].distribution[idx[j]].type));
                          // (D, t) = (R_1..R_{n-1}, R_n) has the same law as R.
                          lhs += p * Rational(static_cast<std::int64_t>(n)) * scheme.share(r, r.back());
                          Rational sum;
                          for (NodeId x : r) sum += scheme.share(r, x);
                          rhs += p * sum;
                        });
  return {lhs, rhs, lhs == rhs};
}

struct Derandomized {
  SampleProfile sample;
  StrategyProfile profile;
  Rational cost;     // K(s_D) for the chosen D
  Rational average;  // E_D[K(s_D)]
};

namespace detail {

template <CostSharingScheme S>
ConstructionReport evaluate_exact(const GameInstance& inst, const S& scheme, Variant variant,
                                  std::optional<Derandomized>* best_out) {
  auto dists = sample_distributions(inst, variant);
  auto cat = build_catalog(inst);
  ConstructionReport r;
  r.variant = variant;
  r.expected_opt = expected_opt(inst);
  std::optional<Rational> best_cost;
  SampleProfile best_sample;
  StrategyProfile best_profile;
  std::uint64_t d_count = 0;
  for_each_type_profile(std::span<const PlayerSpec>(dists), inst.caps.support,
                        [&](const TypeProfile& idx, const Rational& p) {
                          std::vector<GameType> draws;
                          for (std::size_t j = 0; j < idx.size(); ++j) draws.push_back(dists[j].distribution[idx[j]].type);
                          auto c = construct(inst, scheme, cat, draws);
                          Rational k = expected_social_cost(inst, c.profile);
                          r.total += p * k;
                          r.first_stage += p * c.first_stage.cost;
                          r.augmentation += p * expected_augmentation(inst, c);
                          if (!best_cost || k < *best_cost) {
                            best_cost = k;
                            best_sample = SampleProfile{draws, true, 0, 0};
                            best_profile = c.profile;
                          }
                          ++d_count;
                        });
  r.samples = saturating_mul(d_count, support_size(inst));
  fill_bounds(r, scheme);
  if (variant == Variant::iid) r.regrouping = regrouping_identity(inst, scheme);
  if (!r.expected_opt.is_zero()) r.ig_upper_bound = *best_cost / r.expected_opt;
  r.best_sample = best_sample;
  if (best_out) *best_out = Derandomized{best_sample, best_profile, *best_cost, r.total};
  return r;
}

}  // namespace detail

/// Exact expectation over every (D, t) pair.
template <CostSharingScheme S>
ConstructionReport evaluate_construction_exact(const GameInstance& inst, const S& scheme, Variant variant) {
  return detail::evaluate_exact(inst, scheme, variant, nullptr);
}

/// The sample D minimizing K(s_D); lexicographically first on ties.
template <CostSharingScheme S>
Derandomized derandomize(const GameInstance& inst, const S& scheme, Variant variant) {
  std::optional<Derandomized> best;
  detail::evaluate_exact(inst, scheme, variant, &best);
  return std::move(*best);
}

enum class McDraws { random, enumerated };

/// Monte-Carlo estimate of the same expectation. Random draws use stream
/// (seed, k) for sample k. Enumerated draws visit the (D, t) cells in order,
/// cyclically, each weighted by P(D, t) * (#cells), so `samples` equal to the
/// cell count reproduces the exact value.
template <CostSharingScheme S>
ConstructionReport evaluate_construction_mc(const GameInstance& inst, const S& scheme, Variant variant,
                                            std::uint64_t samples, std::uint64_t seed,
                                            McDraws mode = McDraws::random) {
  if (samples == 0) throw Error(ErrorCode::invalid_argument, "at least one sample is required");
  auto dists = sample_distributions(inst, variant);
  auto cat = build_catalog(inst);
  const std::size_t n = inst.player_count();
  std::vector<const PlayerSpec*> slots;
  for (const auto& p : dists) slots.push_back(&p);
  for (const auto& p : inst.players) slots.push_back(&p);

  std::uint64_t cells = 1;
  for (const auto* p : slots) cells = saturating_mul(cells, p->distribution.size());
  if (mode == McDraws::enumerated) require_support(cells, inst.caps.support);

  std::map<std::vector<std::size_t>, Construction> memo;
  ConstructionReport r;
  r.variant = variant;
  r.exact = false;
  r.samples = samples;
  r.seed = seed;
  r.expected_opt = expected_opt(inst);
  std::vector<std::size_t> idx(slots.size());
  double sum = 0, sum_sq = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    Rational weight(1);
    if (mode == McDraws::random) {
      CounterRng rng(seed, k);
      for (std::size_t j = 0; j < slots.size(); ++j) {
        std::vector<Rational> probs;
        for (const auto& tw : slots[j]->distribution) probs.push_back(tw.prob);
        idx[j] = rng.pick(probs);
      }
    } else {
      std::uint64_t cell = k % cells;
      for (std::size_t j = slots.size(); j-- > 0;) {
        idx[j] = cell % slots[j]->distribution.size();
        cell /= slots[j]->distribution.size();
      }
      weight = Rational(static_cast<std::int64_t>(cells));
      for (std::size_t j = 0; j < slots.size(); ++j) weight *= slots[j]->distribution[idx[j]].prob;
    }
    std::vector<std::size_t> d_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(dists.size()));
    auto it = memo.find(d_idx);
    if (it == memo.end()) {
      std::vector<GameType> draws;
      for (std::size_t j = 0; j < dists.size(); ++j) draws.push_back(dists[j].distribution[d_idx[j]].type);
      it = memo.emplace(d_idx, detail::construct(inst, scheme, cat, draws)).first;
    }
    const Construction& c = it->second;
    TypeProfile t(idx.begin() + static_cast<std::ptrdiff_t>(dists.size()), idx.end());
    Rational value = weight * social_cost(inst, realize(c.profile, t));
    Rational aug;
    for (std::size_t i = 0; i < n; ++i) aug += c.augmentation[i][t[i]];
    r.total += value;
    r.first_stage += weight * c.first_stage.cost;
    r.augmentation += weight * aug;
    double v = value.to_double();
    sum += v;
    sum_sq += v * v;
  }
  Rational count(static_cast<std::int64_t>(samples));
  r.total /= count;
  r.first_stage /= count;
  r.augmentation /= count;
  double mean = sum / static_cast<double>(samples);
  double var = samples > 1 ? std::max(0.0, (sum_sq - static_cast<double>(samples) * mean * mean) /
                                               static_cast<double>(samples - 1))
                           : 0.0;
  r.standard_error = std::sqrt(var / static_cast<double>(samples));
  detail::fill_bounds(r, scheme);
  return r;
}

}  // namespace bndg
