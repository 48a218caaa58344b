#pragma once

// Bayes-Nash equilibria, exact BPoS and information gap, and the
// potential-method certificate.
//
// verify_bne and best_response_dynamics evaluate interim costs directly with
// rationals. The exhaustive searches run on the tabulated NormalForm; their
// results are re-evaluated through the direct route where they are reported.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bndg/expectation.hpp"
#include "bndg/normal_form.hpp"

namespace bndg {

/// E_{t_-i}[c_i(action, s_-i(t_-i))] for player i holding support type `type_index`.
inline Rational interim_cost(const GameInstance& inst, const StrategyProfile& s, std::size_t i,
                             std::size_t type_index, const Action& action) {
  std::vector<PlayerSpec> conditioned = inst.players;
  conditioned[i].distribution = {{inst.players[i].distribution[type_index].type, Rational(1)}};
  Rational total;
  for_each_type_profile(std::span<const PlayerSpec>(conditioned), inst.caps.support,
                        [&](const TypeProfile& idx, const Rational& p) {
                          TypeProfile real = idx;
                          real[i] = type_index;
                          ActionProfile a = realize(s, real);
                          a[i] = action;
                          total += p * player_cost(inst, a, i);
                        });
  return total;
}

struct Violation {
  std::size_t player = 0;
  std::size_t type_index = 0;
  GameType type;
  Action deviation;
  Rational gap;  // current interim cost minus deviation interim cost (> 0)
};

struct EquilibriumReport {
  StrategyProfile profile;
  bool is_bne = true;
  std::optional<Violation> worst_violation;
};

inline void require_feasible(const ActionCatalog& cat, const StrategyProfile& s) {
  if (s.actions.size() != cat.size()) throw Error(ErrorCode::invalid_argument, "strategy has wrong player count");
  for (std::size_t i = 0; i < cat.size(); ++i) {
    if (s.actions[i].size() != cat[i].size()) {
      throw Error(ErrorCode::invalid_argument, "strategy of player " + std::to_string(i) + " is not total");
    }
    for (std::size_t t = 0; t < cat[i].size(); ++t) {
      if (std::find(cat[i][t].begin(), cat[i][t].end(), s.actions[i][t]) == cat[i][t].end()) {
        throw Error(ErrorCode::invalid_argument, "strategy of player " + std::to_string(i) + " uses an infeasible action");
      }
    }
  }
}

/// Checks the interim equilibrium inequality for every player, support type
/// and feasible deviation; reports the largest strictly positive gap.
inline EquilibriumReport verify_bne(const GameInstance& inst, const StrategyProfile& s) {
  auto cat = build_catalog(inst);
  require_feasible(cat, s);
  EquilibriumReport report{s, true, std::nullopt};
  for (std::size_t i = 0; i < inst.player_count(); ++i) {
    for (std::size_t t = 0; t < cat[i].size(); ++t) {
      Rational current = interim_cost(inst, s, i, t, s.at(i, t));
      for (const auto& a : cat[i][t]) {
        if (a == s.at(i, t)) continue;
        Rational gap = current - interim_cost(inst, s, i, t, a);
        if (gap > Rational(0) && (!report.worst_violation || gap > report.worst_violation->gap)) {
          report.worst_violation = Violation{i, t, inst.players[i].distribution[t].type, a, gap};
        }
      }
    }
  }
  report.is_bne = !report.worst_violation.has_value();
  return report;
}

struct SearchOptimum {
  StrategyProfile profile;
  Rational value;
  std::uint64_t ordinal = 0;  // position in the canonical enumeration
};

namespace detail {

template <class Key>
SearchOptimum argmin_profile(const NormalForm& nf, Key key) {
  auto c = nf.start();
  std::int64_t best = key(c);
  std::uint64_t best_ordinal = 0;
  auto best_choice = c.choice;
  std::uint64_t ordinal = 0;
  while (nf.advance(c)) {
    ++ordinal;
    if (key(c) < best) {
      best = key(c);
      best_ordinal = ordinal;
      best_choice = c.choice;
    }
  }
  NormalForm::Cursor at = nf.start();
  at.choice = best_choice;
  StrategyProfile s;
  s.actions.resize(nf.players());
  const auto& cat = nf.catalog();
  for (std::size_t i = 0; i < nf.players(); ++i) {
    for (std::size_t t = 0; t < cat[i].size(); ++t) s.actions[i].push_back(cat[i][t][best_choice[nf.slot(i, t)]]);
  }
  return {std::move(s), nf.value(best), best_ordinal};
}

}  // namespace detail

/// Exact Psi-minimizer (lexicographically first on ties).
inline SearchOptimum min_potential_search(const GameInstance& inst) {
  NormalForm nf(inst);
  return detail::argmin_profile(nf, [](const NormalForm::Cursor& c) { return c.potential; });
}

inline StrategyProfile min_potential_profile(const GameInstance& inst) { return min_potential_search(inst).profile; }

/// Exact K-minimizer over all Bayesian strategy profiles.
inline SearchOptimum min_social_cost_search(const GameInstance& inst) {
  NormalForm nf(inst);
  return detail::argmin_profile(nf, [](const NormalForm::Cursor& c) { return c.social; });
}

inline std::vector<StrategyProfile> enumerate_pure_bne(const GameInstance& inst) {
  NormalForm nf(inst);
  std::vector<StrategyProfile> out;
  auto c = nf.start();
  do {
    if (nf.is_equilibrium(c)) out.push_back(nf.profile(c));
  } while (nf.advance(c));
  return out;
}

struct BestResponseTrace {
  StrategyProfile profile;
  std::vector<Rational> potential;  // initial value, then after every improving move
  std::vector<std::size_t> movers;  // player of each improving move
  std::size_t rounds = 0;
};

/// Round-robin exact interim best responses. A tied incumbent is kept;
/// otherwise the lexicographically first best action is taken.
inline BestResponseTrace best_response_dynamics(const GameInstance& inst, StrategyProfile s, std::size_t max_rounds) {
  auto cat = build_catalog(inst);
  require_feasible(cat, s);
  BestResponseTrace trace;
  trace.potential.push_back(expected_potential(inst, s));
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    trace.rounds = round;
    bool changed = false;
    for (std::size_t i = 0; i < inst.player_count(); ++i) {
      std::vector<Action> next = s.actions[i];
      bool moved = false;
      for (std::size_t t = 0; t < cat[i].size(); ++t) {
        Rational best = interim_cost(inst, s, i, t, s.at(i, t));
        for (const auto& a : cat[i][t]) {
          Rational v = interim_cost(inst, s, i, t, a);
          if (v < best) {
            best = v;
            next[t] = a;
            moved = true;
          }
        }
      }
      if (moved) {
        s.actions[i] = std::move(next);
        trace.potential.push_back(expected_potential(inst, s));
        trace.movers.push_back(i);
        changed = true;
      }
    }
    if (!changed) {
      trace.profile = std::move(s);
      return trace;
    }
  }
  throw Error(ErrorCode::no_convergence, "no equilibrium within " + std::to_string(max_rounds) + " rounds");
}

struct RatioResult {
  Rational ratio;
  Rational cost;          // K of the witness
  Rational expected_opt;  // E_t[OPT(t)]
  StrategyProfile witness;
};

inline Rational require_positive_opt(const GameInstance& inst) {
  Rational opt = expected_opt(inst);
  if (opt.is_zero()) throw Error(ErrorCode::zero_optimum, "expected optimum is 0; ratio undefined");
  return opt;
}

/// min over pure BNE of K(s) / E[OPT].
inline RatioResult bpos_analysis(const GameInstance& inst) {
  Rational opt = require_positive_opt(inst);
  NormalForm nf(inst);
  auto star = detail::argmin_profile(nf, [](const NormalForm::Cursor& c) { return c.potential; });
  auto star_cursor = nf.cursor_for(star.profile);
  if (!nf.is_equilibrium(star_cursor)) {
    throw Error(ErrorCode::invalid_argument, "potential minimizer failed the equilibrium test");
  }
  std::int64_t best = star_cursor.social;
  std::uint64_t best_ordinal = star.ordinal;
  auto best_choice = star_cursor.choice;
  auto c = nf.start();
  std::uint64_t ordinal = 0;
  do {
    if ((c.social < best || (c.social == best && ordinal < best_ordinal)) && nf.is_equilibrium(c)) {
      best = c.social;
      best_ordinal = ordinal;
      best_choice = c.choice;
    }
    ++ordinal;
  } while (nf.advance(c));
  NormalForm::Cursor at = c;
  at.choice = best_choice;
  RatioResult r;
  r.witness = nf.profile(at);
  r.cost = expected_social_cost(inst, r.witness);
  r.expected_opt = opt;
  r.ratio = r.cost / opt;
  return r;
}

inline Rational bpos_exact(const GameInstance& inst) { return bpos_analysis(inst).ratio; }

/// min over all Bayesian strategy profiles of K(s) / E[OPT].
inline RatioResult information_gap_analysis(const GameInstance& inst) {
  Rational opt = require_positive_opt(inst);
  auto tilde = min_social_cost_search(inst);
  RatioResult r;
  r.witness = std::move(tilde.profile);
  r.cost = expected_social_cost(inst, r.witness);
  r.expected_opt = opt;
  r.ratio = r.cost / opt;
  return r;
}

inline Rational information_gap_exact(const GameInstance& inst) { return information_gap_analysis(inst).ratio; }

struct CertificateLink {
  std::string id;
  std::string relation;  // "<=" or "=="
  Rational lhs;
  Rational rhs;
  bool pass = false;
};

struct CertificateReport {
  Rational lambda{1};
  Rational mu;
  Rational k_star, psi_star, psi_tilde, k_tilde, expected_opt, information_gap, bpos;
  StrategyProfile s_star, s_tilde;
  std::vector<CertificateLink> links;

  bool all_pass() const {
    return std::all_of(links.begin(), links.end(), [](const CertificateLink& l) { return l.pass; });
  }
};

/// Checks K(s*) <= Psi(s*)/lambda <= Psi(s~)/lambda <= (mu/lambda) K(s~) = (mu/lambda) IG E[OPT]
/// and BPoS <= (mu/lambda) IG, with lambda = 1 and mu = H_n.
inline CertificateReport potential_method_certificate(const GameInstance& inst) {
  CertificateReport rep;
  rep.mu = harmonic(inst.player_count());
  rep.expected_opt = require_positive_opt(inst);
  rep.s_star = min_potential_profile(inst);
  rep.s_tilde = min_social_cost_search(inst).profile;
  rep.k_star = expected_social_cost(inst, rep.s_star);
  rep.psi_star = expected_potential(inst, rep.s_star);
  rep.psi_tilde = expected_potential(inst, rep.s_tilde);
  rep.k_tilde = expected_social_cost(inst, rep.s_tilde);
  rep.information_gap = rep.k_tilde / rep.expected_opt;
  rep.bpos = bpos_exact(inst);
  const Rational& lam = rep.lambda;
  auto le = [&](std::string id, Rational lhs, Rational rhs) {
    bool ok = lhs <= rhs;
    rep.links.push_back({std::move(id), "<=", std::move(lhs), std::move(rhs), ok});
  };
  le("theorem1.link1", rep.k_star, rep.psi_star / lam);
  le("theorem1.link2", rep.psi_star / lam, rep.psi_tilde / lam);
  le("theorem1.link3", rep.psi_tilde / lam, rep.mu / lam * rep.k_tilde);
  le("theorem1.link4", rep.mu / lam * rep.k_tilde, rep.mu / lam * rep.information_gap * rep.expected_opt);
  le("theorem1.bound", rep.bpos, rep.mu / lam * rep.information_gap);
  auto bne = verify_bne(inst, rep.s_star);
  Rational gap = bne.worst_violation ? bne.worst_violation->gap : Rational(0);
  rep.links.push_back({"potential_minimizer.bne", "<=", gap, Rational(0), bne.is_bne});
  return rep;
}

}  // namespace bndg
