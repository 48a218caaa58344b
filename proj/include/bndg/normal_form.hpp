#pragma once

// Tabulated normal form of a Bayesian network design game for exhaustive
// strategy search.
//
// Element costs are scaled by S = lcm(cost denominators) * lcm(1..n), which
// turns every fair share c_e / n_e and every potential term c_e / t into an
// integer. Type-profile probabilities are scaled by L = lcm of their
// denominators. Each table entry holds W(t) * value(a) as a 64-bit integer,
// so expected values over a strategy profile are exact integer sums; divide
// by S * L to recover the rational. All arithmetic is overflow-checked.
//
// Strategy profiles are enumerated as an odometer over "slots" (player,
// support type), player-major, last slot fastest. That enumeration order is
// the canonical lexicographic order on strategy profiles.

#include <cstdint>
#include <span>
#include <vector>

#include "bndg/expectation.hpp"
#include "bndg/game.hpp"

namespace bndg {

class NormalForm {
 public:
  struct Cursor {
    std::vector<std::uint32_t> choice;  // per slot: index into the slot's action list
    std::vector<std::uint64_t> joint;   // per type profile: current joint-action offset
    std::int64_t potential = 0;         // scaled Psi
    std::int64_t social = 0;            // scaled K
  };

  explicit NormalForm(const GameInstance& inst) : inst_(&inst), catalog_(build_catalog(inst)) {
    n_ = inst.player_count();
    for (std::size_t i = 0; i < n_; ++i) {
      slot_offset_.push_back(options_.size());
      for (const auto& acts : catalog_[i]) options_.push_back(static_cast<std::uint32_t>(acts.size()));
    }
    space_ = 1;
    for (auto o : options_) space_ = saturating_mul(space_, o);
    if (space_ > inst.caps.strategies) {
      throw Error(ErrorCode::strategy_space_too_large,
                  std::to_string(space_) + " strategy profiles exceed the cap of " +
                      std::to_string(inst.caps.strategies));
    }
    build_tables();
  }

  const GameInstance& instance() const noexcept { return *inst_; }
  const ActionCatalog& catalog() const noexcept { return catalog_; }
  std::size_t players() const noexcept { return n_; }
  std::size_t slot_count() const noexcept { return options_.size(); }
  std::size_t slot(std::size_t player, std::size_t type) const { return slot_offset_[player] + type; }
  std::uint32_t options(std::size_t slot) const { return options_[slot]; }
  std::uint64_t strategy_space() const noexcept { return space_; }

  Rational value(std::int64_t scaled) const { return Rational(scaled, denominator_); }

  Cursor start() const {
    Cursor c;
    c.choice.assign(slot_count(), 0);
    c.joint.assign(base_.size(), 0);
    for (std::size_t p = 0; p < base_.size(); ++p) {
      c.potential = detail::checked_add(c.potential, potential_[base_[p]]);
      c.social = detail::checked_add(c.social, social_[base_[p]]);
    }
    return c;
  }

  Cursor cursor_for(const StrategyProfile& s) const {
    Cursor c = start();
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t t = 0; t < catalog_[i].size(); ++t) {
        const auto& acts = catalog_[i][t];
        auto it = std::find(acts.begin(), acts.end(), s.at(i, t));
        if (it == acts.end()) throw Error(ErrorCode::invalid_argument, "strategy uses an infeasible action");
        move(c, slot(i, t), static_cast<std::int64_t>(it - acts.begin()));
      }
    }
    return c;
  }

  /// Odometer step; false once every profile has been visited.
  bool advance(Cursor& c) const {
    std::size_t k = slot_count();
    while (k > 0) {
      --k;
      if (c.choice[k] + 1 < options_[k]) {
        move(c, k, 1);
        return true;
      }
      move(c, k, -static_cast<std::int64_t>(c.choice[k]));
    }
    return false;
  }

  /// Pure Bayes-Nash test: no (player, type) has a strictly cheaper interim action.
  bool is_equilibrium(const Cursor& c) const {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t t = 0; t < catalog_[i].size(); ++t) {
        std::size_t k = slot(i, t);
        std::int64_t current = interim(c, i, k, c.choice[k]);
        for (std::uint32_t a = 0; a < options_[k]; ++a) {
          if (a != c.choice[k] && interim(c, i, k, a) < current) return false;
        }
      }
    }
    return true;
  }

  StrategyProfile profile(const Cursor& c) const {
    StrategyProfile s;
    s.actions.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t t = 0; t < catalog_[i].size(); ++t) s.actions[i].push_back(catalog_[i][t][c.choice[slot(i, t)]]);
    }
    return s;
  }

 private:
  struct Touch {
    std::size_t profile;
    std::uint64_t stride;
  };

  void move(Cursor& c, std::size_t k, std::int64_t delta) const {
    if (delta == 0) return;
    for (const auto& touch : touches_[k]) {
      std::size_t p = touch.profile;
      std::uint64_t old_entry = base_[p] + c.joint[p];
      c.joint[p] = static_cast<std::uint64_t>(static_cast<std::int64_t>(c.joint[p]) +
                                              delta * static_cast<std::int64_t>(touch.stride));
      std::uint64_t new_entry = base_[p] + c.joint[p];
      c.potential += potential_[new_entry] - potential_[old_entry];
      c.social += social_[new_entry] - social_[old_entry];
    }
    c.choice[k] = static_cast<std::uint32_t>(static_cast<std::int64_t>(c.choice[k]) + delta);
  }

  std::int64_t interim(const Cursor& c, std::size_t player, std::size_t k, std::uint32_t action) const {
    std::int64_t total = 0;
    std::int64_t shift = static_cast<std::int64_t>(action) - static_cast<std::int64_t>(c.choice[k]);
    for (const auto& touch : touches_[k]) {
      std::size_t p = touch.profile;
      auto entry = static_cast<std::uint64_t>(static_cast<std::int64_t>(base_[p] + c.joint[p]) +
                                              shift * static_cast<std::int64_t>(touch.stride));
      total += player_cost_[entry * n_ + player];
    }
    return total;
  }

  void build_tables() {
    const auto& inst = *inst_;
    std::int64_t cost_den = 1;
    for (std::size_t e = 0; e < inst.element_count(); ++e) {
      cost_den = detail::lcm64(cost_den, inst.element_cost(e).den());
    }
    std::int64_t cost_scale = detail::checked_mul(cost_den, lcm_upto(n_));
    std::vector<std::int64_t> scaled_cost(inst.element_count());
    for (std::size_t e = 0; e < scaled_cost.size(); ++e) {
      const auto& c = inst.element_cost(e);
      scaled_cost[e] = detail::checked_mul(c.num(), cost_scale / c.den());
    }

    std::vector<TypeProfile> profiles;
    std::vector<Rational> probs;
    std::int64_t prob_den = 1;
    for_each_type_profile(inst, [&](const TypeProfile& idx, const Rational& p) {
      profiles.push_back(idx);
      probs.push_back(p);
      prob_den = detail::lcm64(prob_den, p.den());
    });
    denominator_ = detail::checked_mul(cost_scale, prob_den);

    std::uint64_t entries = 0;
    touches_.assign(slot_count(), {});
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      base_.push_back(entries);
      std::uint64_t stride = 1;
      std::vector<std::uint64_t> strides(n_);
      for (std::size_t i = n_; i-- > 0;) {
        strides[i] = stride;
        stride = saturating_mul(stride, options_[slot(i, profiles[p][i])]);
      }
      for (std::size_t i = 0; i < n_; ++i) touches_[slot(i, profiles[p][i])].push_back({p, strides[i]});
      entries += stride;
      if (stride == UINT64_MAX || entries > inst.caps.table_entries) {
        throw Error(ErrorCode::strategy_space_too_large,
                    "joint-action tables exceed the cap of " + std::to_string(inst.caps.table_entries) + " entries");
      }
    }
    potential_.assign(entries, 0);
    social_.assign(entries, 0);
    player_cost_.assign(entries * n_, 0);

    std::vector<std::size_t> load(inst.element_count(), 0);
    std::vector<std::uint32_t> joint(n_);
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      std::int64_t weight = probs[p].num() * (prob_den / probs[p].den());
      std::vector<const std::vector<Action>*> acts(n_);
      for (std::size_t i = 0; i < n_; ++i) acts[i] = &catalog_[i][profiles[p][i]];
      std::fill(joint.begin(), joint.end(), 0);
      bool more = true;
      for (std::uint64_t entry = base_[p]; more; ++entry) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (auto e : (*acts[i])[joint[i]].elements) ++load[e];
        }
        std::int64_t phi = 0, social = 0;
        for (std::size_t i = 0; i < n_; ++i) {
          std::int64_t share = 0;
          for (auto e : (*acts[i])[joint[i]].elements) {
            share = detail::checked_add(share, scaled_cost[e] / static_cast<std::int64_t>(load[e]));
          }
          player_cost_[entry * n_ + i] = detail::checked_mul(weight, share);
        }
        for (std::size_t i = 0; i < n_; ++i) {
          for (auto e : (*acts[i])[joint[i]].elements) {
            if (load[e] == 0) continue;
            social = detail::checked_add(social, scaled_cost[e]);
            for (std::size_t t = 1; t <= load[e]; ++t) {
              phi = detail::checked_add(phi, scaled_cost[e] / static_cast<std::int64_t>(t));
            }
            load[e] = 0;  // count each element once
          }
        }
        potential_[entry] = detail::checked_mul(weight, phi);
        social_[entry] = detail::checked_mul(weight, social);

        more = false;
        for (std::size_t i = n_; i-- > 0;) {
          if (++joint[i] < acts[i]->size()) {
            more = true;
            break;
          }
          joint[i] = 0;
        }
      }
    }
    // Every scaled sum is bounded by the sum of per-profile maxima; make sure that fits.
    std::int64_t bound_pot = 0, bound_soc = 0;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      std::uint64_t end = p + 1 < profiles.size() ? base_[p + 1] : entries;
      std::int64_t mp = 0, ms = 0, mc = 0;
      for (std::uint64_t e = base_[p]; e < end; ++e) {
        mp = std::max(mp, potential_[e]);
        ms = std::max(ms, social_[e]);
        for (std::size_t i = 0; i < n_; ++i) mc = std::max(mc, player_cost_[e * n_ + i]);
      }
      bound_pot = detail::checked_add(bound_pot, mp);
      bound_soc = detail::checked_add(bound_soc, detail::checked_add(ms, mc));
    }
  }

  const GameInstance* inst_;
  ActionCatalog catalog_;
  std::size_t n_ = 0;
  std::vector<std::size_t> slot_offset_;
  std::vector<std::uint32_t> options_;
  std::uint64_t space_ = 1;
  std::int64_t denominator_ = 1;
  std::vector<std::uint64_t> base_;
  std::vector<std::vector<Touch>> touches_;
  std::vector<std::int64_t> potential_;
  std::vector<std::int64_t> social_;
  std::vector<std::int64_t> player_cost_;
};

}  // namespace bndg
