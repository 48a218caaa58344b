#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "support.hpp"

using bndg::GameInstance;
using bndg::Rational;
using bndg::SampleProfile;
using bndg::Variant;

namespace {

GameInstance triangle_iid() {
  return support::multicast(support::triangle(), {support::uniform({1, 2}), support::uniform({1, 2})});
}

std::vector<GameInstance> multicast_suite(std::size_t count, std::uint64_t seed, bool iid) {
  std::vector<GameInstance> out;
  for (std::uint64_t k = 0; out.size() < count; ++k) {
    bndg::GenParams p;
    p.kind = bndg::GameKind::multicast;
    p.seed = seed + k;
    p.nodes = 3 + k % 4;
    p.players = 1 + k % 3;
    p.types = 1 + (k / 2) % 3;
    p.extra_edges = k % 4;
    p.cost_den = 1 + static_cast<std::int64_t>(k % 2);
    p.iid = iid;
    p.independent_decisions = !iid && k % 3 == 0;
    out.push_back(bndg::generate_instance(p));
  }
  return out;
}

/// Every D in the support of the sampling distributions, with its probability.
std::vector<std::pair<std::vector<bndg::GameType>, Rational>> samples_of(const GameInstance& inst, Variant v) {
  auto dists = bndg::sample_distributions(inst, v);
  std::vector<std::pair<std::vector<bndg::GameType>, Rational>> out;
  bndg::for_each_type_profile(std::span<const bndg::PlayerSpec>(dists), inst.caps.support,
                              [&](const bndg::TypeProfile& idx, const Rational& p) {
                                std::vector<bndg::GameType> d;
                                for (std::size_t j = 0; j < idx.size(); ++j) d.push_back(dists[j].distribution[idx[j]].type);
                                out.emplace_back(d, p);
                              });
  return out;
}

bndg::StrategyProfile construct(const GameInstance& inst, const bndg::SteinerScheme& scheme, Variant v,
                                const std::vector<bndg::GameType>& d) {
  SampleProfile sp{d};
  return v == Variant::iid ? bndg::construct_strategy_iid(inst, scheme, sp) : bndg::construct_strategy_noniid(inst, scheme, sp);
}

/// Recomputes the exact report quantities from constructed strategies and the oracle.
void check_against_oracle(const GameInstance& inst, Variant v) {
  auto scheme = bndg::steiner_scheme(inst.graph);
  auto rep = bndg::evaluate_construction_exact(inst, scheme, v);
  Rational total, first;
  for (const auto& [d, p] : samples_of(inst, v)) {
    auto s = construct(inst, scheme, v, d);
    std::vector<bndg::NodeId> clients;
    for (const auto& t : d) clients.push_back(t.nodes[0]);
    auto a = scheme.approximate(clients);
    ASSERT_EQ(a.cost, *oracle::steiner_cost(inst.graph, scheme.rooted(clients)));
    first += p * a.cost;
    for (std::size_t i = 0; i < inst.player_count(); ++i) {
      for (std::size_t k = 0; k < s.actions[i].size(); ++k) {
        const auto& t = inst.players[i].distribution[k].type;
        auto allowed = bndg::edge_union(inst.graph, a, scheme.augment(a, t.nodes[0])).ids;
        // Cheapest feasible path inside the allowed edges.
        std::optional<Rational> cheapest;
        for (const auto& path : oracle::actions(inst, t)) {
          if (!std::includes(allowed.begin(), allowed.end(), path.begin(), path.end())) continue;
          Rational c = inst.graph.cost_of(path);
          if (!cheapest || c < *cheapest) cheapest = c;
        }
        ASSERT_TRUE(cheapest);
        const auto& act = s.actions[i][k];
        ASSERT_EQ(act.cost, *cheapest);
        ASSERT_TRUE(std::includes(allowed.begin(), allowed.end(), act.elements.begin(), act.elements.end()));
        auto feasible = oracle::actions(inst, t);
        ASSERT_NE(std::find(feasible.begin(), feasible.end(), act.elements), feasible.end());
      }
    }
    total += p * oracle::expected(inst, oracle::from_profile(s)).social;
  }
  ASSERT_EQ(rep.total, total);
  ASSERT_EQ(rep.first_stage, first);
  Rational opt = oracle::expected_opt(inst);
  ASSERT_EQ(rep.expected_opt, opt);
  ASSERT_EQ(rep.bound, Rational(3) * opt);
  ASSERT_TRUE(rep.pass) << rep.total << " > " << rep.bound;
  ASSERT_TRUE(rep.first_stage_check.pass);
  ASSERT_TRUE(rep.augmentation_check.pass) << rep.augmentation << " > " << rep.augmentation_check.rhs;
  ASSERT_TRUE(rep.union_check.pass);
  if (v == Variant::iid) {
    ASSERT_TRUE(rep.regrouping && rep.regrouping->pass) << rep.regrouping->lhs << " != " << rep.regrouping->rhs;
  }
  if (!opt.is_zero()) {
    ASSERT_LE(bndg::information_gap_exact(inst), *rep.ig_upper_bound);
    ASSERT_LE(*rep.ig_upper_bound, Rational(3));
  }
}

}  // namespace

TEST(Sampling, TriangleExactReport) {
  auto inst = triangle_iid();
  auto scheme = bndg::steiner_scheme(inst.graph);
  auto rep = bndg::evaluate_construction_exact(inst, scheme, Variant::iid);
  EXPECT_TRUE(rep.exact);
  EXPECT_EQ(rep.samples, 8u);
  EXPECT_EQ(rep.first_stage, Rational(2));
  EXPECT_EQ(rep.augmentation, Rational(1));
  EXPECT_EQ(rep.total, Rational(11, 4));
  EXPECT_EQ(rep.expected_opt, Rational(5, 2));
  EXPECT_EQ(rep.bound, Rational(15, 2));
  EXPECT_TRUE(rep.pass);
  ASSERT_TRUE(rep.regrouping);
  EXPECT_TRUE(rep.regrouping->pass);
  EXPECT_EQ(*rep.ig_upper_bound, Rational(11, 10));

  // D = (a): type a plays a-r, type b plays b-a-r.
  auto s = bndg::construct_strategy_iid(inst, scheme, SampleProfile{{bndg::multicast_type(1)}});
  EXPECT_EQ(s.at(0, 0).elements, (std::vector<std::size_t>{0}));
  EXPECT_EQ(s.at(0, 1).elements, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(s.at(1, 1), s.at(0, 1));
}

TEST(Sampling, RegroupingOnTriangleByHand) {
  // R ~ rho^2 over {a, b}: xi(aa, a) = xi(bb, b) = 1, xi(ab, .) = 1/2.
  auto inst = triangle_iid();
  auto scheme = bndg::steiner_scheme(inst.graph);
  auto check = bndg::regrouping_identity(inst, scheme);
  EXPECT_EQ(check.lhs, Rational(3, 2));
  EXPECT_EQ(check.rhs, Rational(3, 2));
}

TEST(Sampling, InputErrors) {
  auto inst = support::multicast(support::triangle(), {support::uniform({1, 2}), support::point(1)});
  auto scheme = bndg::steiner_scheme(inst.graph);
  EXPECT_THROW(bndg::evaluate_construction_exact(inst, scheme, Variant::iid), bndg::Error);
  EXPECT_THROW(bndg::construct_strategy_noniid(inst, scheme, SampleProfile{{bndg::multicast_type(1)}}), bndg::Error);
  EXPECT_THROW(bndg::construct_strategy_noniid(inst, scheme, SampleProfile{{bndg::multicast_type(1), bndg::multicast_type(2)}}),
               bndg::Error);
  EXPECT_NO_THROW(bndg::construct_strategy_noniid(inst, scheme, SampleProfile{{bndg::multicast_type(2), bndg::multicast_type(1)}}));
  EXPECT_THROW(bndg::evaluate_construction_mc(inst, scheme, Variant::noniid, 0, 1), bndg::Error);
  EXPECT_EQ(bndg::parse_variant("iid"), Variant::iid);
  EXPECT_FALSE(bndg::parse_variant("other"));
}

TEST(Sampling, IidBoundsAgainstOracle) {
  for (const auto& inst : multicast_suite(40, 5000, true)) check_against_oracle(inst, Variant::iid);
}

TEST(Sampling, NonIidBoundsAgainstOracle) {
  for (const auto& inst : multicast_suite(40, 6000, false)) check_against_oracle(inst, Variant::noniid);
}

TEST(Sampling, IidInstancesAlsoSatisfyTheNonIidBound) {
  for (const auto& inst : multicast_suite(15, 7000, true)) check_against_oracle(inst, Variant::noniid);
}

TEST(Sampling, RegroupingAcrossSizes) {
  for (std::size_t n = 1; n <= 4; ++n) {
    bndg::CounterRng rng(n, 11);
    auto g = support::random_graph(rng, 5, 3);
    std::vector<bndg::PlayerSpec> players(n, support::uniform({1, 2, 3, 4}));
    auto inst = support::multicast(g, players);
    auto check = bndg::regrouping_identity(inst, bndg::steiner_scheme(inst.graph));
    EXPECT_EQ(check.lhs, check.rhs) << n;
  }
}

TEST(MonteCarlo, DeterministicAndEnumeratedIsExact) {
  for (const auto& inst : multicast_suite(10, 8000, true)) {
    auto scheme = bndg::steiner_scheme(inst.graph);
    for (auto v : {Variant::iid, Variant::noniid}) {
      auto exact = bndg::evaluate_construction_exact(inst, scheme, v);
      auto a = bndg::evaluate_construction_mc(inst, scheme, v, 300, 42);
      auto b = bndg::evaluate_construction_mc(inst, scheme, v, 300, 42);
      ASSERT_EQ(a.total, b.total);
      ASSERT_EQ(a.augmentation, b.augmentation);
      ASSERT_EQ(*a.standard_error, *b.standard_error);
      ASSERT_FALSE(a.exact);
      auto e = bndg::evaluate_construction_mc(inst, scheme, v, exact.samples, 0, bndg::McDraws::enumerated);
      ASSERT_EQ(e.total, exact.total);
      ASSERT_EQ(e.first_stage, exact.first_stage);
      ASSERT_EQ(e.augmentation, exact.augmentation);
    }
  }
}

TEST(MonteCarlo, RandomDrawsConcentrate) {
  std::size_t within = 0, total = 0;
  for (const auto& inst : multicast_suite(12, 9000, true)) {
    auto scheme = bndg::steiner_scheme(inst.graph);
    auto exact = bndg::evaluate_construction_exact(inst, scheme, Variant::iid);
    auto mc = bndg::evaluate_construction_mc(inst, scheme, Variant::iid, 4000, 7);
    double err = std::abs(mc.total.to_double() - exact.total.to_double());
    if (err <= 3 * *mc.standard_error + 1e-12) ++within;
    ++total;
  }
  EXPECT_EQ(within, total);
}

TEST(Derandomize, BestSampleBeatsTheAverage) {
  for (const auto& inst : multicast_suite(25, 9500, true)) {
    auto scheme = bndg::steiner_scheme(inst.graph);
    auto d = bndg::derandomize(inst, scheme, Variant::iid);
    ASSERT_LE(d.cost, d.average);
    ASSERT_EQ(d.cost, bndg::expected_social_cost(inst, d.profile));
    ASSERT_EQ(d.profile, bndg::construct_strategy_iid(inst, scheme, d.sample));
    ASSERT_LE(d.cost, Rational(3) * bndg::expected_opt(inst));
    ASSERT_EQ(d.average, bndg::evaluate_construction_exact(inst, scheme, Variant::iid).total);
  }
}
