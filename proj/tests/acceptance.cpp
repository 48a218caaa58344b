// Acceptance checks. Usage: acceptance <bndg tool> <instances dir>
// Prints one PASS/FAIL line per criterion; exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"

using bndg::GameInstance;
using bndg::GameKind;
using bndg::NodeId;
using bndg::Rational;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Records the first failure; later ones are only counted.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  std::size_t checks() const { return checks_; }
  Outcome outcome(std::string summary) const {
    if (failures_ == 0) return {true, std::move(summary)};
    return {false, std::to_string(failures_) + " failures; first: " + first_};
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::string first_;
};

/// n <= 3, |V| <= 5, <= 3 types per player, all four kinds.
std::vector<GameInstance> game_suite(std::size_t per_kind, std::uint64_t seed0) {
  std::vector<GameInstance> out;
  for (auto kind : {GameKind::multicast, GameKind::source_sink, GameKind::vertex_cover, GameKind::hypergraph_cover}) {
    for (std::uint64_t k = 0; k < per_kind; ++k) {
      bndg::GenParams p;
      p.kind = kind;
      p.seed = seed0 + 1000 * static_cast<std::uint64_t>(kind) + k;
      p.players = 1 + k % 3;
      p.types = 1 + (k / 3) % 3;
      p.nodes = 3 + k % 3;
      p.extra_edges = k % 4;
      p.arity = 2 + k % 2;
      p.iid = k % 2 == 0;
      p.cost_den = 1 + static_cast<std::int64_t>(k % 3);
      out.push_back(bndg::generate_instance(p));
    }
  }
  return out;
}

std::vector<GameInstance> multicast_suite(std::size_t count, std::uint64_t seed0, bool iid, bool independent) {
  std::vector<GameInstance> out;
  for (std::uint64_t k = 0; out.size() < count; ++k) {
    bndg::GenParams p;
    p.kind = GameKind::multicast;
    p.seed = seed0 + k;
    p.players = 1 + k % 3;
    p.types = independent ? 2 : 1 + (k / 3) % 3;
    p.nodes = 3 + k % 3;
    p.extra_edges = k % 4;
    p.iid = iid;
    p.independent_decisions = independent;
    p.cost_den = 1 + static_cast<std::int64_t>(k % 2);
    out.push_back(bndg::generate_instance(p));
  }
  return out;
}

bndg::StrategyProfile random_strategy(const GameInstance& inst, bndg::CounterRng& rng) {
  bndg::StrategyProfile s;
  for (const auto& per : bndg::build_catalog(inst)) {
    s.actions.emplace_back();
    for (const auto& acts : per) s.actions.back().push_back(acts[rng.below(acts.size())]);
  }
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome potential_identity() {
  auto t0 = std::chrono::steady_clock::now();
  auto suite = game_suite(15, 100);
  Tally t;
  std::size_t deviations = 0;
  for (std::size_t m = 0; m < suite.size(); ++m) {
    const auto& inst = suite[m];
    auto cat = bndg::build_catalog(inst);
    bndg::CounterRng rng(m, 1);
    for (int trial = 0; trial < 17; ++trial) {
      auto s = random_strategy(inst, rng);
      std::size_t i = rng.below(inst.player_count());
      std::size_t k = rng.below(cat[i].size());
      auto dev = s;
      dev.actions[i][k] = cat[i][k][rng.below(cat[i][k].size())];
      Rational dk = bndg::expected_player_cost(inst, s, i) - bndg::expected_player_cost(inst, dev, i);
      Rational dpsi = bndg::expected_potential(inst, s) - bndg::expected_potential(inst, dev);
      auto ref_s = oracle::expected(inst, oracle::from_profile(s));
      auto ref_d = oracle::expected(inst, oracle::from_profile(dev));
      t.check(dk == dpsi, "instance " + std::to_string(m) + ": " + dk.str() + " != " + dpsi.str());
      t.check(ref_s.player[i] - ref_d.player[i] == ref_s.potential - ref_d.potential, "oracle identity");
      ++deviations;
    }
  }
  double secs = seconds_since(t0);
  t.check(deviations >= 1000 && suite.size() >= 50, "too few deviations");
  t.check(secs < 10, "runtime " + std::to_string(secs) + " s");
  std::ostringstream os;
  os << deviations << " deviations on " << suite.size() << " instances in " << secs << " s";
  return t.outcome(os.str());
}

Outcome closeness() {
  auto suite = game_suite(15, 200);
  Tally t;
  std::size_t profiles = 0;
  for (const auto& inst : suite) {
    Rational hn = bndg::harmonic(inst.player_count());
    auto cat = bndg::build_catalog(inst);
    bndg::for_each_type_profile(inst, [&](const bndg::TypeProfile& types, const Rational&) {
      std::vector<std::size_t> pick(inst.player_count(), 0);
      while (true) {
        bndg::ActionProfile a;
        for (std::size_t i = 0; i < pick.size(); ++i) a.push_back(cat[i][types[i]][pick[i]]);
        Rational c = bndg::social_cost(inst, a), phi = bndg::rosenthal_potential(inst, a);
        t.check(c <= phi && phi <= hn * c, "C=" + c.str() + " Phi=" + phi.str());
        ++profiles;
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == cat[i][types[i]].size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    });
  }
  // Tight case: three players sharing one edge.
  bndg::Graph g({"r", "a"});
  g.add_edge(0, 1, Rational(7, 3));
  g.set_root(0);
  GameInstance shared;
  shared.kind = GameKind::multicast;
  shared.graph = g;
  shared.players.assign(3, bndg::PlayerSpec{{{bndg::multicast_type(1), Rational(1)}}});
  bndg::validate(shared);
  bndg::ActionProfile all(3, bndg::feasible_actions(shared, 0, bndg::multicast_type(1)).at(0));
  Rational phi = bndg::rosenthal_potential(shared, all);
  t.check(phi == bndg::harmonic(3) * bndg::social_cost(shared, all), "tight case " + phi.str());
  return t.outcome(std::to_string(profiles) + " action profiles on " + std::to_string(suite.size()) +
                   " instances; tight case Phi = H_3 C = " + phi.str());
}

Outcome potential_minimizer_is_bne() {
  auto suite = game_suite(15, 300);
  Tally t;
  for (std::size_t m = 0; m < suite.size(); ++m) {
    auto s = bndg::min_potential_profile(suite[m]);
    t.check(bndg::verify_bne(suite[m], s).is_bne, "instance " + std::to_string(m));
    t.check(oracle::is_bne(suite[m], oracle::from_profile(s)), "oracle rejects instance " + std::to_string(m));
  }
  return t.outcome(std::to_string(suite.size()) + " instances");
}

Outcome bpos_chain() {
  auto suite = game_suite(15, 400);
  Tally t;
  std::size_t certified = 0, zero_opt = 0;
  for (std::size_t m = 0; m < suite.size(); ++m) {
    const auto& inst = suite[m];
    if (bndg::expected_opt(inst).is_zero()) {
      ++zero_opt;
      continue;
    }
    Rational bpos = bndg::bpos_exact(inst), ig = bndg::information_gap_exact(inst);
    t.check(bpos <= bndg::harmonic(inst.player_count()) * ig, "instance " + std::to_string(m) + ": bpos " + bpos.str());
    auto ref = oracle::search(inst);
    Rational opt = oracle::expected_opt(inst);
    t.check(bpos == ref.best_bne_social / opt && ig == ref.min_social / opt, "oracle mismatch on " + std::to_string(m));
    auto cert = bndg::potential_method_certificate(inst);
    for (const auto& l : cert.links) t.check(l.pass, l.id + " on instance " + std::to_string(m));
    ++certified;
  }
  t.check(certified >= 50, "only " + std::to_string(certified) + " certified");
  return t.outcome(std::to_string(certified) + " instances certified link-by-link (" + std::to_string(zero_opt) +
                   " with E[OPT] = 0 skipped)");
}

Outcome steiner_scheme() {
  auto t0 = std::chrono::steady_clock::now();
  Tally t;
  bndg::CounterRng rng(500, 0);
  std::size_t cases = 0;
  for (; cases < 250; ++cases) {
    std::size_t n = 2 + rng.below(5);
    bndg::Graph g;
    for (std::size_t v = 0; v < n; ++v) g.add_node("n" + std::to_string(v));
    for (NodeId v = 1; v < n; ++v) g.add_edge(rng.below(v), v, Rational(rng.between(1, 8), 2));
    for (std::size_t k = 0, extra = rng.below(6); k < extra; ++k) {
      NodeId u = rng.below(n), v = rng.below(n);
      if (u != v && !g.edge_between(u, v)) g.add_edge(u, v, Rational(rng.between(1, 8), 2));
    }
    g.set_root(0);
    auto scheme = bndg::steiner_scheme(g);
    std::vector<NodeId> raw;
    for (std::size_t k = 0, m = 1 + rng.below(4); k < m; ++k) raw.push_back(rng.below(n));
    auto u = bndg::make_client_set(raw);
    NodeId x = rng.below(n);
    std::string tag = "case " + std::to_string(cases);
    t.check(scheme.optimum_cost(u) == *oracle::steiner_cost(g, scheme.rooted(u)), tag + " Steiner oracle");
    t.check(bndg::check_competitiveness(scheme, u).pass, tag + " competitiveness");
    t.check(bndg::check_strictness(scheme, u, x).pass, tag + " strictness");
    auto bigger = bndg::with_client(u, x);
    for (NodeId v : u) t.check(bndg::check_cross_monotonicity(scheme, u, bigger, v).pass, tag + " cross-monotonicity");
  }
  // Triangle r, a, b with (r,a) = (r,b) = 2, (a,b) = 1: U = {a}, x = b is tight.
  bndg::Graph tri({"r", "a", "b"});
  tri.add_edge(0, 1, 2);
  tri.add_edge(0, 2, 2);
  tri.add_edge(1, 2, 1);
  tri.set_root(0);
  auto scheme = bndg::steiner_scheme(tri);
  std::vector<NodeId> a{1};
  auto tight = bndg::check_strictness(scheme, a, 2);
  t.check(tight.pass && tight.lhs == Rational(1) && tight.rhs == Rational(1), "tight triangle case");
  double secs = seconds_since(t0);
  t.check(secs < 30, "runtime " + std::to_string(secs) + " s");
  std::ostringstream os;
  os << cases << " cases, " << t.checks() << " checks, tight strictness " << tight.lhs << " = " << tight.rhs << ", " << secs
     << " s";
  return t.outcome(os.str());
}

Outcome sampling_bound(bool iid) {
  Tally t;
  std::vector<GameInstance> suite;
  std::size_t independent = 0;
  if (iid) {
    suite = multicast_suite(55, 600, true, false);
  } else {
    suite = multicast_suite(45, 700, false, false);
    for (auto& inst : multicast_suite(15, 800, false, true)) suite.push_back(std::move(inst));
    independent = 15;
  }
  auto variant = iid ? bndg::Variant::iid : bndg::Variant::noniid;
  for (std::size_t m = 0; m < suite.size(); ++m) {
    const auto& inst = suite[m];
    auto scheme = bndg::steiner_scheme(inst.graph);
    auto rep = bndg::evaluate_construction_exact(inst, scheme, variant);
    Rational opt = oracle::expected_opt(inst);
    t.check(rep.expected_opt == opt, "E[OPT] mismatch on " + std::to_string(m));
    t.check(rep.total <= Rational(3) * opt, "instance " + std::to_string(m) + ": " + rep.total.str() + " > 3 * " + opt.str());
    if (iid) t.check(rep.regrouping && rep.regrouping->lhs == rep.regrouping->rhs, "regrouping on " + std::to_string(m));
  }
  std::string what = std::to_string(suite.size()) + " instances";
  if (!iid) what += " (" + std::to_string(independent) + " independent-decisions)";
  if (iid) what += ", regrouping exact";
  return t.outcome(what);
}

Outcome information_gap_constants() {
  Tally t;
  std::ostringstream os;
  for (auto [kind, bound] : {std::pair{GameKind::multicast, 3}, {GameKind::source_sink, 5}, {GameKind::vertex_cover, 6}}) {
    std::size_t checked = 0;
    Rational worst(0);
    for (std::uint64_t k = 0; k < 60; ++k) {
      bndg::GenParams p;
      p.kind = kind;
      p.seed = 900 + k;
      p.players = 1 + k % 3;
      p.types = 1 + (k / 3) % 3;
      p.nodes = 3 + k % 3;
      p.extra_edges = k % 4;
      p.iid = true;
      auto inst = bndg::generate_instance(p);
      if (bndg::expected_opt(inst).is_zero()) continue;
      Rational ig = bndg::information_gap_exact(inst);
      t.check(ig <= Rational(bound), std::string(bndg::to_string(kind)) + " seed " + std::to_string(p.seed) + ": " + ig.str());
      worst = std::max(worst, ig);
      ++checked;
    }
    os << (os.tellp() > 0 ? "; " : "") << bndg::to_string(kind) << " " << checked << " instances, max " << worst
       << " (<= " << bound << ")";
  }
  return t.outcome(os.str());
}

Outcome oracle_equivalence() {
  Tally t;
  bndg::CounterRng rng(1000, 0);
  for (int k = 0; k < 500; ++k) {
    std::size_t n = 2 + rng.below(5);
    bndg::Graph g;
    for (std::size_t v = 0; v < n; ++v) g.add_node("n" + std::to_string(v));
    for (NodeId v = 1; v < n; ++v) g.add_edge(rng.below(v), v, Rational(rng.between(0, 8), 2));
    for (std::size_t e = 0, extra = rng.below(7); e < extra && g.edge_count() < 10; ++e) {
      NodeId u = rng.below(n), v = rng.below(n);
      if (u != v && !g.edge_between(u, v)) g.add_edge(u, v, Rational(rng.between(0, 8), 2));
    }
    std::vector<NodeId> terms;
    for (NodeId v = 0; v < n; ++v) {
      if (rng.chance(1, 2)) terms.push_back(v);
    }
    auto tree = bndg::steiner_tree_exact(g, terms);
    t.check(tree.cost == *oracle::steiner_cost(g, terms) && bndg::connects(g, tree.ids, terms),
            "graph " + std::to_string(k));
  }
  std::size_t opt_checked = 0;
  for (const auto& inst : game_suite(25, 1100)) {
    bndg::CounterRng pick(opt_checked, 3);
    std::vector<bndg::GameType> types;
    for (const auto& p : inst.players) types.push_back(p.distribution[pick.below(p.distribution.size())].type);
    t.check(bndg::ex_post_opt(inst, types).cost == oracle::joint_opt(inst, types), "ex-post OPT " + std::to_string(opt_checked));
    ++opt_checked;
  }
  return t.outcome("500 graphs; " + std::to_string(opt_checked) + " ex-post optima");
}

struct Captured {
  std::string output;
  int status = -1;
};

Captured capture(const std::string& cmd) {
  Captured c;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return c;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) c.output.append(buf, got);
  int raw = pclose(pipe);
  c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return c;
}

Outcome determinism(const std::string& tool, const std::string& dir) {
  std::string tri = " --instance '" + dir + "/triangle_iid.json'";
  std::string vc = " --instance '" + dir + "/vertex_cover.json'";
  std::vector<std::string> runs{
      "eval" + tri + " --strategy '" + dir + "/triangle_strategy.json'",
      "bne" + tri,
      "bne" + vc + " --format csv",
      "bpos" + tri,
      "ig" + tri + " --format csv",
      "certify" + tri,
      "certify" + vc + " --format csv",
      "scheme-check" + tri,
      "scheme-check" + tri + " --samples 20 --seed 4 --format csv",
      "sample" + tri,
      "sample" + tri + " --samples 300 --seed 17",
      "sample" + tri + " --variant noniid --samples 300 --seed 17 --format csv",
      "gen --seed 21",
      "gen --seed 21 --kind hypergraph-cover --noniid --nodes 5",
  };
  Tally t;
  for (const auto& r : runs) {
    std::string cmd = "'" + tool + "' " + r;
    auto a = capture(cmd), b = capture(cmd);
    t.check(a.status == 0 && b.status == 0, "'" + r + "' exited " + std::to_string(a.status));
    t.check(!a.output.empty() && a.output == b.output, "'" + r + "' output differs");
  }
  return t.outcome(std::to_string(runs.size()) + " command lines reproduced byte-for-byte");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <bndg tool> <instances dir>\n";
    return 1;
  }
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"potential identity", potential_identity},
      {"closeness", closeness},
      {"potential minimizer is a BNE", potential_minimizer_is_bne},
      {"BPoS <= H_n * IG and certificate chain", bpos_chain},
      {"Steiner scheme properties", steiner_scheme},
      {"i.i.d. sampling bound and regrouping", [] { return sampling_bound(true); }},
      {"non-i.i.d. sampling bound", [] { return sampling_bound(false); }},
      {"information gap constants", information_gap_constants},
      {"oracle equivalence", oracle_equivalence},
      {"CLI determinism", [&] { return determinism(argv[1], argv[2]); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].first << "): " << o.detail
              << "\n";
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed\n" : "all criteria passed\n");
  return failed ? 1 : 0;
}
