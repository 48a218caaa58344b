#pragma once

// Command dispatch for the bndg tool. run() is a pure function of its inputs
// and returns the report text and exit code: 0 when every checked claim
// holds, 2 when some claim fails. Errors propagate as exceptions; the front
// end maps them to a diagnostic on stderr and exit code 1.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bndg/cost_sharing.hpp"
#include "bndg/equilibria.hpp"
#include "bndg/expectation.hpp"
#include "bndg/generator.hpp"
#include "bndg/instance_io.hpp"
#include "bndg/sampling.hpp"

namespace bndg {

enum class Format { json, csv };

struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> samples;
  Format format = Format::json;
  std::optional<std::uint64_t> cap_strategies;
  std::optional<std::uint64_t> cap_support;
  std::optional<std::string> strategy_text;
  std::optional<Variant> variant;
  std::optional<Rational> alpha, beta;
  std::size_t max_rounds = 1000;
  GenParams gen;
};

struct RunResult {
  std::string output;
  int exit_code = 0;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"eval", "bne", "bpos", "ig", "certify", "scheme-check", "sample", "gen"};
  return names;
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180 quoting, LF line endings)

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_table(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += csv_field(row[k]);
    }
    out += '\n';
  }
  return out;
}

inline std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "";
  return j.dump();
}

/// Dotted-path rows of a JSON report; arrays are indexed.
inline void flatten(const Json& j, const std::string& path, std::vector<std::vector<std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, rows);
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], path + "[" + std::to_string(k) + "]", rows);
    if (j.empty()) rows.push_back({path, ""});
  } else {
    rows.push_back({path, scalar_text(j)});
  }
}

inline std::string field_value_csv(const Json& report) {
  std::vector<std::vector<std::string>> rows{{"field", "value"}};
  flatten(report, "", rows);
  return csv_table(rows);
}

// ---------------------------------------------------------------------------
// Report pieces

namespace detail {

inline Json check_json(const PropertyCheck& c) { return {{"lhs", c.lhs.str()}, {"rhs", c.rhs.str()}, {"pass", c.pass}}; }

inline Json violation_json(const GameInstance& inst, const EquilibriumReport& rep) {
  if (!rep.worst_violation) return nullptr;
  const auto& v = *rep.worst_violation;
  return {{"player", v.player},
          {"type", type_json(inst, v.type)},
          {"deviation", action_json(inst, v.deviation)},
          {"gap", v.gap.str()}};
}

inline Json ratio_json(const GameInstance& inst, const char* key, const RatioResult& r) {
  return {{key, r.ratio.str()},
          {"expected_opt", r.expected_opt.str()},
          {"social_cost", r.cost.str()},
          {"witness", strategy_json(inst, r.witness)}};
}

inline std::string client_set_name(const GameInstance& inst, std::span<const NodeId> u) {
  std::string s;
  for (std::size_t k = 0; k < u.size(); ++k) s += (k ? "|" : "") + inst.node_name(u[k]);
  return s;
}

inline RunResult finish(const RunConfig& cfg, const Json& report, int code,
                        const std::optional<std::vector<std::vector<std::string>>>& table = std::nullopt) {
  if (cfg.format == Format::json) return {report.dump(2) + "\n", code};
  return {table ? csv_table(*table) : field_value_csv(report), code};
}

inline RunResult run_eval(const RunConfig& cfg, const GameInstance& inst) {
  if (!cfg.strategy_text) throw Error(ErrorCode::invalid_argument, "eval needs --strategy");
  StrategyProfile s = parse_strategy(inst, *cfg.strategy_text);
  Json costs = Json::array();
  for (std::size_t i = 0; i < inst.player_count(); ++i) costs.push_back(expected_player_cost(inst, s, i).str());
  auto bne = verify_bne(inst, s);
  Json report{{"command", "eval"},
              {"expected_social_cost", expected_social_cost(inst, s).str()},
              {"expected_potential", expected_potential(inst, s).str()},
              {"expected_opt", expected_opt(inst).str()},
              {"player_costs", costs},
              {"is_bne", bne.is_bne},
              {"worst_violation", violation_json(inst, bne)}};
  return finish(cfg, report, 0);
}

inline RunResult run_bne(const RunConfig& cfg, const GameInstance& inst) {
  auto star = min_potential_profile(inst);
  auto rep = verify_bne(inst, star);
  StrategyProfile start;
  for (const auto& per : build_catalog(inst)) {
    start.actions.emplace_back();
    for (const auto& acts : per) start.actions.back().push_back(acts.front());
  }
  auto dyn = best_response_dynamics(inst, start, cfg.max_rounds);
  bool dyn_bne = verify_bne(inst, dyn.profile).is_bne;
  Json trace = Json::array();
  for (const auto& p : dyn.potential) trace.push_back(p.str());
  bool decreasing = std::adjacent_find(dyn.potential.begin(), dyn.potential.end(),
                                       [](const Rational& a, const Rational& b) { return !(b < a); }) ==
                    dyn.potential.end();
  Json report{{"command", "bne"},
              {"claim", "potential_minimizer.bne"},
              {"profile", strategy_json(inst, star)},
              {"expected_potential", expected_potential(inst, star).str()},
              {"expected_social_cost", expected_social_cost(inst, star).str()},
              {"is_bne", rep.is_bne},
              {"worst_violation", violation_json(inst, rep)},
              {"dynamics",
               {{"rounds", dyn.rounds},
                {"potential_trace", trace},
                {"strictly_decreasing", decreasing},
                {"is_bne", dyn_bne},
                {"profile", strategy_json(inst, dyn.profile)}}}};
  return finish(cfg, report, rep.is_bne && dyn_bne && decreasing ? 0 : 2);
}

inline RunResult run_certify(const RunConfig& cfg, const GameInstance& inst) {
  auto rep = potential_method_certificate(inst);
  Json links = Json::array();
  std::vector<std::vector<std::string>> rows{{"claim", "relation", "lhs", "rhs", "pass"}};
  for (const auto& l : rep.links) {
    links.push_back({{"claim", l.id}, {"relation", l.relation}, {"lhs", l.lhs.str()}, {"rhs", l.rhs.str()}, {"pass", l.pass}});
    rows.push_back({l.id, l.relation, l.lhs.str(), l.rhs.str(), l.pass ? "true" : "false"});
  }
  Json report{{"command", "certify"},
              {"lambda", rep.lambda.str()},
              {"mu", rep.mu.str()},
              {"k_star", rep.k_star.str()},
              {"psi_star", rep.psi_star.str()},
              {"psi_tilde", rep.psi_tilde.str()},
              {"k_tilde", rep.k_tilde.str()},
              {"expected_opt", rep.expected_opt.str()},
              {"information_gap", rep.information_gap.str()},
              {"bpos", rep.bpos.str()},
              {"s_star", strategy_json(inst, rep.s_star)},
              {"s_tilde", strategy_json(inst, rep.s_tilde)},
              {"links", links},
              {"pass", rep.all_pass()}};
  return finish(cfg, report, rep.all_pass() ? 0 : 2, rows);
}

template <CostSharingScheme S>
RunResult run_scheme_check(const RunConfig& cfg, const GameInstance& inst, const S& scheme,
                           const SteinerScheme& steiner) {
  const Graph& g = inst.graph;
  NodeId r = *g.root();
  std::vector<NodeId> clients;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v != r) clients.push_back(v);
  }
  // Client sets: all subsets when small, otherwise seeded random subsets.
  std::vector<ClientSet> sets;
  if (clients.size() <= 8) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << clients.size()); ++mask) {
      ClientSet u;
      for (std::size_t k = 0; k < clients.size(); ++k) {
        if (mask >> k & 1) u.push_back(clients[k]);
      }
      sets.push_back(std::move(u));
    }
  } else {
    for (std::uint64_t k = 0; k < cfg.samples.value_or(200); ++k) {
      CounterRng rng(cfg.seed, k);
      ClientSet u;
      for (NodeId v : clients) {
        if (rng.chance(1, 2)) u.push_back(v);
      }
      sets.push_back(std::move(u));
    }
  }
  std::vector<std::vector<std::string>> rows{{"scheme", "property", "U", "x", "lhs", "rhs", "pass"}};
  Json checks = Json::array();
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> summary;
  bool all = true;
  auto record = [&](const std::string& property, std::span<const NodeId> u, std::optional<NodeId> x,
                    const PropertyCheck& c) {
    std::string us = client_set_name(inst, u), xs = x ? inst.node_name(*x) : "";
    rows.push_back({scheme.name(), property, us, xs, c.lhs.str(), c.rhs.str(), c.pass ? "true" : "false"});
    checks.push_back({{"property", property}, {"U", us}, {"x", xs}, {"lhs", c.lhs.str()}, {"rhs", c.rhs.str()}, {"pass", c.pass}});
    auto& [cases, failures] = summary[property];
    ++cases;
    if (!c.pass) {
      ++failures;
      all = false;
    }
  };
  for (const auto& u : sets) {
    record("scheme.competitiveness", u, std::nullopt, check_competitiveness(scheme, u));
    record("scheme.approximation", u, std::nullopt, check_approximation(scheme, u));
    auto [share_mst, mst_opt] = check_mst_chain(steiner, u);
    record("scheme.mst_share", u, std::nullopt, share_mst);
    record("scheme.mst_opt", u, std::nullopt, mst_opt);
    for (NodeId x = 0; x < g.node_count(); ++x) record("scheme.strictness", u, x, check_strictness(scheme, u, x));
    for (NodeId x : u) {
      for (NodeId y : clients) {
        if (!std::binary_search(u.begin(), u.end(), y)) {
          record("scheme.cross_monotonicity", u, x, check_cross_monotonicity(scheme, u, with_client(u, y), x));
        }
      }
    }
  }
  Json sum = Json::object();
  for (const auto& [k, v] : summary) sum[k] = {{"cases", v.first}, {"failures", v.second}};
  Json report{{"command", "scheme-check"},
              {"scheme", scheme.name()},
              {"alpha", Rational(scheme.alpha()).str()},
              {"beta", Rational(scheme.beta()).str()},
              {"checks", checks},
              {"summary", sum},
              {"pass", all}};
  return finish(cfg, report, all ? 0 : 2, rows);
}

template <CostSharingScheme S>
RunResult run_sample(const RunConfig& cfg, const GameInstance& inst, const S& scheme) {
  Variant variant = cfg.variant.value_or(identical_distributions(inst) ? Variant::iid : Variant::noniid);
  ConstructionReport rep = cfg.samples ? evaluate_construction_mc(inst, scheme, variant, *cfg.samples, cfg.seed)
                                       : evaluate_construction_exact(inst, scheme, variant);
  Json checks{{"sampling.bound", check_json({rep.total, rep.bound, rep.pass})},
              {"sampling.first_stage", check_json(rep.first_stage_check)},
              {"sampling.augmentation", check_json(rep.augmentation_check)},
              {"sampling.union", check_json(rep.union_check)}};
  if (rep.regrouping) checks["sampling.regrouping"] = check_json(*rep.regrouping);
  bool all = std::all_of(checks.begin(), checks.end(), [](const Json& c) { return c["pass"].get<bool>(); });
  Json report{{"command", "sample"},
              {"mode", rep.exact ? "exact" : "monte-carlo"},
              {"variant", std::string(to_string(rep.variant))},
              {"samples", rep.samples},
              {"seed", rep.seed},
              {"alpha", rep.alpha.str()},
              {"beta", rep.beta.str()},
              {"first_stage", rep.first_stage.str()},
              {"augmentation", rep.augmentation.str()},
              {"total", rep.total.str()},
              {"expected_opt", rep.expected_opt.str()},
              {"bound", rep.bound.str()},
              {"pass", rep.pass},
              {"ig_upper_bound", rep.ig_upper_bound ? Json(rep.ig_upper_bound->str()) : Json(nullptr)},
              {"checks", checks}};
  if (rep.standard_error) report["standard_error_approx"] = *rep.standard_error;
  if (rep.best_sample) {
    Json draws = Json::array();
    for (const auto& t : rep.best_sample->draws) draws.push_back(type_json(inst, t));
    report["derandomized_sample"] = draws;
  }
  std::vector<std::vector<std::string>> rows{
      {"variant", "samples", "seed", "first_stage", "augmentation", "total", "bound", "pass", "ig_upper_bound"},
      {std::string(to_string(rep.variant)), std::to_string(rep.samples), std::to_string(rep.seed),
       rep.first_stage.str(), rep.augmentation.str(), rep.total.str(), rep.bound.str(), rep.pass ? "true" : "false",
       rep.ig_upper_bound ? rep.ig_upper_bound->str() : ""}};
  return finish(cfg, report, all ? 0 : 2, rows);
}

inline SteinerScheme require_steiner(const GameInstance& inst) {
  if (inst.kind != GameKind::multicast) {
    throw Error(ErrorCode::invalid_argument, "only the Steiner tree scheme (multicast games) is available");
  }
  return SteinerScheme(inst.graph);
}

}  // namespace detail

/// Runs one command. `instance` may be null only for `gen`.
inline RunResult run(const RunConfig& cfg, const GameInstance* instance) {
  using namespace detail;
  if (cfg.command == "gen") {
    if (cfg.format != Format::json) throw Error(ErrorCode::invalid_argument, "gen writes JSON instance files only");
    GenParams p = cfg.gen;
    p.seed = cfg.seed;
    return {serialize_instance(generate_instance(p)), 0};
  }
  if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end()) {
    throw Error(ErrorCode::invalid_argument, "unknown command '" + cfg.command + "'");
  }
  if (!instance) throw Error(ErrorCode::invalid_argument, cfg.command + " needs --instance");
  GameInstance inst = *instance;
  if (cfg.cap_strategies) inst.caps.strategies = *cfg.cap_strategies;
  if (cfg.cap_support) inst.caps.support = *cfg.cap_support;

  if (cfg.command == "eval") return run_eval(cfg, inst);
  if (cfg.command == "bne") return run_bne(cfg, inst);
  if (cfg.command == "bpos") return finish(cfg, ratio_json(inst, "bpos", bpos_analysis(inst)), 0);
  if (cfg.command == "ig") return finish(cfg, ratio_json(inst, "information_gap", information_gap_analysis(inst)), 0);
  if (cfg.command == "certify") return run_certify(cfg, inst);

  SteinerScheme steiner = require_steiner(inst);
  bool overridden = cfg.alpha || cfg.beta;
  DeclaredConstants<SteinerScheme> declared(steiner, cfg.alpha.value_or(steiner.alpha()),
                                            cfg.beta.value_or(steiner.beta()));
  if (cfg.command == "scheme-check") {
    return overridden ? run_scheme_check(cfg, inst, declared, steiner) : run_scheme_check(cfg, inst, steiner, steiner);
  }
  return overridden ? run_sample(cfg, inst, declared) : run_sample(cfg, inst, steiner);
}

/// Structured diagnostic for an exception escaping run().
inline std::string error_json(const std::exception& e) {
  Json j{{"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = std::string(to_string(err->code()));
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) j["line"] = pe->line();
    if (const auto* ve = dynamic_cast<const ValidationError*>(&e)) j["field"] = ve->field();
  } else {
    j["error"] = "Internal";
  }
  return j.dump() + "\n";
}

}  // namespace bndg
