// bndg: command-line front end for Bayesian network design game analyses.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bndg/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bndg::Error(bndg::ErrorCode::invalid_argument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian network design games: equilibria, price of stability, information gap"};
  bndg::RunConfig cfg;
  std::string instance_path, strategy_path, out_path, format = "json", variant, alpha, beta, kind = "multicast";
  bool noniid = false;

  app.add_option("command", cfg.command, "eval | bne | bpos | ig | certify | scheme-check | sample | gen")
      ->required()
      ->check(CLI::IsMember(bndg::commands()));
  app.add_option("--instance", instance_path, "instance file (JSON)");
  app.add_option("--seed", cfg.seed, "random seed")->default_val(0);
  app.add_option("--samples", cfg.samples, "Monte-Carlo draws (sample) or random client sets (scheme-check)");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--cap-strategies", cfg.cap_strategies, "strategy-profile enumeration cap");
  app.add_option("--cap-support", cfg.cap_support, "type-profile enumeration cap");
  app.add_option("--strategy", strategy_path, "strategy file for eval");
  app.add_option("--variant", variant, "sampling construction")->check(CLI::IsMember({"iid", "noniid"}));
  app.add_option("--alpha", alpha, "override the scheme's declared alpha");
  app.add_option("--beta", beta, "override the scheme's declared beta");
  app.add_option("--max-rounds", cfg.max_rounds, "best-response round limit")->default_val(1000);

  auto* gen = app.add_option_group("gen", "instance generator");
  gen->add_option("--kind", kind, "game kind")
      ->check(CLI::IsMember({"multicast", "source-sink", "vertex-cover", "hypergraph-cover"}));
  gen->add_option("--nodes", cfg.gen.nodes, "node count")->default_val(cfg.gen.nodes);
  gen->add_option("--players", cfg.gen.players, "player count")->default_val(cfg.gen.players);
  gen->add_option("--types", cfg.gen.types, "support size per player")->default_val(cfg.gen.types);
  gen->add_option("--extra-edges", cfg.gen.extra_edges, "edges beyond a spanning tree")->default_val(cfg.gen.extra_edges);
  gen->add_option("--arity", cfg.gen.arity, "hyperedge size")->default_val(cfg.gen.arity);
  gen->add_option("--max-cost", cfg.gen.max_cost, "largest element cost")->default_val(cfg.gen.max_cost);
  gen->add_option("--cost-den", cfg.gen.cost_den, "cost denominator")->default_val(cfg.gen.cost_den);
  gen->add_flag("--noniid", noniid, "independent supports per player");
  gen->add_flag("--independent-decisions", cfg.gen.independent_decisions, "two-point {node, root} distributions");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.format = format == "csv" ? bndg::Format::csv : bndg::Format::json;
    cfg.gen.kind = *bndg::parse_kind(kind);
    cfg.gen.iid = !noniid;
    if (!variant.empty()) cfg.variant = bndg::parse_variant(variant);
    if (!alpha.empty()) cfg.alpha = bndg::Rational::parse(alpha);
    if (!beta.empty()) cfg.beta = bndg::Rational::parse(beta);
    if (!strategy_path.empty()) cfg.strategy_text = read_file(strategy_path);
    std::optional<bndg::GameInstance> inst;
    if (!instance_path.empty()) inst = bndg::parse_instance(read_file(instance_path));

    bndg::RunResult result = bndg::run(cfg, inst ? &*inst : nullptr);
    if (out_path.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!(out << result.output)) throw bndg::Error(bndg::ErrorCode::invalid_argument, "cannot write '" + out_path + "'");
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << bndg::error_json(e);
    return 1;
  }
}
