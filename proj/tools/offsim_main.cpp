#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "offsim/config.hpp"
#include "offsim/figures.hpp"
#include "offsim/trace.hpp"

namespace {

// Exit codes: 0 ok, 2 usage/config, 3 runtime, 4 audit violation.
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitAudit = 4;

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw offsim::SimError(offsim::ErrorCode::io_error, "cannot write " + path);
  }
  out << content;
}

int cmd_run(const std::string &config_path, const std::string &out_dir,
            std::optional<std::uint64_t> seed_override, bool parallel,
            bool emit_traces, bool quiet) {
  using namespace offsim;
  Scenario sc = load_scenario(config_path);
  if (seed_override) sc.game.seed = *seed_override;
  Topology topo = sc.build_topology();
  ExperimentResult result = run_experiment(sc.game, topo, parallel);

  std::filesystem::create_directories(out_dir);
  write_file(out_dir + "/games.csv", games_csv(result.traces));
  write_file(out_dir + "/transfers.csv", transfers_csv(result.traces));
  write_file(out_dir + "/summary.txt", summary_text(sc.game, result.metrics));
  if (emit_traces) {
    write_file(out_dir + "/traces.jsonl", trace_jsonl(topo, result.traces));
  }

  if (!quiet) {
    char ratio[32];
    std::snprintf(ratio, sizeof(ratio), "%.4f",
                  result.metrics.delivery_ratio());
    std::cout << "games: " << result.metrics.games
              << "  delivery_ratio: " << ratio << '\n';
    std::vector<std::pair<Money, NodeId>> ranked;
    for (const auto &[id, nm] : result.metrics.per_node) {
      if (id != kOperatorAccount) ranked.emplace_back(nm.balance, id);
    }
    std::sort(ranked.rbegin(), ranked.rend());
    std::cout << "top balances:";
    for (std::size_t i = 0; i < ranked.size() && i < 5; ++i) {
      std::cout << "  " << account_name(ranked[i].second) << "="
                << ranked[i].first.str();
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_replay(const std::string &trace_path, bool quiet) {
  using namespace offsim;
  TraceFile tf = load_trace(trace_path);
  auto violations = audit(tf);
  if (violations.empty()) {
    if (!quiet) {
      std::cout << "audit ok: " << tf.traces.size() << " games, 0 violations\n";
    }
    return 0;
  }
  const AuditViolation &v = violations.front();
  std::cerr << "audit violation: " << v.rule << " (round " << v.round
            << " game " << v.game;
  if (!v.detail.empty()) std::cerr << ", " << v.detail;
  std::cerr << "); " << violations.size() << " violation(s) total\n";
  return kExitAudit;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Auction-based ad hoc forwarding simulator"};
  app.require_subcommand(1);

  // run
  auto *run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string config_path, out_dir = "out";
  std::uint64_t seed_value = 0;
  bool parallel = false, quiet = false, emit_traces = false;
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output directory");
  auto *seed_opt = run->add_option("--seed", seed_value, "Master seed override");
  run->add_flag("--parallel", parallel, "Run games concurrently");
  run->add_flag("--traces", emit_traces, "Also write traces.jsonl");
  run->add_flag("--quiet", quiet, "Suppress stdout report");

  // validate
  auto *validate = app.add_subcommand("validate", "Validate a config file");
  std::string v_config;
  validate->add_option("--config", v_config, "Scenario config file")->required();

  // gen-topology
  auto *gen = app.add_subcommand("gen-topology", "Generate a geometric topology");
  int g_handhelds = 8, g_aps = 2;
  double g_radius = 0.4;
  std::uint64_t g_seed = 1;
  std::string g_out;
  gen->add_option("--handhelds", g_handhelds, "Number of handhelds");
  gen->add_option("--aps", g_aps, "Number of access points");
  gen->add_option("--radius", g_radius, "Connection radius in the unit square");
  gen->add_option("--seed", g_seed, "Generator seed");
  gen->add_option("--out", g_out, "Output file (default: stdout)");

  // bid-curve
  auto *curve = app.add_subcommand("bid-curve",
                                   "Emit logistic bid curve samples as CSV");
  double c_budget = 200.0, c_fine = 80.0;
  std::vector<double> c_a{0.25, 0.5, 1.0, 2.0};
  int c_samples = 201;
  curve->add_option("--budget", c_budget, "Announced budget B_u");
  curve->add_option("--fine", c_fine, "Announced fine F_u");
  curve->add_option("--a", c_a, "Steepness values a_n (repeatable)");
  curve->add_option("--samples", c_samples, "Samples per curve over c in [0,2]");

  // preference-grid
  auto *grid = app.add_subcommand("preference-grid",
                                  "Emit preference plane samples as CSV");
  double p_budget = 20.0, p_cmax = 3.0, p_k1 = 2.0, p_k2 = 3.0;
  int p_grid = 21;
  grid->add_option("--budget", p_budget, "Own budget B_n");
  grid->add_option("--c-max", p_cmax, "Maximum relative tightness");
  grid->add_option("--k1", p_k1, "Preference at (free forward, zero surplus)");
  grid->add_option("--k2", p_k2, "Preference at (full price, best surplus)");
  grid->add_option("--grid", p_grid, "Grid points per axis");

  // replay
  auto *replay = app.add_subcommand("replay", "Audit a recorded trace file");
  std::string r_trace;
  bool r_quiet = false;
  replay->add_option("--trace", r_trace, "traces.jsonl from a prior run")
      ->required();
  replay->add_flag("--quiet", r_quiet, "Suppress the ok line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = seed_value;
      return cmd_run(config_path, out_dir, seed, parallel, emit_traces, quiet);
    }
    if (*validate) {
      offsim::Scenario sc = offsim::load_scenario(v_config);
      offsim::Topology topo = sc.build_topology();
      std::cout << "ok: " << topo.handhelds().size() << " handhelds, "
                << topo.access_points().size() << " access points\n";
      return 0;
    }
    if (*gen) {
      auto topo = offsim::Topology::generate_geometric(g_handhelds, g_aps,
                                                       g_radius, g_seed);
      if (g_out.empty()) {
        std::cout << topo.to_json_text();
      } else {
        topo.save(g_out);
      }
      return 0;
    }
    if (*curve) {
      std::cout << offsim::bid_curve_csv(offsim::Money::from_double(c_budget),
                                         offsim::Money::from_double(c_fine),
                                         c_a, c_samples);
      return 0;
    }
    if (*grid) {
      std::cout << offsim::preference_grid_csv(
          offsim::Money::from_double(p_budget), p_cmax, p_k1, p_k2, p_grid);
      return 0;
    }
    if (*replay) return cmd_replay(r_trace, r_quiet);
  } catch (const offsim::SimError &e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case offsim::ErrorCode::config_error:
      case offsim::ErrorCode::parse_error:
        return kExitConfig;
      default:
        return kExitRuntime;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
