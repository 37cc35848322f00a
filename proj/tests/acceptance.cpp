// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>
#include <string>
#include <vector>

#include "offsim/config.hpp"
#include "offsim/figures.hpp"
#include "offsim/trace.hpp"
#include "test_util.hpp"

using namespace offsim;
namespace fs = std::filesystem;

namespace {

Money m(double v) { return Money::from_double(v); }

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string &msg) {
  if (!cond) throw Failure(msg);
}

// ---------------------------------------------------------------- criterion 1

void bid_curve_reproduction() {
  const std::vector<double> a_values{0.25, 0.5, 1.0, 2.0};
  const int samples = 201;
  std::string csv = bid_curve_csv(m(200), m(80), a_values, samples);

  struct Row {
    double a, c;
    Money bid;
  };
  std::vector<Row> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    Row r;
    std::size_t p1 = line.find(','), p2 = line.find(',', p1 + 1);
    r.a = std::stod(line.substr(0, p1));
    r.c = std::stod(line.substr(p1 + 1, p2 - p1 - 1));
    r.bid = Money::parse(line.substr(p2 + 1));
    rows.push_back(r);
  }
  require(rows.size() == a_values.size() * samples, "row count");

  std::size_t idx = 0;
  std::vector<Money> at_half;
  for (double a : a_values) {
    Money prev;
    for (int i = 0; i < samples; ++i, ++idx) {
      const Row &r = rows[idx];
      require(r.a == a, "rows grouped by a");
      require(r.bid >= m(80) && r.bid <= m(200), "bid outside [F, B]");
      if (std::abs(r.c - 1.0) < 1e-12) {
        require(r.bid == m(140), "O(1) must be exactly 140");
      }
      if (std::abs(r.c - 0.5) < 1e-9) at_half.push_back(r.bid);
      if (i > 0) require(r.bid <= prev, "monotone non-increasing in c");
      prev = r.bid;
    }
  }
  require(at_half.size() == a_values.size(), "c = 0.5 on the sample grid");
  for (std::size_t i = 1; i < at_half.size(); ++i) {
    require(at_half[i] > at_half[i - 1],
            "steepness ordering at c = 0.5 must be strictly increasing in a");
  }
}

// ---------------------------------------------------------------- criterion 2

void preference_plane_anchors() {
  const Money bn = m(20);
  const double c_max = 3.0, k1 = 2.0, k2 = 3.0;
  StrategyParams p;
  p.k1 = k1;
  p.k2 = k2;
  require(preference(bn, 0.0, bn, c_max, p) == 0.0, "P(op=B, c=0) must be 0");
  require(preference(m(0), 0.0, bn, c_max, p) == k1, "P(0, 0) must be k1");
  require(preference(bn, c_max, bn, c_max, p) == k2, "P(B, c_max) must be k2");

  // Every grid point must lie on the affine plane k1 - k1 op/B + k2 c/c_max.
  const int grid = 21;
  std::string csv = preference_grid_csv(bn, c_max, k1, k2, grid);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    std::size_t p1 = line.find(','), p2 = line.find(',', p1 + 1);
    const double op = std::stod(line.substr(0, p1));
    const double c = std::stod(line.substr(p1 + 1, p2 - p1 - 1));
    const double pref = std::stod(line.substr(p2 + 1));
    const double expect = k1 - k1 * op / bn.to_double() + k2 * c / c_max;
    require(std::abs(pref - expect) <= 1e-9, "interior point off the plane");
    ++rows;
  }
  require(rows == grid * grid, "grid row count");
}

// ---------------------------------------------------------------- criterion 3

void punishment_scenario() {
  // AP1 10 - greedy 0 - tightness 1 - AP2 11
  Topology topo({{10, NodeRole::access_point},
                 {0, NodeRole::handheld},
                 {1, NodeRole::handheld},
                 {11, NodeRole::access_point}},
                {{10, 0}, {0, 1}, {1, 11}});
  GameConfig c;
  c.b0 = {true, m(100), m(100)};
  c.f0_dist = MoneyDist{true, m(40), m(40)};
  c.h0 = {H0Rule::Mode::constant, 3};
  c.node_strategies[0] = StrategyKind::greedy_zero_budget;
  c.node_strategies[1] = StrategyKind::tightness;

  // The source AP is drawn per game; pick a seed injecting at AP1 = 10.
  GameTrace t;
  bool found = false;
  for (std::uint64_t seed = 0; seed < 50 && !found; ++seed) {
    t = run_game(c, topo, seed, 0, 0);
    found = t.packet.source_ap == 10;
  }
  require(found, "no seed injects at AP1");
  require(t.packet.status == PacketStatus::failed, "game must fail");
  require(t.failure == "drop", "failure must be the drop at t");
  require(t.packet.forwarders == std::vector<NodeId>({0, 1}),
          "packet must reach t before the drop");

  // Independent hand-fold of the fine cascade over the recorded chain.
  std::map<NodeId, Money> oracle;
  for (const HopContract &hc : t.chain.contracts()) {
    oracle[hc.downstream] -= hc.fine;
    oracle[hc.upstream] += hc.fine;
  }
  for (auto &[account, v] : oracle) {
    Money got = t.deltas.count(account) ? t.deltas.at(account) : Money();
    require(got == v, "ledger deviates from the hand-fold oracle");
  }
  Money g_net = t.deltas.count(0) ? t.deltas.at(0) : Money();
  Money t_net = t.deltas.count(1) ? t.deltas.at(1) : Money();
  Money ap_net = t.deltas.count(10) ? t.deltas.at(10) : Money();
  require(g_net == m(-40), "greedy node must owe exactly its fine of 40");
  require(t_net == Money(), "the dropper must end at net zero");
  require(ap_net == m(40), "AP1 must collect the fine");
}

// ---------------------------------------------------------------- criterion 4

void cooperation_baseline() {
  Topology topo = Topology::generate_geometric(8, 2, 0.45, 7);
  GameConfig c;
  c.h0 = {H0Rule::Mode::shortest_plus, 2};
  c.rounds = 10;
  c.games_per_round = 100;
  c.seed = 2024;
  ExperimentResult r = run_experiment(c, topo);
  require(r.metrics.games == 1000, "expected 1000 games");
  require(r.metrics.delivery_ratio() == 1.0,
          "all-cooperative network must deliver every packet");
  for (const GameTrace &t : r.traces) {
    Money total;
    for (auto &[account, d] : t.deltas) total += d;
    require(total == Money(), "money must be conserved in every game");
  }
}

// ---------------------------------------------------------------- criterion 5

void shortest_path_oracle() {
  Rng rng(404);
  int pairs = 0;
  for (int iter = 0; iter < 200; ++iter) {
    Topology topo = testutil::random_topology(rng, 8);
    std::vector<NodeId> ids;
    for (auto &[id, role] : topo.nodes()) ids.push_back(id);
    for (NodeId from : ids) {
      for (NodeId dest : ids) {
        if (from == dest) continue;
        auto expect = testutil::oracle_hop_count(topo, from, dest);
        require(expect.has_value(), "oracle found no route on a valid topology");
        require(topo.hop_count(from, dest) == *expect,
                "hop_count mismatch vs exhaustive enumeration");
        ++pairs;
      }
    }
  }
  require(pairs > 0, "no pairs checked");
}

// ---------------------------------------------------------------- criterion 6

int run_cli(const std::string &args) {
  std::string cmd = std::string(OFFSIM_CLI_PATH) + " " + args +
                    " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) throw Failure("failed to launch the CLI");
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void protocol_audit() {
  // 1000 fuzzed games across random topologies, mixed strategies and seeds.
  Rng rng(555);
  std::vector<TraceFile> files;
  int games = 0;
  while (games < 1000) {
    Topology topo = testutil::random_topology(rng, 8);
    if (topo.access_points().size() < 2) continue;
    GameConfig c;
    c.b0 = {false, m(50), m(200)};
    c.games_per_round = 50;
    c.seed = rng.next_u64();
    for (NodeId h : topo.handhelds()) {
      c.node_strategies[h] = static_cast<StrategyKind>(rng.next_int(0, 4));
    }
    ExperimentResult r = run_experiment(c, topo);
    games += static_cast<int>(r.traces.size());
    files.push_back(TraceFile{topo, std::move(r.traces)});
  }
  for (const TraceFile &tf : files) {
    auto v = audit(tf);
    if (!v.empty()) {
      throw Failure("audit violation on a clean trace: " + v[0].rule + " (" +
                    v[0].detail + ")");
    }
  }

  // Ten distinct injected rule breaks; each must be caught.
  using Mut = std::function<bool(TraceFile &)>;
  auto first_with_auction = [](TraceFile &tf) -> GameTrace * {
    for (auto &t : tf.traces) {
      if (!t.auctions.empty() && !t.auctions[0].bids.empty()) return &t;
    }
    return nullptr;
  };
  std::vector<std::pair<std::string, Mut>> mutations = {
      {"bid over budget",
       [&](TraceFile &tf) {
         GameTrace *t = first_with_auction(tf);
         if (!t) return false;
         t->auctions[0].bids[0].amount =
             t->auctions[0].rfb.budget + Money::from_millis(1);
         return true;
       }},
      {"missing mandatory bid",
       [&](TraceFile &tf) {
         for (auto &t : tf.traces) {
           for (auto &a : t.auctions) {
             if (a.bids.size() < 2 || a.bids.back().bidder == a.winner)
               continue;
             a.bids.pop_back();
             return true;
           }
         }
         return false;
       }},
      {"duplicate bid",
       [&](TraceFile &tf) {
         GameTrace *t = first_with_auction(tf);
         if (!t) return false;
         t->auctions[0].bids.push_back(t->auctions[0].bids[0]);
         return true;
       }},
      {"bid outside the window",
       [&](TraceFile &tf) {
         GameTrace *t = first_with_auction(tf);
         if (!t) return false;
         t->auctions[0].bids[0].submit_time = t->auctions[0].window + 1.0;
         return true;
       }},
      {"winner never bid",
       [&](TraceFile &tf) {
         for (auto &t : tf.traces) {
           for (auto &a : t.auctions) {
             for (NodeId node : tf.topo.handhelds()) {
               bool bid = false;
               for (const Bid &b : a.bids) bid |= b.bidder == node;
               if (!bid) {
                 a.winner = node;
                 return true;
               }
             }
           }
         }
         return false;
       }},
      {"AP not taking the lowest bid",
       [&](TraceFile &tf) {
         for (auto &t : tf.traces) {
           if (t.auctions.empty()) continue;
           auto &a = t.auctions[0];
           Money winning;
           for (const Bid &b : a.bids) {
             if (b.bidder == a.winner) winning = b.amount;
           }
           for (const Bid &b : a.bids) {
             if (b.bidder != a.winner && b.amount > winning) {
               a.winner = b.bidder;
               return true;
             }
           }
         }
         return false;
       }},
      {"fine increased along the chain",
       [&](TraceFile &tf) {
         for (auto &t : tf.traces) {
           if (t.auctions.size() < 2) continue;
           t.auctions[1].rfb.fine =
               t.auctions[0].rfb.fine + Money::from_millis(1);
           return true;
         }
         return false;
       }},
      {"delivery past the hop deadline",
       [&](TraceFile &tf) {
         for (auto &t : tf.traces) {
           if (t.packet.status != PacketStatus::delivered || t.packet.hops < 2)
             continue;
           t.packet.h0 = t.packet.hops - 1;
           return true;
         }
         return false;
       }},
      {"tampered settlement transfer",
       [&](TraceFile &tf) {
         for (auto &t : tf.traces) {
           if (t.transfers.empty() || t.transfers[0].amount == Money())
             continue;
           t.transfers[0].amount -= Money::from_millis(1);
           return true;
         }
         return false;
       }},
      {"broken conservation",
       [&](TraceFile &tf) {
         for (auto &t : tf.traces) {
           if (t.deltas.empty()) continue;
           t.deltas.begin()->second += Money::from_millis(1);
           return true;
         }
         return false;
       }},
  };

  for (auto &[name, mutate] : mutations) {
    bool applied = false;
    for (const TraceFile &clean : files) {
      TraceFile copy = clean;
      if (!mutate(copy)) continue;
      applied = true;
      require(!audit(copy).empty(), "mutation not caught: " + name);
      break;
    }
    require(applied, "mutation not applicable anywhere: " + name);
  }

  // The replay command mirrors the audit verdict through exit codes.
  fs::path dir = fs::temp_directory_path() / "offsim_acceptance";
  fs::create_directories(dir);
  const TraceFile &clean = files.front();
  {
    std::ofstream out(dir / "clean.jsonl");
    out << trace_jsonl(clean.topo, clean.traces);
  }
  TraceFile broken = clean;
  require(mutations[0].second(broken), "no mutable trace for the CLI check");
  {
    std::ofstream out(dir / "broken.jsonl");
    out << trace_jsonl(broken.topo, broken.traces);
  }
  require(run_cli("replay --trace " + (dir / "clean.jsonl").string()) == 0,
          "replay must exit 0 on a clean trace");
  require(run_cli("replay --trace " + (dir / "broken.jsonl").string()) == 4,
          "replay must exit 4 on a violating trace");
}

// ---------------------------------------------------------------- criterion 7

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  require(static_cast<bool>(in), "missing output file " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism() {
  fs::path dir = fs::temp_directory_path() / "offsim_acceptance";
  fs::create_directories(dir);
  fs::path cfg = dir / "scenario.json";
  {
    std::ofstream out(cfg);
    out << R"({
      "version": 1,
      "topology": {"generate": {"handhelds": 8, "aps": 2,
                                "radius": 0.45, "seed": 11}},
      "strategies": {"default": "tightness",
                     "nodes": {"0": "random_bidder",
                               "1": "greedy_zero_budget",
                               "2": "lowest_bid_chooser"}},
      "packet": {"b0": {"uniform": [50, 200]}, "f0": {"fraction": 0.4},
                 "h0": {"shortest_plus": 2}},
      "rounds": 4, "games_per_round": 50, "seed": 99
    })";
  }
  fs::path out1 = dir / "run1", out2 = dir / "run2";
  fs::create_directories(out1);
  fs::create_directories(out2);
  require(run_cli("run --config " + cfg.string() + " --out " + out1.string()) ==
              0,
          "first run failed");
  require(run_cli("run --config " + cfg.string() + " --out " + out2.string() +
                  " --parallel") == 0,
          "second run failed");
  require(slurp(out1 / "games.csv") == slurp(out2 / "games.csv"),
          "games.csv differs between runs");
  require(slurp(out1 / "transfers.csv") == slurp(out2 / "transfers.csv"),
          "transfers.csv differs between runs");
}

}  // namespace

int main() {
  struct Criterion {
    const char *name;
    void (*fn)();
    double budget_s;  // stated runtime bound, 0 = none
  };
  const Criterion criteria[] = {
      {"criterion 1: bid-curve reproduction", bid_curve_reproduction, 1.0},
      {"criterion 2: preference-plane anchors", preference_plane_anchors, 0.0},
      {"criterion 3: punishment scenario", punishment_scenario, 1.0},
      {"criterion 4: cooperation baseline", cooperation_baseline, 30.0},
      {"criterion 5: shortest-path oracle equivalence", shortest_path_oracle,
       0.0},
      {"criterion 6: protocol audit and mutation testing", protocol_audit,
       0.0},
      {"criterion 7: determinism", determinism, 0.0},
  };

  int failures = 0;
  for (const Criterion &c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.fn();
    } catch (const std::exception &e) {
      error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (error.empty() && c.budget_s > 0.0 && secs > c.budget_s) {
      error = "exceeded the runtime bound";
    }
    if (error.empty()) {
      std::printf("PASS  %s (%.2f s)\n", c.name, secs);
    } else {
      std::printf("FAIL  %s (%.2f s): %s\n", c.name, secs, error.c_str());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
