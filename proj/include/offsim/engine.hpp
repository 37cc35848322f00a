#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "offsim/ledger.hpp"
#include "offsim/strategy.hpp"

namespace offsim {

enum class PacketStatus { in_flight, delivered, failed };

/// The unit of the game: one data packet injected by a source AP.
struct Packet {
  int id = 0;
  NodeId source_ap = 0;
  NodeId dest_ap = 0;
  Money initial_budget;  // B0
  Money initial_fine;    // F0
  int h0 = 1;            // hop budget, fixed at injection
  int hops = 0;          // p: hops traversed so far
  std::vector<NodeId> forwarders;
  PacketStatus status = PacketStatus::in_flight;
};

/// True iff the packet may take one more hop.
inline bool hop_deadline_check(const Packet &p) { return p.hops < p.h0; }

struct MoneyDist {
  bool is_constant = true;
  Money lo;
  Money hi;
  Money draw(Rng &rng) const {
    if (is_constant) return lo;
    return Money::from_millis(rng.next_int(lo.millis(), hi.millis()));
  }
};

struct H0Rule {
  enum class Mode { shortest_plus, constant } mode = Mode::shortest_plus;
  int value = 2;  // slack hops, or the constant
};

enum class StrandedPolicy { strategy, always_bypass, never_bypass };

struct GameConfig {
  StrategyKind default_strategy = StrategyKind::tightness;
  std::map<NodeId, StrategyKind> node_strategies;

  MoneyDist b0{false, Money::from_millis(50000), Money::from_millis(200000)};
  std::optional<MoneyDist> f0_dist;  // absolute F0; else fraction of B0
  double f0_fraction = 0.4;
  H0Rule h0;

  double auction_window = 3.0;
  int rounds = 1;
  int games_per_round = 1;
  std::uint64_t seed = 0;
  StrategyParams params;
  StrandedPolicy stranded = StrandedPolicy::strategy;
  bool greedy_bids_zero = false;

  void validate() const;
};

struct AuctionRecord {
  Rfb rfb;
  double window = 3.0;
  std::vector<Bid> bids;  // submit-time order
  NodeId winner = 0;
};

/// Full replayable record of one game.
struct GameTrace {
  int round = 0;
  int game = 0;
  std::uint64_t seed = 0;
  Packet packet;
  std::vector<AuctionRecord> auctions;
  ContractChain chain;
  std::vector<Transfer> transfers;
  bool bypass = false;
  NodeId bypass_node = 0;
  std::string failure;  // empty when delivered: else drop | timeout | stranded
  std::map<NodeId, Money> deltas;  // settlement effect per touched account
};

struct NodeMetrics {
  Money balance;
  int packets_won = 0;
  int packets_dropped = 0;
  int bypasses = 0;
};

struct Metrics {
  std::map<NodeId, NodeMetrics> per_node;
  int games = 0;
  int delivered = 0;
  std::vector<int> hops_per_game;

  double delivery_ratio() const {
    return games == 0 ? 0.0 : static_cast<double>(delivered) / games;
  }
};

struct ExperimentResult {
  Metrics metrics;
  std::vector<GameTrace> traces;
};

GameTrace run_game(const GameConfig &config, const Topology &topo,
                   std::uint64_t game_seed, int round, int game);

/// rounds x games_per_round games with per-game seeds derived from the master
/// seed; identical config and topology reproduce identical results. With
/// `parallel`, games run concurrently; aggregation stays an ordered reduction
/// by (round, game), so output bytes do not change.
ExperimentResult run_experiment(const GameConfig &config, const Topology &topo,
                                bool parallel = false);

std::string games_csv(const std::vector<GameTrace> &traces);
std::string transfers_csv(const std::vector<GameTrace> &traces);
std::string summary_text(const GameConfig &config, const Metrics &m);

}  // namespace offsim
