#include "offsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace offsim {

void GameConfig::validate() const {
  params.validate();
  if (auction_window <= 0.0) {
    throw SimError(ErrorCode::config_error, "auction_window must be > 0");
  }
  if (rounds < 1 || games_per_round < 1) {
    throw SimError(ErrorCode::config_error,
                   "rounds and games_per_round must be >= 1");
  }
  if (b0.lo < Money() || b0.hi < b0.lo) {
    throw SimError(ErrorCode::config_error, "bad b0 range");
  }
  if (f0_dist) {
    if (f0_dist->lo < Money() || f0_dist->hi < f0_dist->lo) {
      throw SimError(ErrorCode::config_error, "bad f0 range");
    }
    Money b0_min = b0.lo;
    if (f0_dist->hi > b0_min) {
      throw SimError(ErrorCode::config_error,
                     "f0 may exceed b0: fine must be smaller or equal to the budget");
    }
  } else if (f0_fraction < 0.0 || f0_fraction > 1.0) {
    throw SimError(ErrorCode::config_error, "f0_fraction must be in [0, 1]");
  }
  if (h0.mode == H0Rule::Mode::constant && h0.value < 1) {
    throw SimError(ErrorCode::config_error, "h0 must be >= 1");
  }
  if (h0.mode == H0Rule::Mode::shortest_plus && h0.value < 0) {
    throw SimError(ErrorCode::config_error, "h0 slack must be >= 0");
  }
}

namespace {

class StrategyTable {
public:
  StrategyTable(const GameConfig &config, const Topology &topo) {
    for (NodeId n : topo.handhelds()) {
      auto it = config.node_strategies.find(n);
      StrategyKind k =
          it != config.node_strategies.end() ? it->second : config.default_strategy;
      table_[n] = make_strategy(k, config.params, config.greedy_bids_zero);
    }
  }

  const Strategy &at(NodeId n) const {
    auto it = table_.find(n);
    if (it == table_.end()) {
      throw SimError(ErrorCode::unknown_node,
                     "no strategy for node " + std::to_string(n));
    }
    return *it->second;
  }

private:
  std::map<NodeId, std::unique_ptr<Strategy>> table_;
};

}  // namespace

GameTrace run_game(const GameConfig &config, const Topology &topo,
                   std::uint64_t game_seed, int round, int game) {
  Rng rng(game_seed);
  StrategyTable strategies(config, topo);

  const auto aps = topo.access_points();
  if (aps.size() < 2) {
    throw SimError(ErrorCode::config_error, "need at least two access points");
  }
  const auto si = rng.next_int(0, static_cast<std::int64_t>(aps.size()) - 1);
  auto di = rng.next_int(0, static_cast<std::int64_t>(aps.size()) - 2);
  if (di >= si) ++di;
  const NodeId source = aps[static_cast<std::size_t>(si)];
  const NodeId dest = aps[static_cast<std::size_t>(di)];

  GameTrace trace;
  trace.round = round;
  trace.game = game;
  trace.seed = game_seed;

  Packet &pkt = trace.packet;
  pkt.id = round * 1000000 + game;
  pkt.source_ap = source;
  pkt.dest_ap = dest;
  pkt.initial_budget = config.b0.draw(rng);
  pkt.initial_fine = config.f0_dist ? config.f0_dist->draw(rng)
                                    : pkt.initial_budget.scaled(config.f0_fraction);
  pkt.h0 = config.h0.mode == H0Rule::Mode::constant
               ? config.h0.value
               : topo.hop_count(source, dest) + config.h0.value;

  NodeId holder = source;
  bool holder_is_ap = true;
  Money next_budget = pkt.initial_budget;
  Money next_fine = pkt.initial_fine;
  std::optional<Money> prev_fine;
  Money accepted_price;

  auto handle_stranded = [&](const std::string &why) {
    if (holder_is_ap) {
      throw SimError(ErrorCode::invariant_violation,
                     "source AP has no eligible bidders");
    }
    bool bypass;
    switch (config.stranded) {
      case StrandedPolicy::always_bypass: bypass = true; break;
      case StrandedPolicy::never_bypass: bypass = false; break;
      default:
        bypass = strategies.at(holder).bypass_when_stranded(
            pkt.initial_budget, trace.chain.back().fine, accepted_price);
    }
    if (bypass) {
      pkt.status = PacketStatus::delivered;
      trace.bypass = true;
      trace.bypass_node = holder;
    } else {
      pkt.status = PacketStatus::failed;
      trace.failure = why;
    }
  };

  while (pkt.status == PacketStatus::in_flight) {
    Rfb rfb{holder, pkt.id, next_budget, next_fine,
            pkt.h0, pkt.hops, dest};
    Auction auction = Auction::open(topo, rfb, pkt.forwarders,
                                    config.auction_window, prev_fine);
    if (auction.eligible().empty()) {
      handle_stranded("stranded");
      break;
    }

    // Bid instants are drawn in node-id order, then bids are collected in
    // submit-time order so later bidders can observe earlier open bids.
    std::vector<std::pair<double, NodeId>> order;
    for (NodeId n : auction.eligible()) {
      order.emplace_back(strategies.at(n).bid_time(config.auction_window, rng),
                         n);
    }
    std::sort(order.begin(), order.end());
    for (auto [t, n] : order) {
      Money amount = strategies.at(n).bid(topo, auction, n, rng);
      auction.submit({n, amount, t});
    }

    const NodeId winner = holder_is_ap
                              ? auction.lowest_bid_winner()
                              : strategies.at(holder).choose_winner(topo, auction);
    HopContract contract = auction.close(winner);
    trace.chain.append(contract);
    trace.auctions.push_back(
        {rfb, config.auction_window, auction.bids(), winner});

    pkt.forwarders.push_back(winner);
    pkt.hops += 1;
    prev_fine = contract.fine;
    accepted_price = contract.price;
    holder = winner;
    holder_is_ap = false;

    const Strategy &strat = strategies.at(holder);
    if (rfb.budget == Money() && strat.drop_on_zero_budget()) {
      pkt.status = PacketStatus::failed;
      trace.failure = "drop";
      break;
    }
    if (strat.prefers_bypass()) {
      pkt.status = PacketStatus::delivered;
      trace.bypass = true;
      trace.bypass_node = holder;
      break;
    }
    if (hop_deadline_check(pkt) && topo.adjacent(holder, dest)) {
      pkt.hops += 1;  // the final attachment edge is a hop
      pkt.status = PacketStatus::delivered;
      break;
    }
    if (!hop_deadline_check(pkt)) {
      handle_stranded("timeout");
      break;
    }
    auto [b, f] = strat.next_budget_fine(accepted_price);
    // The rulebook caps our announced fine by both our budget and the fine of
    // the previous hop.
    next_budget = b;
    next_fine = std::min({f, b, *prev_fine});
  }

  Ledger ledger(topo);
  if (pkt.status == PacketStatus::delivered) {
    ledger.settle_success(trace.chain);
    if (trace.bypass) {
      ledger.settle_bypass(trace.bypass_node, pkt.id, pkt.initial_budget);
    }
  } else {
    ledger.settle_failure(trace.chain);
  }
  trace.transfers = ledger.transfers();
  for (const auto &[account, bal] : ledger.balances()) {
    if (bal != Money()) trace.deltas[account] = bal;
  }
  return trace;
}

ExperimentResult run_experiment(const GameConfig &config, const Topology &topo,
                                bool parallel) {
  config.validate();
  ExperimentResult result;
  const int total = config.rounds * config.games_per_round;
  result.traces.resize(total);
  auto run_slot = [&](int idx) {
    const int r = idx / config.games_per_round;
    const int g = idx % config.games_per_round;
    result.traces[idx] =
        run_game(config, topo, derive_seed(config.seed, r, g), r, g);
  };
  const unsigned n_threads =
      parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  if (n_threads <= 1) {
    for (int i = 0; i < total; ++i) run_slot(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < n_threads; ++w) {
      workers.emplace_back([&] {
        for (int i = next++; i < total; i = next++) run_slot(i);
      });
    }
    for (auto &t : workers) t.join();
  }

  Metrics &m = result.metrics;
  for (const auto &[id, role] : topo.nodes()) m.per_node[id];
  m.per_node[kOperatorAccount];
  for (const GameTrace &t : result.traces) {
    ++m.games;
    if (t.packet.status == PacketStatus::delivered) ++m.delivered;
    m.hops_per_game.push_back(t.packet.hops);
    for (const auto &[account, delta] : t.deltas) {
      m.per_node[account].balance += delta;
    }
    for (const AuctionRecord &a : t.auctions) ++m.per_node[a.winner].packets_won;
    if (t.failure == "drop" && !t.packet.forwarders.empty()) {
      ++m.per_node[t.packet.forwarders.back()].packets_dropped;
    }
    if (t.bypass) ++m.per_node[t.bypass_node].bypasses;
  }
  return result;
}

std::string games_csv(const std::vector<GameTrace> &traces) {
  std::ostringstream out;
  out << "round,game,packet_id,source,dest,b0,f0,h0,outcome,hops,bypass\n";
  for (const GameTrace &t : traces) {
    out << t.round << ',' << t.game << ',' << t.packet.id << ','
        << t.packet.source_ap << ',' << t.packet.dest_ap << ','
        << t.packet.initial_budget.str() << ',' << t.packet.initial_fine.str()
        << ',' << t.packet.h0 << ','
        << (t.packet.status == PacketStatus::delivered ? "delivered" : "failed")
        << ',' << t.packet.hops << ',' << (t.bypass ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string transfers_csv(const std::vector<GameTrace> &traces) {
  std::ostringstream out;
  out << "packet_id,reason,payer,payee,amount\n";
  for (const GameTrace &t : traces) {
    for (const Transfer &tr : t.transfers) {
      out << tr.packet_id << ',' << to_string(tr.reason) << ','
          << account_name(tr.payer) << ',' << account_name(tr.payee) << ','
          << tr.amount.str() << '\n';
    }
  }
  return out.str();
}

std::string summary_text(const GameConfig &config, const Metrics &m) {
  std::ostringstream out;
  out << "games: " << m.games << '\n';
  out << "delivered: " << m.delivered << '\n';
  char ratio[32];
  std::snprintf(ratio, sizeof(ratio), "%.4f", m.delivery_ratio());
  out << "delivery_ratio: " << ratio << '\n';
  out << "accounts:\n";
  for (const auto &[id, nm] : m.per_node) {
    out << "  " << account_name(id);
    if (id != kOperatorAccount) {
      auto it = config.node_strategies.find(id);
      if (it != config.node_strategies.end()) {
        out << " (" << to_string(it->second) << ")";
      }
    }
    out << ": balance=" << nm.balance.str() << " won=" << nm.packets_won
        << " dropped=" << nm.packets_dropped << " bypasses=" << nm.bypasses
        << '\n';
  }
  return out.str();
}

}  // namespace offsim
