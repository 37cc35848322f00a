#pragma once

#include <memory>
#include <string>
#include <utility>

#include "offsim/auction.hpp"
#include "offsim/rng.hpp"
#include "offsim/tightness.hpp"

namespace offsim {

enum class StrategyKind {
  tightness,
  greedy_zero_budget,
  lowest_bid_chooser,
  random_bidder,
  always_bypass,
};

std::string to_string(StrategyKind k);
StrategyKind strategy_kind_from_string(const std::string &s);

/// Per-node behavior: how to bid, when to bid, how to pick a winner for our
/// own auctions, and what budget/fine to announce downstream. Implementations
/// are stateless; randomness comes from the caller's Rng.
class Strategy {
public:
  virtual ~Strategy() = default;
  virtual StrategyKind kind() const = 0;

  virtual Money bid(const Topology &topo, const Auction &auction, NodeId self,
                    Rng &rng) const = 0;

  /// Instant within [0, AT] at which the bid goes out.
  virtual double bid_time(double at, Rng &rng) const {
    return rng.uniform(0.0, at);
  }

  virtual NodeId choose_winner(const Topology &topo,
                               const Auction &auction) const {
    return auction.lowest_bid_winner();
  }

  virtual std::pair<Money, Money> next_budget_fine(Money won_offer) const = 0;

  /// The cooperation rule: drop a packet won in a zero-budget auction.
  virtual bool drop_on_zero_budget() const { return false; }

  /// Deliver via the backbone instead of ever auctioning.
  virtual bool prefers_bypass() const { return false; }

  /// Called when the node holds the packet but cannot take another ad hoc hop
  /// (deadline reached or no eligible bidders).
  virtual bool bypass_when_stranded(Money initial_budget, Money own_fine,
                                    Money accepted_price) const {
    // Rational default: bypassing pays B0 but collects the accepted price and
    // avoids the fine.
    return accepted_price + own_fine >= initial_budget;
  }
};

std::unique_ptr<Strategy> make_strategy(StrategyKind kind,
                                        const StrategyParams &params,
                                        bool greedy_bids_zero = false);

}  // namespace offsim
