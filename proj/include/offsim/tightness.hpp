#pragma once

#include <utility>
#include <vector>

#include "offsim/auction.hpp"
#include "offsim/money.hpp"
#include "offsim/rng.hpp"
#include "offsim/topology.hpp"

namespace offsim {

struct StrategyParams {
  double budget_fraction = 0.6;  // B_n as a share of the winning offer
  double fine_fraction = 0.9;    // F_n as a share of B_n
  double k1 = 2.0;               // preference at (free forward, zero surplus)
  double k2 = 3.0;               // preference at (full price, best surplus)
  double bid_time_lo = 0.5;      // bid instant window, as fractions of AT
  double bid_time_hi = 0.75;
  double c_cap = 1e6;            // saturation for guarded divisions

  void validate() const;
};

/// Hop surplus (or deficit) of a node relative to the packet deadline if the
/// packet took its shortest path: (H0 - p_u - 1) - hc.
inline int tightness(int h0, int p_u, int hc) { return (h0 - p_u - 1) - hc; }

/// Everything the bidding rule needs to know about one auction, from the
/// point of view of node `self`.
struct TightnessAnalysis {
  NodeId self = 0;
  NodeId upstream = 0;
  int delta_n = 0;
  std::vector<std::pair<NodeId, int>> viable;  // S(u): competitors with delta >= 0
  int delta_max = 0;
  double delta_bar = 0.0;
  double c_n = 0.0;  // relative tightness, populated when has_cn
  double a_n = 0.0;  // steepness, populated when has_cn
  bool no_competition = false;  // self is the only eligible neighbor
  bool has_cn = false;
};

/// Computes delta for every eligible bidder around the auctioneer (self
/// included), the viable set S(u), and the relative tightness/steepness pair.
/// `eligible` is the auction's bidder set.
TightnessAnalysis analyze(const Topology &topo, const Rfb &rfb, NodeId self,
                          const std::set<NodeId> &eligible,
                          const StrategyParams &params = {});

/// The logistic bidding rule. Risk cases (deficit, exact-fit, no competition)
/// bid the full budget; otherwise the bid slides from budget toward fine as
/// relative tightness grows.
Money compute_bid(const TightnessAnalysis &analysis, const Rfb &rfb,
                  const StrategyParams &params = {});

/// Random bid instant, uniform in [0.5 AT, 0.75 AT] by default.
double bid_time(double at, Rng &rng, const StrategyParams &params = {});

/// Budget and fine for the auction we announce after winning at price
/// `won_offer`.
std::pair<Money, Money> setup_auction(Money won_offer,
                                      const StrategyParams &params = {});

/// Preference plane over (offered price, relative tightness).
/// c_term_active drops the tightness term when c_max is degenerate.
double preference(Money op_i, double c_i, Money b_n, double c_max,
                  const StrategyParams &params = {});

/// Winner selection for our own auctions: evaluate the preference plane for
/// every bidder and take the argmax (ties: higher tightness, then lower id).
NodeId choose_winner(const Auction &auction, const Topology &topo,
                     const StrategyParams &params = {});

/// Per-bidder relative tightness used by choose_winner; exposed for tests.
std::vector<std::pair<NodeId, double>> bidder_tightness(
    const Auction &auction, const Topology &topo);

}  // namespace offsim
