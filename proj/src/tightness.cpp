#include "offsim/tightness.hpp"

#include <algorithm>
#include <cmath>

namespace offsim {

void StrategyParams::validate() const {
  if (!(k2 > k1 && k1 > 0.0)) {
    throw SimError(ErrorCode::config_error, "need k2 > k1 > 0");
  }
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) {
    throw SimError(ErrorCode::config_error, "budget_fraction must be in (0, 1]");
  }
  if (!(fine_fraction > 0.0 && fine_fraction <= 1.0)) {
    throw SimError(ErrorCode::config_error, "fine_fraction must be in (0, 1]");
  }
  if (!(0.0 <= bid_time_lo && bid_time_lo <= bid_time_hi && bid_time_hi <= 1.0)) {
    throw SimError(ErrorCode::config_error, "bad bid time window fractions");
  }
}

TightnessAnalysis analyze(const Topology &topo, const Rfb &rfb, NodeId self,
                          const std::set<NodeId> &eligible,
                          const StrategyParams &params) {
  TightnessAnalysis out;
  out.self = self;
  out.upstream = rfb.auctioneer;

  const HopCountTable hc = topo.hop_counts_to(rfb.dest_ap);
  auto delta_of = [&](NodeId i) -> std::optional<int> {
    auto it = hc.find(i);
    if (it == hc.end()) return std::nullopt;  // cannot reach the destination
    return tightness(rfb.timeout_h0, rfb.hops_traversed, it->second);
  };

  auto self_delta = delta_of(self);
  // An unreachable destination is the worst possible deficit.
  out.delta_n = self_delta ? *self_delta : -rfb.timeout_h0 - 1;
  out.no_competition = eligible.size() <= 1;

  for (NodeId i : eligible) {
    auto d = delta_of(i);
    if (d && *d >= 0) out.viable.emplace_back(i, *d);
  }
  if (!out.viable.empty()) {
    long sum = 0;
    int dmax = out.viable.front().second;
    for (auto &[id, d] : out.viable) {
      sum += d;
      dmax = std::max(dmax, d);
    }
    out.delta_bar = static_cast<double>(sum) / out.viable.size();
    out.delta_max = dmax;
  }

  if (out.delta_n > 0 && !out.viable.empty()) {
    out.has_cn = true;
    out.c_n = out.delta_bar > 0.0 ? out.delta_n / out.delta_bar : params.c_cap;
    out.a_n = out.delta_max > 0
                  ? static_cast<double>(out.delta_n) / out.delta_max
                  : params.c_cap;
  }
  return out;
}

Money compute_bid(const TightnessAnalysis &analysis, const Rfb &rfb,
                  const StrategyParams &params) {
  (void)params;
  if (analysis.delta_n <= 0 || analysis.no_competition || !analysis.has_cn) {
    return rfb.budget;
  }
  const double b = rfb.budget.to_double();
  const double f = rfb.fine.to_double();
  const double logistic =
      1.0 / (1.0 + std::exp(-analysis.a_n * (analysis.c_n - 1.0)));
  Money bid = Money::from_double((b - f) * (1.0 - logistic) + f);
  return std::clamp(bid, rfb.fine, rfb.budget);
}

double bid_time(double at, Rng &rng, const StrategyParams &params) {
  return rng.uniform(params.bid_time_lo * at, params.bid_time_hi * at);
}

std::pair<Money, Money> setup_auction(Money won_offer,
                                      const StrategyParams &params) {
  Money budget = won_offer.scaled(params.budget_fraction);
  Money fine = budget.scaled(params.fine_fraction);
  return {budget, fine};
}

double preference(Money op_i, double c_i, Money b_n, double c_max,
                  const StrategyParams &params) {
  double p = params.k1;
  if (b_n > Money()) p -= params.k1 / b_n.to_double() * op_i.to_double();
  if (c_max > 0.0) p += params.k2 / c_max * c_i;
  return p;
}

std::vector<std::pair<NodeId, double>> bidder_tightness(
    const Auction &auction, const Topology &topo) {
  const Rfb &rfb = auction.rfb();
  const HopCountTable hc = topo.hop_counts_to(rfb.dest_ap);

  std::vector<std::pair<NodeId, int>> deltas;
  for (const Bid &b : auction.bids()) {
    auto it = hc.find(b.bidder);
    int d = it == hc.end() ? -rfb.timeout_h0 - 1
                           : tightness(rfb.timeout_h0, rfb.hops_traversed,
                                       it->second);
    deltas.emplace_back(b.bidder, d);
  }
  long sum = 0;
  int viable = 0;
  for (auto &[id, d] : deltas) {
    if (d >= 0) {
      sum += d;
      ++viable;
    }
  }
  const double delta_bar = viable > 0 ? static_cast<double>(sum) / viable : 0.0;

  std::vector<std::pair<NodeId, double>> out;
  for (auto &[id, d] : deltas) {
    // Non-viable bidders compete on price only.
    double c = (d >= 0 && delta_bar > 0.0) ? d / delta_bar : 0.0;
    out.emplace_back(id, c);
  }
  return out;
}

NodeId choose_winner(const Auction &auction, const Topology &topo,
                     const StrategyParams &params) {
  const auto cs = bidder_tightness(auction, topo);
  if (cs.empty()) {
    throw SimError(ErrorCode::rule_violation, "no eligible bidders");
  }
  double c_max = 0.0;
  for (auto &[id, c] : cs) c_max = std::max(c_max, c);

  NodeId best = cs.front().first;
  double best_pref = 0.0;
  double best_c = 0.0;
  bool first = true;
  for (auto &[id, c] : cs) {
    const double p =
        preference(auction.bid_amount(id), c, auction.rfb().budget, c_max,
                   params);
    const bool better =
        first || p > best_pref ||
        (p == best_pref && (c > best_c || (c == best_c && id < best)));
    if (better) {
      best = id;
      best_pref = p;
      best_c = c;
      first = false;
    }
  }
  return best;
}

}  // namespace offsim
