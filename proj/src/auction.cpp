#include "offsim/auction.hpp"

#include <algorithm>

namespace offsim {

Auction Auction::open(const Topology &topo, const Rfb &rfb,
                      const std::vector<NodeId> &prior_forwarders, double at,
                      std::optional<Money> previous_fine) {
  if (at <= 0.0) {
    throw SimError(ErrorCode::rule_violation, "auction window must be positive");
  }
  if (rfb.budget < Money() || rfb.fine < Money()) {
    throw SimError(ErrorCode::rule_violation, "budget and fine must be >= 0");
  }
  if (rfb.fine > rfb.budget) {
    throw SimError(ErrorCode::rule_violation, "fine exceeds budget");
  }
  if (previous_fine && rfb.fine > *previous_fine) {
    throw SimError(ErrorCode::rule_violation,
                   "fine exceeds previous hop's fine");
  }
  if (rfb.timeout_h0 < 1) {
    throw SimError(ErrorCode::rule_violation, "timeout must be >= 1 hop");
  }
  Auction a;
  a.rfb_ = rfb;
  a.at_ = at;
  for (NodeId v : topo.neighbors(rfb.auctioneer)) {
    if (topo.role(v) != NodeRole::handheld) continue;
    if (std::find(prior_forwarders.begin(), prior_forwarders.end(), v) !=
        prior_forwarders.end())
      continue;
    a.eligible_.insert(v);
  }
  return a;
}

void Auction::submit(const Bid &bid) {
  if (!open_) {
    throw SimError(ErrorCode::rule_violation, "auction already closed");
  }
  if (!eligible_.count(bid.bidder)) {
    throw SimError(ErrorCode::rule_violation,
                   "node " + std::to_string(bid.bidder) + " is not eligible");
  }
  if (has_bid_from(bid.bidder)) {
    throw SimError(ErrorCode::rule_violation,
                   "node " + std::to_string(bid.bidder) + " already bid");
  }
  if (bid.amount < Money()) {
    throw SimError(ErrorCode::rule_violation, "bid must be >= 0");
  }
  if (bid.amount > rfb_.budget) {
    throw SimError(ErrorCode::rule_violation,
                   "must bid lower or equal than the announced budget");
  }
  if (bid.submit_time < 0.0 || bid.submit_time > at_) {
    throw SimError(ErrorCode::rule_violation,
                   "bid submitted outside the auction window");
  }
  auto pos = std::upper_bound(
      bids_.begin(), bids_.end(), bid, [](const Bid &x, const Bid &y) {
        return x.submit_time < y.submit_time;
      });
  bids_.insert(pos, bid);
}

bool Auction::has_bid_from(NodeId n) const {
  return std::any_of(bids_.begin(), bids_.end(),
                     [n](const Bid &b) { return b.bidder == n; });
}

Money Auction::bid_amount(NodeId n) const {
  for (const Bid &b : bids_)
    if (b.bidder == n) return b.amount;
  throw SimError(ErrorCode::rule_violation,
                 "no bid from node " + std::to_string(n));
}

HopContract Auction::close(NodeId winner) {
  if (!open_) {
    throw SimError(ErrorCode::rule_violation, "auction already closed");
  }
  std::string missing;
  for (NodeId n : eligible_) {
    if (!has_bid_from(n)) missing += (missing.empty() ? "" : ", ") + std::to_string(n);
  }
  if (!missing.empty()) {
    throw SimError(ErrorCode::rule_violation,
                   "mandatory bids missing from: " + missing);
  }
  if (!has_bid_from(winner)) {
    throw SimError(ErrorCode::rule_violation,
                   "winner " + std::to_string(winner) + " did not bid");
  }
  open_ = false;
  winner_ = winner;
  return HopContract{rfb_.auctioneer, winner, bid_amount(winner), rfb_.fine,
                     rfb_.packet_id};
}

NodeId Auction::lowest_bid_winner() const {
  if (bids_.empty()) {
    throw SimError(ErrorCode::rule_violation, "no eligible bidders");
  }
  NodeId best = bids_.front().bidder;
  Money best_amount = bids_.front().amount;
  for (const Bid &b : bids_) {
    if (b.amount < best_amount ||
        (b.amount == best_amount && b.bidder < best)) {
      best = b.bidder;
      best_amount = b.amount;
    }
  }
  return best;
}

}  // namespace offsim
