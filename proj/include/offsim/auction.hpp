#pragma once

#include <optional>
#include <set>
#include <vector>

#include "offsim/money.hpp"
#include "offsim/topology.hpp"

namespace offsim {

/// Request for bids: what an auctioneer announces for one packet hop.
struct Rfb {
  NodeId auctioneer = 0;
  int packet_id = 0;
  Money budget;
  Money fine;
  int timeout_h0 = 0;     // the packet's original hop budget, never rewritten
  int hops_traversed = 0; // p_u: hops already taken to reach the auctioneer
  NodeId dest_ap = 0;
};

struct Bid {
  NodeId bidder = 0;
  Money amount;
  double submit_time = 0.0;  // seconds within [0, AT]
};

/// The per-hop financial agreement formed when an auction closes.
struct HopContract {
  NodeId upstream = 0;
  NodeId downstream = 0;
  Money price;  // accepted bid
  Money fine;   // the RFB fine
  int packet_id = 0;
};

/// One bidding round. Every eligible neighbor must bid before the window
/// closes; bids are open (later bidders may inspect earlier ones).
class Auction {
public:
  /// Validates the RFB against the rulebook (fine <= budget, fine <= previous
  /// hop's fine) and computes the eligible bidder set: handheld neighbors of
  /// the auctioneer minus nodes that already forwarded this packet.
  static Auction open(const Topology &topo, const Rfb &rfb,
                      const std::vector<NodeId> &prior_forwarders, double at,
                      std::optional<Money> previous_fine = std::nullopt);

  void submit(const Bid &bid);

  /// Closes the auction once every mandatory bid is in and forms the hop
  /// contract at the winner's price and the RFB fine.
  HopContract close(NodeId winner);

  /// The AP rule: lowest bid wins, ties to the lowest node id.
  NodeId lowest_bid_winner() const;

  bool open_phase() const { return open_; }
  const Rfb &rfb() const { return rfb_; }
  double window() const { return at_; }
  const std::set<NodeId> &eligible() const { return eligible_; }
  const std::vector<Bid> &bids() const { return bids_; }  // sorted by time
  std::optional<NodeId> winner() const { return winner_; }

  bool has_bid_from(NodeId n) const;
  Money bid_amount(NodeId n) const;

private:
  Auction() = default;
  Rfb rfb_;
  double at_ = 3.0;
  std::set<NodeId> eligible_;
  std::vector<Bid> bids_;
  bool open_ = true;
  std::optional<NodeId> winner_;
};

}  // namespace offsim
