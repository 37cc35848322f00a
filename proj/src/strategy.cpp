#include "offsim/strategy.hpp"

namespace offsim {

std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::tightness: return "tightness";
    case StrategyKind::greedy_zero_budget: return "greedy_zero_budget";
    case StrategyKind::lowest_bid_chooser: return "lowest_bid_chooser";
    case StrategyKind::random_bidder: return "random_bidder";
    case StrategyKind::always_bypass: return "always_bypass";
  }
  return "?";
}

StrategyKind strategy_kind_from_string(const std::string &s) {
  if (s == "tightness") return StrategyKind::tightness;
  if (s == "greedy_zero_budget") return StrategyKind::greedy_zero_budget;
  if (s == "lowest_bid_chooser") return StrategyKind::lowest_bid_chooser;
  if (s == "random_bidder") return StrategyKind::random_bidder;
  if (s == "always_bypass") return StrategyKind::always_bypass;
  throw SimError(ErrorCode::config_error, "unknown strategy '" + s + "'");
}

namespace {

class TightnessStrategy : public Strategy {
public:
  explicit TightnessStrategy(StrategyParams params) : params_(params) {}
  StrategyKind kind() const override { return StrategyKind::tightness; }

  Money bid(const Topology &topo, const Auction &auction, NodeId self,
            Rng &) const override {
    const auto analysis =
        analyze(topo, auction.rfb(), self, auction.eligible(), params_);
    return compute_bid(analysis, auction.rfb(), params_);
  }

  double bid_time(double at, Rng &rng) const override {
    return offsim::bid_time(at, rng, params_);
  }

  NodeId choose_winner(const Topology &topo,
                       const Auction &auction) const override {
    return offsim::choose_winner(auction, topo, params_);
  }

  std::pair<Money, Money> next_budget_fine(Money won_offer) const override {
    return setup_auction(won_offer, params_);
  }

  bool drop_on_zero_budget() const override { return true; }

  bool bypass_when_stranded(Money initial_budget, Money own_fine,
                            Money) const override {
    return own_fine <= initial_budget;
  }

private:
  StrategyParams params_;
};

class GreedyZeroBudget : public Strategy {
public:
  explicit GreedyZeroBudget(bool bids_zero) : bids_zero_(bids_zero) {}
  StrategyKind kind() const override { return StrategyKind::greedy_zero_budget; }

  Money bid(const Topology &, const Auction &auction, NodeId,
            Rng &) const override {
    // The floor that still wins lowest-bid selections.
    return bids_zero_ ? Money() : auction.rfb().fine;
  }

  std::pair<Money, Money> next_budget_fine(Money) const override {
    return {Money(), Money()};
  }

private:
  bool bids_zero_;
};

class LowestBidChooser : public Strategy {
public:
  StrategyKind kind() const override { return StrategyKind::lowest_bid_chooser; }

  Money bid(const Topology &, const Auction &auction, NodeId,
            Rng &) const override {
    return auction.rfb().fine;
  }

  std::pair<Money, Money> next_budget_fine(Money won_offer) const override {
    Money budget = won_offer.scaled(0.5);
    return {budget, budget.scaled(0.5)};
  }
};

class RandomBidder : public Strategy {
public:
  StrategyKind kind() const override { return StrategyKind::random_bidder; }

  Money bid(const Topology &, const Auction &auction, NodeId,
            Rng &rng) const override {
    const Rfb &rfb = auction.rfb();
    return Money::from_millis(
        rng.next_int(rfb.fine.millis(), rfb.budget.millis()));
  }

  std::pair<Money, Money> next_budget_fine(Money won_offer) const override {
    Money budget = won_offer.scaled(0.5);
    return {budget, budget.scaled(0.5)};
  }
};

class AlwaysBypass : public Strategy {
public:
  StrategyKind kind() const override { return StrategyKind::always_bypass; }

  Money bid(const Topology &, const Auction &auction, NodeId,
            Rng &) const override {
    return auction.rfb().budget;
  }

  std::pair<Money, Money> next_budget_fine(Money won_offer) const override {
    return {won_offer, won_offer};  // never used; bypass happens first
  }

  bool prefers_bypass() const override { return true; }

  bool bypass_when_stranded(Money, Money, Money) const override { return true; }
};

}  // namespace

std::unique_ptr<Strategy> make_strategy(StrategyKind kind,
                                        const StrategyParams &params,
                                        bool greedy_bids_zero) {
  switch (kind) {
    case StrategyKind::tightness:
      return std::make_unique<TightnessStrategy>(params);
    case StrategyKind::greedy_zero_budget:
      return std::make_unique<GreedyZeroBudget>(greedy_bids_zero);
    case StrategyKind::lowest_bid_chooser:
      return std::make_unique<LowestBidChooser>();
    case StrategyKind::random_bidder:
      return std::make_unique<RandomBidder>();
    case StrategyKind::always_bypass:
      return std::make_unique<AlwaysBypass>();
  }
  throw SimError(ErrorCode::config_error, "unknown strategy kind");
}

}  // namespace offsim
