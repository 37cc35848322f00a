#pragma once

#include <map>
#include <string>
#include <vector>

#include "offsim/auction.hpp"
#include "offsim/money.hpp"

namespace offsim {

/// The single account collecting backbone bypass charges.
inline constexpr NodeId kOperatorAccount = -1;

inline std::string account_name(NodeId a) {
  return a == kOperatorAccount ? "operator" : std::to_string(a);
}

enum class TransferReason { success_payment, fine, bypass_charge };

std::string to_string(TransferReason r);
TransferReason transfer_reason_from_string(const std::string &s);

struct Transfer {
  int packet_id = 0;
  TransferReason reason = TransferReason::success_payment;
  NodeId payer = 0;
  NodeId payee = 0;
  Money amount;
};

/// One packet's hop contracts, source AP outward. Validates connectivity and
/// fine monotonicity on append.
class ContractChain {
public:
  void append(const HopContract &c);
  const std::vector<HopContract> &contracts() const { return contracts_; }
  bool empty() const { return contracts_.empty(); }
  const HopContract &back() const { return contracts_.back(); }

private:
  std::vector<HopContract> contracts_;
};

/// Append-only record of every monetary transfer, with derived balances.
/// Money is only moved between known accounts, so balances always sum to zero.
class Ledger {
public:
  Ledger() = default;
  explicit Ledger(const Topology &topo);

  /// Success payments along the chain: each upstream pays its accepted price.
  void settle_success(const ContractChain &chain);

  /// Fine cascade on failure: every contract's downstream pays the agreed
  /// fine back upstream.
  void settle_failure(const ContractChain &chain);

  /// Backbone delivery: the bypassing node pays the packet's original budget
  /// to the operator.
  void settle_bypass(NodeId node, int packet_id, Money initial_budget);

  Money balance(NodeId account) const;
  const std::vector<Transfer> &transfers() const { return transfers_; }
  const std::map<NodeId, Money> &balances() const { return balances_; }

  void record(const Transfer &t);

private:
  std::vector<Transfer> transfers_;
  std::map<NodeId, Money> balances_;
};

}  // namespace offsim
