#include "offsim/ledger.hpp"

namespace offsim {

std::string to_string(TransferReason r) {
  switch (r) {
    case TransferReason::success_payment: return "success_payment";
    case TransferReason::fine: return "fine";
    case TransferReason::bypass_charge: return "bypass_charge";
  }
  return "?";
}

TransferReason transfer_reason_from_string(const std::string &s) {
  if (s == "success_payment") return TransferReason::success_payment;
  if (s == "fine") return TransferReason::fine;
  if (s == "bypass_charge") return TransferReason::bypass_charge;
  throw SimError(ErrorCode::parse_error, "unknown transfer reason '" + s + "'");
}

void ContractChain::append(const HopContract &c) {
  if (c.price < Money() || c.fine < Money()) {
    throw SimError(ErrorCode::invariant_violation,
                   "contract price and fine must be >= 0");
  }
  if (!contracts_.empty()) {
    const HopContract &prev = contracts_.back();
    if (prev.downstream != c.upstream) {
      throw SimError(ErrorCode::invariant_violation,
                     "contract chain is not connected");
    }
    if (c.fine > prev.fine) {
      throw SimError(ErrorCode::invariant_violation,
                     "fine monotonicity violated along the chain");
    }
    if (prev.packet_id != c.packet_id) {
      throw SimError(ErrorCode::invariant_violation,
                     "contract chain mixes packets");
    }
  }
  contracts_.push_back(c);
}

Ledger::Ledger(const Topology &topo) {
  for (const auto &[id, role] : topo.nodes()) balances_[id] = Money();
  balances_[kOperatorAccount] = Money();
}

void Ledger::record(const Transfer &t) {
  if (t.amount < Money()) {
    throw SimError(ErrorCode::invariant_violation, "negative transfer amount");
  }
  if (!balances_.count(t.payer) || !balances_.count(t.payee)) {
    throw SimError(ErrorCode::unknown_node, "transfer touches unknown account");
  }
  transfers_.push_back(t);
  balances_[t.payer] -= t.amount;
  balances_[t.payee] += t.amount;
}

void Ledger::settle_success(const ContractChain &chain) {
  for (const HopContract &c : chain.contracts()) {
    record({c.packet_id, TransferReason::success_payment, c.upstream,
            c.downstream, c.price});
  }
}

void Ledger::settle_failure(const ContractChain &chain) {
  for (const HopContract &c : chain.contracts()) {
    record({c.packet_id, TransferReason::fine, c.downstream, c.upstream,
            c.fine});
  }
}

void Ledger::settle_bypass(NodeId node, int packet_id, Money initial_budget) {
  record({packet_id, TransferReason::bypass_charge, node, kOperatorAccount,
          initial_budget});
}

Money Ledger::balance(NodeId account) const {
  auto it = balances_.find(account);
  if (it == balances_.end()) {
    throw SimError(ErrorCode::unknown_node,
                   "unknown account " + account_name(account));
  }
  return it->second;
}

}  // namespace offsim
