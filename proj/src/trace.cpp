#include "offsim/trace.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace offsim {

namespace {

using nlohmann::json;

json money_json(Money m) { return m.str(); }
Money money_from(const json &j) { return Money::parse(j.get<std::string>()); }

json game_json(const GameTrace &t) {
  json j;
  j["type"] = "game";
  j["round"] = t.round;
  j["game"] = t.game;
  j["seed"] = t.seed;
  const Packet &p = t.packet;
  j["packet"] = {
      {"id", p.id},
      {"source", p.source_ap},
      {"dest", p.dest_ap},
      {"b0", money_json(p.initial_budget)},
      {"f0", money_json(p.initial_fine)},
      {"h0", p.h0},
      {"hops", p.hops},
      {"status", p.status == PacketStatus::delivered ? "delivered" : "failed"},
      {"forwarders", p.forwarders},
  };
  j["auctions"] = json::array();
  for (const AuctionRecord &a : t.auctions) {
    json bids = json::array();
    for (const Bid &b : a.bids) {
      bids.push_back({{"bidder", b.bidder},
                      {"amount", money_json(b.amount)},
                      {"time", b.submit_time}});
    }
    j["auctions"].push_back({{"auctioneer", a.rfb.auctioneer},
                             {"budget", money_json(a.rfb.budget)},
                             {"fine", money_json(a.rfb.fine)},
                             {"timeout", a.rfb.timeout_h0},
                             {"p_u", a.rfb.hops_traversed},
                             {"dest", a.rfb.dest_ap},
                             {"window", a.window},
                             {"bids", bids},
                             {"winner", a.winner}});
  }
  j["bypass"] = t.bypass;
  j["bypass_node"] = t.bypass_node;
  j["failure"] = t.failure;
  j["transfers"] = json::array();
  for (const Transfer &tr : t.transfers) {
    j["transfers"].push_back({{"reason", to_string(tr.reason)},
                              {"payer", tr.payer},
                              {"payee", tr.payee},
                              {"amount", money_json(tr.amount)}});
  }
  j["deltas"] = json::object();
  for (const auto &[account, d] : t.deltas) {
    j["deltas"][std::to_string(account)] = money_json(d);
  }
  return j;
}

GameTrace game_from_json(const json &j) {
  GameTrace t;
  t.round = j.at("round").get<int>();
  t.game = j.at("game").get<int>();
  t.seed = j.at("seed").get<std::uint64_t>();
  const auto &p = j.at("packet");
  t.packet.id = p.at("id").get<int>();
  t.packet.source_ap = p.at("source").get<NodeId>();
  t.packet.dest_ap = p.at("dest").get<NodeId>();
  t.packet.initial_budget = money_from(p.at("b0"));
  t.packet.initial_fine = money_from(p.at("f0"));
  t.packet.h0 = p.at("h0").get<int>();
  t.packet.hops = p.at("hops").get<int>();
  t.packet.status = p.at("status").get<std::string>() == "delivered"
                        ? PacketStatus::delivered
                        : PacketStatus::failed;
  t.packet.forwarders = p.at("forwarders").get<std::vector<NodeId>>();
  for (const auto &a : j.at("auctions")) {
    AuctionRecord r;
    r.rfb.auctioneer = a.at("auctioneer").get<NodeId>();
    r.rfb.packet_id = t.packet.id;
    r.rfb.budget = money_from(a.at("budget"));
    r.rfb.fine = money_from(a.at("fine"));
    r.rfb.timeout_h0 = a.at("timeout").get<int>();
    r.rfb.hops_traversed = a.at("p_u").get<int>();
    r.rfb.dest_ap = a.at("dest").get<NodeId>();
    r.window = a.at("window").get<double>();
    for (const auto &b : a.at("bids")) {
      r.bids.push_back({b.at("bidder").get<NodeId>(), money_from(b.at("amount")),
                        b.at("time").get<double>()});
    }
    r.winner = a.at("winner").get<NodeId>();
    t.auctions.push_back(std::move(r));
  }
  t.bypass = j.at("bypass").get<bool>();
  t.bypass_node = j.at("bypass_node").get<NodeId>();
  t.failure = j.at("failure").get<std::string>();
  for (const auto &tr : j.at("transfers")) {
    t.transfers.push_back({t.packet.id,
                           transfer_reason_from_string(
                               tr.at("reason").get<std::string>()),
                           tr.at("payer").get<NodeId>(),
                           tr.at("payee").get<NodeId>(),
                           money_from(tr.at("amount"))});
  }
  for (const auto &[key, val] : j.at("deltas").items()) {
    t.deltas[static_cast<NodeId>(std::stol(key))] = money_from(val);
  }
  return t;
}

}  // namespace

std::string trace_jsonl(const Topology &topo,
                        const std::vector<GameTrace> &traces) {
  std::ostringstream out;
  json header;
  header["type"] = "header";
  header["version"] = 1;
  header["topology"] = json::parse(topo.to_json_text());
  out << header.dump() << '\n';
  for (const GameTrace &t : traces) out << game_json(t).dump() << '\n';
  return out.str();
}

TraceFile trace_from_jsonl(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw SimError(ErrorCode::parse_error, "empty trace file");
  }
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error &e) {
    throw SimError(ErrorCode::parse_error,
                   std::string("trace parse error: ") + e.what());
  }
  if (header.value("type", "") != "header" || header.value("version", 0) != 1) {
    throw SimError(ErrorCode::parse_error, "trace file: bad header record");
  }
  TraceFile tf{Topology::from_json_text(header.at("topology").dump()), {}};
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      tf.traces.push_back(game_from_json(json::parse(line)));
    } catch (const json::exception &e) {
      throw SimError(ErrorCode::parse_error,
                     "trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return tf;
}

TraceFile load_trace(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw SimError(ErrorCode::io_error, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return trace_from_jsonl(ss.str());
}

std::vector<AuditViolation> audit(const TraceFile &tf) {
  std::vector<AuditViolation> out;
  const Topology &topo = tf.topo;

  for (const GameTrace &t : tf.traces) {
    auto flag = [&](const std::string &rule, const std::string &detail) {
      out.push_back({t.round, t.game, rule, detail});
    };
    const Packet &p = t.packet;
    if (p.initial_fine > p.initial_budget) {
      flag("fine exceeds budget", "packet F0 > B0");
    }

    std::vector<NodeId> winners;
    std::vector<HopContract> contracts;
    Money prev_fine;
    bool have_prev = false;
    NodeId expected_auctioneer = p.source_ap;

    for (std::size_t k = 0; k < t.auctions.size(); ++k) {
      const AuctionRecord &a = t.auctions[k];
      const Rfb &rfb = a.rfb;
      const std::string where = "auction " + std::to_string(k);

      if (rfb.timeout_h0 != p.h0) flag("timeout rewritten", where);
      if (rfb.hops_traversed != static_cast<int>(k)) flag("hop accounting", where);
      if (rfb.dest_ap != p.dest_ap) flag("destination rewritten", where);
      if (rfb.fine > rfb.budget) flag("fine exceeds budget", where);
      if (k == 0 &&
          (rfb.budget != p.initial_budget || rfb.fine != p.initial_fine)) {
        flag("initial rfb mismatch", where);
      }
      if (have_prev && rfb.fine > prev_fine) flag("fine monotonicity", where);
      if (rfb.auctioneer != expected_auctioneer) flag("chain connectivity", where);

      std::set<NodeId> eligible;
      if (topo.has_node(rfb.auctioneer)) {
        for (NodeId v : topo.neighbors(rfb.auctioneer)) {
          if (topo.role(v) != NodeRole::handheld) continue;
          if (std::find(winners.begin(), winners.end(), v) != winners.end())
            continue;
          eligible.insert(v);
        }
      } else {
        flag("unknown auctioneer", where);
      }

      std::set<NodeId> bidders;
      NodeId lowest = 0;
      Money lowest_amount;
      bool first_bid = true;
      for (const Bid &b : a.bids) {
        if (!bidders.insert(b.bidder).second) flag("duplicate bid", where);
        if (!eligible.count(b.bidder)) {
          flag("ineligible bidder",
               where + ": node " + std::to_string(b.bidder));
        }
        if (b.amount < Money() || b.amount > rfb.budget) {
          flag("bid over budget", where + ": node " + std::to_string(b.bidder));
        }
        if (b.submit_time < 0.0 || b.submit_time > a.window) {
          flag("bid outside window", where);
        }
        if (first_bid || b.amount < lowest_amount ||
            (b.amount == lowest_amount && b.bidder < lowest)) {
          lowest = b.bidder;
          lowest_amount = b.amount;
          first_bid = false;
        }
      }
      for (NodeId n : eligible) {
        if (!bidders.count(n)) {
          flag("mandatory bids", where + ": missing bid from " + std::to_string(n));
        }
      }

      if (!bidders.count(a.winner)) {
        flag("winner did not bid", where);
        continue;
      }
      if (std::find(winners.begin(), winners.end(), a.winner) != winners.end()) {
        flag("loop prevention", where);
      }
      if (topo.has_node(rfb.auctioneer) &&
          topo.role(rfb.auctioneer) == NodeRole::access_point &&
          a.winner != lowest) {
        flag("ap lowest bid", where);
      }

      Money price;
      for (const Bid &b : a.bids) {
        if (b.bidder == a.winner) price = b.amount;
      }
      contracts.push_back({rfb.auctioneer, a.winner, price, rfb.fine, p.id});
      prev_fine = rfb.fine;
      have_prev = true;
      winners.push_back(a.winner);
      expected_auctioneer = a.winner;
    }

    if (winners != p.forwarders) {
      flag("hop accounting", "forwarder history does not match auction winners");
    }
    const bool delivered = p.status == PacketStatus::delivered;
    const bool direct = delivered && !t.bypass;
    const int expected_hops =
        static_cast<int>(winners.size()) + (direct ? 1 : 0);
    if (p.hops != expected_hops) flag("hop accounting", "hop counter drift");
    if (delivered && p.hops > p.h0) flag("delivery deadline", "p > H0");
    if (direct) {
      if (winners.empty() ||
          !topo.adjacent(winners.back(), p.dest_ap)) {
        flag("delivery adjacency", "final forwarder not adjacent to dest AP");
      }
    }
    if (t.bypass && (winners.empty() || t.bypass_node != winners.back())) {
      flag("bypass node mismatch", "");
    }

    // Recompute the settlement and compare with the recorded transfers.
    std::vector<Transfer> expected;
    if (delivered) {
      for (const HopContract &c : contracts) {
        expected.push_back({p.id, TransferReason::success_payment, c.upstream,
                            c.downstream, c.price});
      }
      if (t.bypass) {
        expected.push_back({p.id, TransferReason::bypass_charge, t.bypass_node,
                            kOperatorAccount, p.initial_budget});
      }
    } else {
      for (const HopContract &c : contracts) {
        expected.push_back({p.id, TransferReason::fine, c.downstream,
                            c.upstream, c.fine});
      }
    }
    bool settlement_ok = expected.size() == t.transfers.size();
    for (std::size_t i = 0; settlement_ok && i < expected.size(); ++i) {
      const Transfer &e = expected[i];
      const Transfer &r = t.transfers[i];
      settlement_ok = e.reason == r.reason && e.payer == r.payer &&
                      e.payee == r.payee && e.amount == r.amount;
    }
    if (!settlement_ok) flag("settlement", "transfers do not match the rulebook");

    // Conservation: deltas must be the exact fold of the transfer list and
    // sum to zero.
    std::map<NodeId, Money> fold;
    for (const Transfer &tr : t.transfers) {
      fold[tr.payer] -= tr.amount;
      fold[tr.payee] += tr.amount;
    }
    Money total;
    for (auto &[account, d] : t.deltas) total += d;
    std::map<NodeId, Money> nonzero;
    for (auto &[account, d] : fold) {
      if (d != Money()) nonzero[account] = d;
    }
    if (total != Money() || nonzero != t.deltas) {
      flag("conservation", "balance deltas do not sum to zero or drift from transfers");
    }
  }
  return out;
}

}  // namespace offsim
