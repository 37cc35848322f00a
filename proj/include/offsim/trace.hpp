#pragma once

#include <string>
#include <vector>

#include "offsim/engine.hpp"

namespace offsim {

/// Line-delimited trace format: a header record carrying the topology,
/// then one record per game. Self-contained, so an audit needs nothing else.
std::string trace_jsonl(const Topology &topo,
                        const std::vector<GameTrace> &traces);

struct TraceFile {
  Topology topo;
  std::vector<GameTrace> traces;
};

TraceFile trace_from_jsonl(const std::string &text);
TraceFile load_trace(const std::string &path);

struct AuditViolation {
  int round = 0;
  int game = 0;
  std::string rule;
  std::string detail;
};

/// Re-verifies every protocol and settlement rule on a recorded trace:
/// RFB legality, mandatory bids, loop prevention, AP lowest-bid selection,
/// fine monotonicity, hop accounting, the delivery deadline, settlement
/// amounts, and conservation.
std::vector<AuditViolation> audit(const TraceFile &tf);

}  // namespace offsim
