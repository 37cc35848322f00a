#include "offsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "offsim/rng.hpp"
#include "json.hpp"

namespace offsim {

namespace {

void check_invariants(const std::map<NodeId, NodeRole> &roles,
                      const std::map<NodeId, std::set<NodeId>> &adj) {
  // Handheld-induced subgraph must be connected.
  std::vector<NodeId> hh;
  for (const auto &[id, role] : roles)
    if (role == NodeRole::handheld) hh.push_back(id);
  if (!hh.empty()) {
    std::set<NodeId> seen{hh.front()};
    std::deque<NodeId> q{hh.front()};
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop_front();
      auto it = adj.find(u);
      if (it == adj.end()) continue;
      for (NodeId v : it->second) {
        if (roles.at(v) == NodeRole::handheld && seen.insert(v).second)
          q.push_back(v);
      }
    }
    if (seen.size() != hh.size()) {
      throw SimError(ErrorCode::invariant_violation,
                     "handheld subgraph not connected");
    }
  }
  // Every AP needs at least one handheld neighbor.
  for (const auto &[id, role] : roles) {
    if (role != NodeRole::access_point) continue;
    bool ok = false;
    auto it = adj.find(id);
    if (it != adj.end()) {
      for (NodeId v : it->second) {
        if (roles.at(v) == NodeRole::handheld) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) {
      throw SimError(ErrorCode::invariant_violation,
                     "access point " + std::to_string(id) +
                         " has no handheld neighbor");
    }
  }
}

}  // namespace

Topology::Topology(std::map<NodeId, NodeRole> nodes,
                   std::vector<std::pair<NodeId, NodeId>> edges)
    : roles_(std::move(nodes)) {
  for (auto [a, b] : edges) {
    if (!roles_.count(a) || !roles_.count(b)) {
      throw SimError(ErrorCode::unknown_node,
                     "edge references unknown node " +
                         std::to_string(roles_.count(a) ? b : a));
    }
    if (a == b) {
      throw SimError(ErrorCode::invariant_violation,
                     "self-loop on node " + std::to_string(a));
    }
    if (adj_[a].count(b)) {
      throw SimError(ErrorCode::invariant_violation,
                     "duplicate edge " + std::to_string(a) + "-" +
                         std::to_string(b));
    }
    adj_[a].insert(b);
    adj_[b].insert(a);
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  check_invariants(roles_, adj_);
}

NodeRole Topology::role(NodeId id) const {
  auto it = roles_.find(id);
  if (it == roles_.end())
    throw SimError(ErrorCode::unknown_node, "unknown node " + std::to_string(id));
  return it->second;
}

const std::set<NodeId> &Topology::neighbors(NodeId id) const {
  role(id);  // existence check
  static const std::set<NodeId> empty;
  auto it = adj_.find(id);
  return it == adj_.end() ? empty : it->second;
}

bool Topology::adjacent(NodeId a, NodeId b) const {
  return neighbors(a).count(b) != 0;
}

int Topology::hop_count(NodeId from, NodeId dest) const {
  role(dest);
  const auto &nbrs_from = neighbors(from);  // checks `from`
  if (from == dest) return 0;
  // BFS expanding only through handhelds (plus the start node itself).
  std::map<NodeId, int> dist{{from, 0}};
  std::deque<NodeId> q{from};
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    if (u != from && roles_.at(u) != NodeRole::handheld) continue;
    for (NodeId v : neighbors(u)) {
      if (dist.count(v)) continue;
      dist[v] = dist[u] + 1;
      if (v == dest) return dist[v];
      q.push_back(v);
    }
  }
  (void)nbrs_from;
  throw SimError(ErrorCode::unreachable,
                 "node " + std::to_string(dest) + " unreachable from " +
                     std::to_string(from));
}

HopCountTable Topology::hop_counts_to(NodeId dest) const {
  role(dest);
  HopCountTable dist;
  dist[dest] = 0;
  std::deque<NodeId> q{dest};
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    if (u != dest && roles_.at(u) != NodeRole::handheld) continue;
    for (NodeId v : neighbors(u)) {
      if (dist.count(v)) continue;
      dist[v] = dist[u] + 1;
      q.push_back(v);
    }
  }
  return dist;
}

std::vector<NodeId> Topology::handhelds() const {
  std::vector<NodeId> out;
  for (const auto &[id, r] : roles_)
    if (r == NodeRole::handheld) out.push_back(id);
  return out;
}

std::vector<NodeId> Topology::access_points() const {
  std::vector<NodeId> out;
  for (const auto &[id, r] : roles_)
    if (r == NodeRole::access_point) out.push_back(id);
  return out;
}

Topology Topology::generate_geometric(int n_handhelds, int n_aps, double radius,
                                      std::uint64_t seed, int max_attempts) {
  if (n_handhelds < 1 || n_aps < 2 || radius <= 0.0) {
    throw SimError(ErrorCode::config_error,
                   "need n_handhelds >= 1, n_aps >= 2, radius > 0");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const int n = n_handhelds + n_aps;
    std::vector<std::pair<double, double>> pos(n);
    for (auto &p : pos) {
      p.first = rng.next_double();
      p.second = rng.next_double();
    }
    std::map<NodeId, NodeRole> nodes;
    for (int i = 0; i < n; ++i) {
      nodes[i] = i < n_handhelds ? NodeRole::handheld : NodeRole::access_point;
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double dx = pos[i].first - pos[j].first;
        double dy = pos[i].second - pos[j].second;
        if (std::sqrt(dx * dx + dy * dy) <= radius) edges.emplace_back(i, j);
      }
    }
    try {
      return Topology(std::move(nodes), std::move(edges));
    } catch (const SimError &) {
      // invariants failed; resample
    }
  }
  throw SimError(ErrorCode::config_error,
                 "could not generate a valid topology in " +
                     std::to_string(max_attempts) +
                     " attempts; try a larger radius");
}

Topology Topology::from_json_text(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw SimError(ErrorCode::parse_error,
                   std::string("topology parse error: ") + e.what());
  }
  if (!j.contains("version") || j["version"] != 1) {
    throw SimError(ErrorCode::parse_error, "topology file: version must be 1");
  }
  std::map<NodeId, NodeRole> nodes;
  for (const auto &n : j.at("nodes")) {
    NodeId id = n.at("id").get<NodeId>();
    std::string role = n.at("role").get<std::string>();
    NodeRole r;
    if (role == "handheld") {
      r = NodeRole::handheld;
    } else if (role == "access_point") {
      r = NodeRole::access_point;
    } else {
      throw SimError(ErrorCode::parse_error, "unknown role '" + role + "'");
    }
    if (!nodes.emplace(id, r).second) {
      throw SimError(ErrorCode::parse_error,
                     "duplicate node id " + std::to_string(id));
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto &e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw SimError(ErrorCode::parse_error, "edge must be a pair [a, b]");
    }
    edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
  }
  return Topology(std::move(nodes), std::move(edges));
}

std::string Topology::to_json_text() const {
  nlohmann::json j;
  j["version"] = 1;
  j["nodes"] = nlohmann::json::array();
  for (const auto &[id, r] : roles_) {
    j["nodes"].push_back(
        {{"id", id},
         {"role", r == NodeRole::handheld ? "handheld" : "access_point"}});
  }
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : edges_) j["edges"].push_back({a, b});
  return j.dump(2) + "\n";
}

Topology Topology::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw SimError(ErrorCode::io_error, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void Topology::save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw SimError(ErrorCode::io_error, "cannot write " + path);
  out << to_json_text();
}

}  // namespace offsim
