#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "offsim/error.hpp"

namespace offsim {

using NodeId = std::int32_t;

enum class NodeRole { handheld, access_point };

/// Hop counts from every node to one destination AP. Unreachable nodes are
/// absent from the map.
using HopCountTable = std::map<NodeId, int>;

/// The backbone-plus-ad-hoc graph: handhelds and access points joined by
/// undirected wireless links. Immutable after construction; all shortest-path
/// queries treat only handhelds as transit nodes (the backbone is reached via
/// the final attachment edge, never routed through).
class Topology {
public:
  /// Builds and validates: handheld subgraph connected, every AP has a
  /// handheld neighbor, no self-loops, no duplicate edges.
  Topology(std::map<NodeId, NodeRole> nodes,
           std::vector<std::pair<NodeId, NodeId>> edges);

  static Topology generate_geometric(int n_handhelds, int n_aps, double radius,
                                     std::uint64_t seed, int max_attempts = 1000);

  static Topology load(const std::string &path);
  void save(const std::string &path) const;

  static Topology from_json_text(const std::string &text);
  std::string to_json_text() const;

  bool has_node(NodeId id) const { return roles_.count(id) != 0; }
  NodeRole role(NodeId id) const;
  const std::map<NodeId, NodeRole> &nodes() const { return roles_; }
  const std::vector<std::pair<NodeId, NodeId>> &edges() const { return edges_; }

  const std::set<NodeId> &neighbors(NodeId id) const;
  bool adjacent(NodeId a, NodeId b) const;

  /// Minimum number of edges from `from` to `dest` where every interior node
  /// is a handheld. Throws on unknown nodes or when dest is unreachable.
  int hop_count(NodeId from, NodeId dest) const;

  /// BFS from `dest` over handheld transit; one pass answers hop_count for
  /// every source.
  HopCountTable hop_counts_to(NodeId dest) const;

  std::vector<NodeId> handhelds() const;
  std::vector<NodeId> access_points() const;

private:
  std::map<NodeId, NodeRole> roles_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::map<NodeId, std::set<NodeId>> adj_;
};

}  // namespace offsim
