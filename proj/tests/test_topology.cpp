#include "doctest.h"

#include <filesystem>

#include "offsim/topology.hpp"
#include "test_util.hpp"

using namespace offsim;

namespace {

// AP1 - a - b - c - AP2
Topology line5() {
  return Topology({{10, NodeRole::access_point},
                   {0, NodeRole::handheld},
                   {1, NodeRole::handheld},
                   {2, NodeRole::handheld},
                   {11, NodeRole::access_point}},
                  {{10, 0}, {0, 1}, {1, 2}, {2, 11}});
}

}  // namespace

TEST_CASE("hop_count basics") {
  Topology t = line5();
  CHECK(t.hop_count(0, 0) == 0);
  CHECK(t.hop_count(0, 11) == 3);
  CHECK(t.hop_count(10, 11) == 4);
  CHECK(t.hop_count(2, 11) == 1);
  CHECK_THROWS_AS(t.hop_count(99, 11), SimError);
}

TEST_CASE("hop_count excludes non-destination APs as transit") {
  // a - AP1 - b and a - c - b: through the AP would be 2 hops, but routing
  // must take the 2-hop handheld path; remove c and a cannot reach b at all.
  Topology t({{0, NodeRole::handheld},
              {1, NodeRole::handheld},
              {2, NodeRole::handheld},
              {10, NodeRole::access_point},
              {11, NodeRole::access_point}},
             {{0, 10}, {1, 10}, {0, 2}, {2, 1}, {1, 11}});
  CHECK(t.hop_count(0, 1) == 2);  // via c, not via AP1
  CHECK(t.hop_count(0, 10) == 1);
  CHECK(t.hop_count(0, 11) == 3);
}

TEST_CASE("invariant: every AP needs a handheld neighbor") {
  CHECK_THROWS_AS(
      (Topology({{0, NodeRole::handheld}, {10, NodeRole::access_point},
                 {11, NodeRole::access_point}},
                {{0, 10}, {10, 11}})),
      SimError);
}

TEST_CASE("neighbors match the edge list") {
  Topology t = line5();
  CHECK(t.neighbors(1) == std::set<NodeId>{0, 2});
  CHECK(t.neighbors(10) == std::set<NodeId>{0});
  CHECK_THROWS_AS(t.neighbors(42), SimError);

  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    Topology r = testutil::random_topology(rng);
    for (auto [a, b] : r.edges()) {
      CHECK(r.neighbors(a).count(b) == 1);
      CHECK(r.neighbors(b).count(a) == 1);
    }
  }
}

TEST_CASE("constructor rejects self-loops and duplicate edges") {
  CHECK_THROWS_AS((Topology({{0, NodeRole::handheld}}, {{0, 0}})), SimError);
  CHECK_THROWS_AS(
      (Topology({{0, NodeRole::handheld}, {1, NodeRole::handheld}},
                {{0, 1}, {1, 0}})),
      SimError);
}

TEST_CASE("generate_geometric") {
  SUBCASE("huge radius connects everything") {
    Topology t = Topology::generate_geometric(1, 2, 2.0, 3);
    for (NodeId ap : t.access_points()) CHECK(t.adjacent(ap, 0));
  }
  SUBCASE("same seed, same edges") {
    Topology a = Topology::generate_geometric(10, 2, 0.4, 7);
    Topology b = Topology::generate_geometric(10, 2, 0.4, 7);
    CHECK(a.edges() == b.edges());
    CHECK(a.to_json_text() == b.to_json_text());
  }
  SUBCASE("invariants verified by independent BFS") {
    Topology t = Topology::generate_geometric(10, 2, 0.4, 7);
    // Connectivity of the handheld subgraph via the oracle.
    auto hh = t.handhelds();
    for (NodeId h : hh) {
      CHECK(testutil::oracle_hop_count(t, hh.front(), h).has_value());
    }
    for (NodeId ap : t.access_points()) {
      bool has_handheld = false;
      for (NodeId v : t.neighbors(ap)) {
        if (t.role(v) == NodeRole::handheld) has_handheld = true;
      }
      CHECK(has_handheld);
    }
  }
  SUBCASE("impossible radius fails with a hint") {
    CHECK_THROWS_WITH_AS(Topology::generate_geometric(5, 2, 0.001, 1, 50),
                         doctest::Contains("larger radius"), SimError);
  }
}

TEST_CASE("topology file round-trip and validation") {
  Topology t = line5();
  Topology back = Topology::from_json_text(t.to_json_text());
  CHECK(back.to_json_text() == t.to_json_text());

  SUBCASE("minimal valid file") {
    Topology m = Topology::from_json_text(R"({
      "version": 1,
      "nodes": [{"id": 0, "role": "handheld"},
                {"id": 1, "role": "access_point"},
                {"id": 2, "role": "access_point"}],
      "edges": [[0, 1], [0, 2]]
    })");
    CHECK(m.nodes().size() == 3);
  }
  SUBCASE("partitioned handhelds named in the error") {
    CHECK_THROWS_WITH_AS(Topology::from_json_text(R"({
      "version": 1,
      "nodes": [{"id": 0, "role": "handheld"}, {"id": 1, "role": "handheld"},
                {"id": 2, "role": "access_point"}, {"id": 3, "role": "access_point"}],
      "edges": [[0, 2], [1, 3]]
    })"),
                         doctest::Contains("handheld subgraph not connected"),
                         SimError);
  }
  SUBCASE("AP without handheld neighbor is named") {
    CHECK_THROWS_WITH_AS(Topology::from_json_text(R"({
      "version": 1,
      "nodes": [{"id": 0, "role": "handheld"}, {"id": 7, "role": "access_point"}],
      "edges": []
    })"),
                         doctest::Contains("access point 7"), SimError);
  }
  SUBCASE("bad version") {
    CHECK_THROWS_AS(Topology::from_json_text(R"({"version": 2})"), SimError);
  }
}

TEST_CASE("hop_count equals the exhaustive simple-path oracle") {
  Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    Topology t = testutil::random_topology(rng);
    for (const auto &[a, ra] : t.nodes()) {
      for (const auto &[b, rb] : t.nodes()) {
        auto expect = testutil::oracle_hop_count(t, a, b);
        if (expect) {
          CHECK(t.hop_count(a, b) == *expect);
        } else {
          CHECK_THROWS_AS(t.hop_count(a, b), SimError);
        }
      }
    }
  }
}

TEST_CASE("hop_count is symmetric between handheld endpoints") {
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    Topology t = testutil::random_topology(rng);
    auto hh = t.handhelds();
    for (NodeId a : hh) {
      for (NodeId b : hh) {
        CHECK(t.hop_count(a, b) == t.hop_count(b, a));
      }
    }
  }
}
