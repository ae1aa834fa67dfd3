// Copyright 2026 The dsrm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "dsrm/errors.hpp"
#include "dsrm/network.hpp"

using namespace dsrm;

namespace {

Graph triangle() {
  Graph g;
  g.n_nodes = 3;
  g.edges = {{0, 1}, {1, 2}, {0, 2}};
  return g;
}

int column_nnz(const RoutingMatrix& r, int f) {
  int n = 0;
  for (int l = 0; l < r.num_links(); ++l) n += r.entries(l, f) != 0.0;
  return n;
}

// Walks the marked links of column f and checks they form a simple s->d path.
void check_valid_path(const RoutingMatrix& r, int f) {
  const auto [s, d] = r.flows[f];
  const std::vector<int> path = routed_path(r, f);
  REQUIRE(path.size() >= 2);
  CHECK(path.front() == s);
  CHECK(path.back() == d);
  CHECK(static_cast<int>(path.size()) - 1 == column_nnz(r, f));
  std::set<int> seen(path.begin(), path.end());
  CHECK(seen.size() == path.size());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    CHECK(r.entries(r.link_index.at({path[i], path[i + 1]}), f) == 1.0);
  }
}

}  // namespace

TEST_CASE("graph validation") {
  Graph g;
  g.n_nodes = 3;
  g.edges = {{0, 0}};
  CHECK_THROWS_AS(g.validate(), ShapeMismatch);
  g.edges = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(g.validate(), ShapeMismatch);
  g.edges = {{0, 3}};
  CHECK_THROWS_AS(g.validate(), ShapeMismatch);
  g.edges = {{0, 1}, {1, 2}};
  CHECK_NOTHROW(g.validate());
  const auto adj = g.neighbors();
  CHECK(adj[1] == std::vector<int>{0, 2});
}

TEST_CASE("is_connected") {
  Graph one;
  one.n_nodes = 1;
  CHECK(is_connected(one));
  Graph two;
  two.n_nodes = 2;
  CHECK_FALSE(is_connected(two));
  CHECK(is_connected(path_graph(3)));
  CHECK(is_connected(star_graph(5)));
  CHECK(complete_graph(5).edges.size() == 10);
}

TEST_CASE("random_geometric_graph") {
  const GeometricGraph single = random_geometric_graph(1, 0.1, 3);
  CHECK(single.graph.n_nodes == 1);
  CHECK(single.graph.edges.empty());
  CHECK(is_connected(single.graph));

  const GeometricGraph full = random_geometric_graph(5, 2.0, 3);
  CHECK(full.graph.edges.size() == 10);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GeometricGraph g = random_geometric_graph(20, 0.35, seed);
    CHECK(is_connected(g.graph));
    CHECK_NOTHROW(g.graph.validate());
    REQUIRE(g.positions.size() == 20);
    for (const auto& [i, j] : g.graph.edges) {
      const double dx = g.positions[i].x - g.positions[j].x;
      const double dy = g.positions[i].y - g.positions[j].y;
      CHECK(std::sqrt(dx * dx + dy * dy) < 0.35);
    }
    for (const auto& p : g.positions) {
      CHECK(p.x >= 0.0);
      CHECK(p.x <= 1.0);
      CHECK(p.y >= 0.0);
      CHECK(p.y <= 1.0);
    }
    const RoutingMatrix r = shortest_path_routing(g.graph, od_flows(20));
    CHECK(r.num_links() == 2 * static_cast<int>(g.graph.edges.size()));
    CHECK(r.num_flows() == 380);
  }

  const GeometricGraph a = random_geometric_graph(12, 0.4, 9);
  const GeometricGraph b = random_geometric_graph(12, 0.4, 9);
  CHECK(a.graph.edges == b.graph.edges);
  CHECK(a.attempts == b.attempts);

  CHECK_THROWS_AS(random_geometric_graph(30, 0.01, 1), ConnectivityFailure);
}

TEST_CASE("od_flows") {
  CHECK(od_flows(2) == std::vector<OdPair>{{0, 1}, {1, 0}});
  CHECK(od_flows(3).size() == 6);
  CHECK(od_flows(20).size() == 380);
  const auto f = od_flows(4);
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i - 1] < f[i]);
}

TEST_CASE("shortest_path_routing examples") {
  const Graph p = path_graph(3);
  const RoutingMatrix r = shortest_path_routing(p, {{0, 2}, {0, 1}});
  CHECK(r.num_links() == 4);
  CHECK(r.entries(r.link_index.at({0, 1}), 0) == 1.0);
  CHECK(r.entries(r.link_index.at({1, 2}), 0) == 1.0);
  CHECK(column_nnz(r, 0) == 2);
  CHECK(column_nnz(r, 1) == 1);

  const RoutingMatrix t = shortest_path_routing(triangle(), {{0, 2}});
  CHECK(column_nnz(t, 0) == 1);
  CHECK(t.entries(t.link_index.at({0, 2}), 0) == 1.0);

  // Square 0-1-2-3-0: both two-hop routes from 0 to 2 tie; lower next hop wins.
  Graph sq;
  sq.n_nodes = 4;
  sq.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const RoutingMatrix s = shortest_path_routing(sq, {{0, 2}});
  CHECK(routed_path(s, 0) == std::vector<int>{0, 1, 2});

  Graph split;
  split.n_nodes = 3;
  split.edges = {{0, 1}};
  CHECK_THROWS_AS(shortest_path_routing(split, {{0, 2}}), ConnectivityFailure);
}

TEST_CASE("routing columns are valid shortest paths") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const GeometricGraph g = random_geometric_graph(10, 0.5, seed);
    const RoutingMatrix r = shortest_path_routing(g.graph, od_flows(10));
    for (int f = 0; f < r.num_flows(); ++f) {
      check_valid_path(r, f);
      CHECK(column_nnz(r, f) >= 1);
    }
    for (Eigen::Index i = 0; i < r.entries.size(); ++i) {
      const double v = r.entries.data()[i];
      CHECK((v == 0.0 || v == 1.0));
    }
    const RoutingMatrix again = shortest_path_routing(g.graph, od_flows(10));
    CHECK(again.entries == r.entries);
    CHECK(again.link_index == r.link_index);
  }
}

TEST_CASE("partition_rows") {
  const Graph p = path_graph(3);
  const RoutingMatrix r = shortest_path_routing(p, od_flows(3));
  const RowPartition part = partition_rows(p, r);
  CHECK(part.counts == std::vector<int>{1, 2, 1});
  for (int l = part.offsets[1]; l < part.offsets[1] + part.counts[1]; ++l) {
    CHECK(r.links[l].from == 1);
  }
  const Graph star = star_graph(4);
  const RoutingMatrix rs = shortest_path_routing(star, od_flows(4));
  CHECK(partition_rows(star, rs).counts[0] == 3);

  const GeometricGraph g = random_geometric_graph(8, 0.6, 4);
  const RoutingMatrix rg = shortest_path_routing(g.graph, od_flows(8));
  const RowPartition pg = partition_rows(g.graph, rg);
  CHECK(pg.total_rows() == rg.num_links());
  Matrix stacked(rg.num_links(), rg.num_flows());
  for (int n = 0; n < pg.num_agents(); ++n) {
    const Matrix block = agent_block(rg.entries, pg, n);
    stacked.middleRows(pg.offsets[n], pg.counts[n]) = block;
    for (int l = pg.offsets[n]; l < pg.offsets[n] + pg.counts[n]; ++l) {
      CHECK(rg.links[l].from == n);
    }
  }
  CHECK(stacked == rg.entries);
}

TEST_CASE("equal_partition") {
  const RowPartition p = equal_partition(380, 20);
  for (int c : p.counts) CHECK(c == 19);
  const RowPartition q = equal_partition(10, 4);
  CHECK(q.counts == std::vector<int>{3, 3, 2, 2});
  CHECK(q.offsets == std::vector<int>{0, 3, 6, 8});
  CHECK_THROWS_AS(equal_partition(5, 0), ShapeMismatch);
}
