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

// Agent communication graph, OD flows and the link-by-flow routing operator.

#ifndef DSRM_NETWORK_HPP_
#define DSRM_NETWORK_HPP_

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dsrm/numerics.hpp"

namespace dsrm {

// Undirected simple graph. Edges are stored as (i, j) with i < j, sorted.
struct Graph {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;

  // Sorted adjacency lists.
  std::vector<std::vector<int>> neighbors() const;

  // Throws ShapeMismatch on self loops, duplicates or out-of-range nodes.
  void validate() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct GeometricGraph {
  Graph graph;
  std::vector<Point> positions;
  int attempts = 1;  // position draws needed to obtain a connected graph
};

// n points uniform on the unit square, edge iff distance < comm_range.
// Resamples (substream index = attempt) until connected; throws
// ConnectivityFailure after 1000 retries.
GeometricGraph random_geometric_graph(int n, double comm_range, std::uint64_t seed);

bool is_connected(const Graph& g);

Graph path_graph(int n);
Graph star_graph(int n);
Graph complete_graph(int n);

using OdPair = std::pair<int, int>;

// All ordered (s, d), s != d, lexicographic.
std::vector<OdPair> od_flows(int n);

struct DirectedLink {
  int from = 0;
  int to = 0;
};

// 0/1 matrix, one row per directed link and one column per flow. Rows are
// ordered by (from, to), so the links leaving each agent are contiguous.
struct RoutingMatrix {
  Matrix entries;
  std::vector<DirectedLink> links;
  std::map<std::pair<int, int>, int> link_index;
  std::vector<OdPair> flows;
  std::map<OdPair, int> flow_index;

  int num_links() const { return static_cast<int>(links.size()); }
  int num_flows() const { return static_cast<int>(flows.size()); }
};

// Hop-count shortest paths. From the current node the walk always moves to
// the lowest-numbered neighbor that is one hop closer to the destination.
RoutingMatrix shortest_path_routing(const Graph& g, const std::vector<OdPair>& flows);

// Node sequence s, ..., d of a routed flow, recovered from its column.
std::vector<int> routed_path(const RoutingMatrix& routing, int flow);

// Contiguous row ranges, one per agent.
struct RowPartition {
  std::vector<int> offsets;
  std::vector<int> counts;

  int num_agents() const { return static_cast<int>(counts.size()); }
  int total_rows() const;
};

// Agent i owns the rows of its outgoing links i -> j.
RowPartition partition_rows(const Graph& g, const RoutingMatrix& routing);

// Splits `rows` into n nearly equal contiguous blocks (earlier blocks get
// the remainder).
RowPartition equal_partition(int rows, int n);

// Row block of agent n.
Matrix agent_block(const Matrix& m, const RowPartition& part, int agent);

}  // namespace dsrm

#endif  // DSRM_NETWORK_HPP_
