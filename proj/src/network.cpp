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

#include "dsrm/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <string>

#include "dsrm/errors.hpp"
#include "dsrm/rng.hpp"

namespace dsrm {

std::vector<std::vector<int>> Graph::neighbors() const {
  std::vector<std::vector<int>> adj(n_nodes);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

void Graph::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : edges) {
    if (i == j) throw ShapeMismatch("graph: self loop at node " + std::to_string(i));
    if (i < 0 || j < 0 || i >= n_nodes || j >= n_nodes) {
      throw ShapeMismatch("graph: node index out of range");
    }
    if (!seen.insert(std::minmax(i, j)).second) {
      throw ShapeMismatch("graph: duplicate edge");
    }
  }
}

bool is_connected(const Graph& g) {
  if (g.n_nodes <= 1) return true;
  const auto adj = g.neighbors();
  std::vector<char> seen(g.n_nodes, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == g.n_nodes;
}

GeometricGraph random_geometric_graph(int n, double comm_range, std::uint64_t seed) {
  if (n < 1) throw ShapeMismatch("random_geometric_graph: n must be >= 1");
  if (!(comm_range > 0.0)) throw ShapeMismatch("random_geometric_graph: comm_range must be > 0");
  constexpr int kMaxRetries = 1000;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    Rng rng = make_rng(seed, Stream::kGraph, static_cast<std::uint32_t>(attempt));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GeometricGraph out;
    out.graph.n_nodes = n;
    out.positions.resize(n);
    for (auto& p : out.positions) {
      p.x = unit(rng);
      p.y = unit(rng);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dx = out.positions[i].x - out.positions[j].x;
        const double dy = out.positions[i].y - out.positions[j].y;
        if (std::hypot(dx, dy) < comm_range) out.graph.edges.emplace_back(i, j);
      }
    }
    if (is_connected(out.graph)) {
      out.attempts = attempt + 1;
      return out;
    }
  }
  throw ConnectivityFailure("random_geometric_graph: no connected realization after " +
                            std::to_string(kMaxRetries) + " retries (comm_range too small?)");
}

Graph path_graph(int n) {
  Graph g;
  g.n_nodes = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

Graph star_graph(int n) {
  Graph g;
  g.n_nodes = n;
  for (int i = 1; i < n; ++i) g.edges.emplace_back(0, i);
  return g;
}

Graph complete_graph(int n) {
  Graph g;
  g.n_nodes = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  }
  return g;
}

std::vector<OdPair> od_flows(int n) {
  std::vector<OdPair> out;
  out.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0));
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      if (s != d) out.emplace_back(s, d);
    }
  }
  return out;
}

namespace {

std::vector<int> hop_distances(const std::vector<std::vector<int>>& adj, int target) {
  std::vector<int> dist(adj.size(), std::numeric_limits<int>::max());
  std::queue<int> frontier;
  dist[target] = 0;
  frontier.push(target);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (dist[v] == std::numeric_limits<int>::max()) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

}  // namespace

RoutingMatrix shortest_path_routing(const Graph& g, const std::vector<OdPair>& flows) {
  g.validate();
  const auto adj = g.neighbors();
  RoutingMatrix out;
  for (int i = 0; i < g.n_nodes; ++i) {
    for (int j : adj[i]) {
      out.link_index[{i, j}] = static_cast<int>(out.links.size());
      out.links.push_back({i, j});
    }
  }
  out.flows = flows;
  for (std::size_t f = 0; f < flows.size(); ++f) {
    out.flow_index[flows[f]] = static_cast<int>(f);
  }
  out.entries = Matrix::Zero(static_cast<Eigen::Index>(out.links.size()),
                             static_cast<Eigen::Index>(flows.size()));

  std::map<int, std::vector<int>> dist_cache;
  for (std::size_t f = 0; f < flows.size(); ++f) {
    const auto [s, d] = flows[f];
    if (s < 0 || d < 0 || s >= g.n_nodes || d >= g.n_nodes || s == d) {
      throw ShapeMismatch("shortest_path_routing: invalid OD pair");
    }
    auto it = dist_cache.find(d);
    if (it == dist_cache.end()) it = dist_cache.emplace(d, hop_distances(adj, d)).first;
    const auto& dist = it->second;
    if (dist[s] == std::numeric_limits<int>::max()) {
      throw ConnectivityFailure("shortest_path_routing: " + std::to_string(d) +
                                " unreachable from " + std::to_string(s));
    }
    int u = s;
    while (u != d) {
      int next = -1;
      for (int v : adj[u]) {
        if (dist[v] == dist[u] - 1) {
          next = v;
          break;
        }
      }
      out.entries(out.link_index.at({u, next}), static_cast<Eigen::Index>(f)) = 1.0;
      u = next;
    }
  }
  return out;
}

std::vector<int> routed_path(const RoutingMatrix& routing, int flow) {
  const auto [s, d] = routing.flows.at(flow);
  std::map<int, int> next_hop;
  for (int l = 0; l < routing.num_links(); ++l) {
    if (routing.entries(l, flow) != 0.0) {
      if (!next_hop.emplace(routing.links[l].from, routing.links[l].to).second) {
        throw ShapeMismatch("routed_path: node left twice");
      }
    }
  }
  std::vector<int> path{s};
  int u = s;
  while (u != d) {
    auto it = next_hop.find(u);
    if (it == next_hop.end()) throw ShapeMismatch("routed_path: broken path");
    u = it->second;
    path.push_back(u);
    if (path.size() > next_hop.size() + 1) throw ShapeMismatch("routed_path: cycle");
  }
  if (path.size() != next_hop.size() + 1) throw ShapeMismatch("routed_path: stray links");
  return path;
}

int RowPartition::total_rows() const {
  int t = 0;
  for (int c : counts) t += c;
  return t;
}

RowPartition partition_rows(const Graph& g, const RoutingMatrix& routing) {
  RowPartition part;
  part.offsets.assign(g.n_nodes, 0);
  part.counts.assign(g.n_nodes, 0);
  for (const auto& link : routing.links) ++part.counts.at(link.from);
  int off = 0;
  for (int n = 0; n < g.n_nodes; ++n) {
    part.offsets[n] = off;
    off += part.counts[n];
  }
  // Rows are sorted by source, so ownership ranges are contiguous.
  for (int l = 0; l < routing.num_links(); ++l) {
    const int owner = routing.links[l].from;
    if (l < part.offsets[owner] || l >= part.offsets[owner] + part.counts[owner]) {
      throw ShapeMismatch("partition_rows: link rows not grouped by source");
    }
  }
  return part;
}

RowPartition equal_partition(int rows, int n) {
  if (n < 1) throw ShapeMismatch("equal_partition: need at least one agent");
  RowPartition part;
  part.offsets.resize(n);
  part.counts.resize(n);
  const int base = rows / n;
  const int extra = rows % n;
  int off = 0;
  for (int i = 0; i < n; ++i) {
    part.offsets[i] = off;
    part.counts[i] = base + (i < extra ? 1 : 0);
    off += part.counts[i];
  }
  return part;
}

Matrix agent_block(const Matrix& m, const RowPartition& part, int agent) {
  return m.middleRows(part.offsets.at(agent), part.counts.at(agent));
}

}  // namespace dsrm
