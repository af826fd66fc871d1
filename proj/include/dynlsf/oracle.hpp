#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dynlsf/error.hpp"
#include "dynlsf/graph.hpp"
#include "dynlsf/shift_clustering.hpp"

// Brute-force references. Everything here is deliberately naive and written
// against plain edge lists, so it shares no traversal code with the library.
namespace dynlsf::oracle {

inline constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max();

/// All-pairs hop distances; kUnreachable marks disconnected pairs.
struct DistanceTable {
  std::vector<std::vector<std::int64_t>> dist;

  std::int64_t operator()(NodeId u, NodeId v) const { return dist[u][v]; }
};

inline std::vector<std::int64_t> bfs_hops(NodeId n, const std::vector<Edge>& edges, NodeId src) {
  std::vector<std::int64_t> d(n, kUnreachable);
  d[src] = 0;
  // Edge-list sweeps until nothing changes; O(n * m) per source.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Edge& e : edges) {
      if (d[e.u] != kUnreachable && d[e.u] + 1 < d[e.v]) d[e.v] = d[e.u] + 1, changed = true;
      if (d[e.v] != kUnreachable && d[e.v] + 1 < d[e.u]) d[e.u] = d[e.v] + 1, changed = true;
    }
  }
  return d;
}

inline std::vector<Edge> edge_list(std::span<const SkeletonEdge> skeleton) {
  std::vector<Edge> out;
  out.reserve(skeleton.size());
  for (const auto& e : skeleton) out.emplace_back(e.u, e.v);
  return out;
}

inline DistanceTable all_pairs(NodeId n, const std::vector<Edge>& edges) {
  DistanceTable t;
  t.dist.reserve(n);
  for (NodeId s = 0; s < n; ++s) t.dist.push_back(bfs_hops(n, edges, s));
  return t;
}

/// Clustering by definition: c(u) = argmin_v (dist(u,v) - floor(delta_v)) with
/// ties to the lowest rank; level(u) = dist_{G'}(s, u) by Bellman-Ford on G'.
/// Parents are not part of the definition and are left as kRoot.
inline Clustering reference_clustering(NodeId n, std::span<const SkeletonEdge> skeleton,
                                       std::span<const std::int64_t> floors,
                                       std::span<const NodeId> rank) {
  const auto edges = edge_list(skeleton);
  const DistanceTable d = all_pairs(n, edges);
  Clustering c;
  c.center.assign(n, kRoot);
  c.parent.assign(n, kRoot);
  for (NodeId u = 0; u < n; ++u) {
    std::int64_t best = kUnreachable;
    NodeId arg = kRoot;
    for (NodeId v = 0; v < n; ++v) {
      if (d(u, v) == kUnreachable) continue;
      const std::int64_t shifted = d(u, v) - floors[v];
      if (shifted < best || (shifted == best && rank[v] < rank[arg])) {
        best = shifted;
        arg = v;
      }
    }
    c.center[u] = arg;
  }

  std::int64_t offset = 0;
  for (NodeId u = 0; u < n; ++u) offset = std::max(offset, floors[u]);
  c.level.assign(n, kUnreachable);
  for (NodeId u = 0; u < n; ++u) c.level[u] = offset - floors[u];
  for (NodeId round = 0; round <= n; ++round) {
    bool changed = false;
    for (const Edge& e : edges) {
      if (c.level[e.u] + 1 < c.level[e.v]) c.level[e.v] = c.level[e.u] + 1, changed = true;
      if (c.level[e.v] + 1 < c.level[e.u]) c.level[e.u] = c.level[e.v] + 1, changed = true;
    }
    if (!changed) break;
  }
  return c;
}

/// Acyclic and joins exactly the connected components of the graph.
struct ForestCheck {
  bool acyclic = true;
  bool subset_of_graph = true;
  bool component_preserving = true;
  bool ok() const { return acyclic && subset_of_graph && component_preserving; }
};

inline std::vector<NodeId> component_labels(NodeId n, const std::vector<Edge>& edges) {
  std::vector<NodeId> label(n);
  for (NodeId u = 0; u < n; ++u) label[u] = u;
  // Min-label propagation.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Edge& e : edges) {
      const NodeId m = std::min(label[e.u], label[e.v]);
      if (label[e.u] != m) label[e.u] = m, changed = true;
      if (label[e.v] != m) label[e.v] = m, changed = true;
    }
  }
  return label;
}

inline ForestCheck check_forest(NodeId n, std::span<const SkeletonEdge> graph,
                                const std::vector<Edge>& forest) {
  ForestCheck r;
  std::vector<Edge> g = edge_list(graph);
  std::vector<Edge> sorted_g = g;
  std::sort(sorted_g.begin(), sorted_g.end());
  for (const Edge& e : forest)
    if (!std::binary_search(sorted_g.begin(), sorted_g.end(), e)) r.subset_of_graph = false;

  const auto forest_labels = component_labels(n, forest);
  const auto graph_labels = component_labels(n, g);
  std::map<NodeId, NodeId> comp_size;
  for (NodeId u = 0; u < n; ++u) ++comp_size[forest_labels[u]];
  // A forest has exactly n - #components edges.
  if (forest.size() + comp_size.size() != n) r.acyclic = false;
  for (NodeId u = 0; u < n; ++u)
    if (forest_labels[u] != graph_labels[u]) r.component_preserving = false;
  return r;
}

/// sum over skeleton edges of mu(e) * dist_T(u, v).
inline std::uint64_t stretch_by_distances(NodeId n, std::span<const SkeletonEdge> graph,
                                          const std::vector<Edge>& forest) {
  std::uint64_t total = 0;
  std::map<NodeId, std::vector<std::int64_t>> from;
  for (const auto& e : graph) {
    auto it = from.find(e.u);
    if (it == from.end()) it = from.emplace(e.u, bfs_hops(n, forest, e.u)).first;
    const std::int64_t d = it->second[e.v];
    if (d == kUnreachable) throw Error(ErrorCode::NotSpanning, "forest does not connect an edge");
    total += std::uint64_t(e.mu) * std::uint64_t(d);
  }
  return total;
}

/// sum over forest edges of the multiplicity crossing the cut it induces.
inline std::uint64_t stretch_by_cuts(NodeId n, std::span<const SkeletonEdge> graph,
                                     const std::vector<Edge>& forest) {
  {
    const auto fl = component_labels(n, forest);
    for (const auto& e : graph)
      if (fl[e.u] != fl[e.v]) throw Error(ErrorCode::NotSpanning, "forest does not connect an edge");
  }
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < forest.size(); ++i) {
    std::vector<Edge> rest;
    rest.reserve(forest.size() - 1);
    for (std::size_t j = 0; j < forest.size(); ++j)
      if (j != i) rest.push_back(forest[j]);
    const auto side = bfs_hops(n, rest, forest[i].u);
    for (const auto& e : graph) {
      const bool a = side[e.u] != kUnreachable;
      const bool b = side[e.v] != kUnreachable;
      if (a != b) total += e.mu;
    }
  }
  return total;
}

struct DecompositionReport {
  double inter_fraction = 0;
  std::int64_t max_radius = 0;  // kUnreachable if a cluster is not connected in G[C]
  bool ok = false;
};

/// Strong radius: eccentricity of each center inside its induced cluster.
inline DecompositionReport verify_decomposition(NodeId n, std::span<const SkeletonEdge> graph,
                                                const std::vector<NodeId>& center,
                                                double delta_bound) {
  DecompositionReport r;
  std::uint64_t total = 0, inter = 0;
  std::map<NodeId, std::vector<Edge>> inside;
  for (const auto& e : graph) {
    total += e.mu;
    if (center[e.u] != center[e.v]) inter += e.mu;
    else inside[center[e.u]].emplace_back(e.u, e.v);
  }
  r.inter_fraction = total == 0 ? 0.0 : double(inter) / double(total);
  std::map<NodeId, std::vector<NodeId>> members;
  for (NodeId u = 0; u < n; ++u) members[center[u]].push_back(u);
  for (const auto& [c, nodes] : members) {
    if (c >= n || center[c] != c) {
      r.max_radius = kUnreachable;
      continue;
    }
    const auto d = bfs_hops(n, inside[c], c);
    for (NodeId u : nodes) r.max_radius = std::max(r.max_radius, d[u]);
  }
  r.ok = r.max_radius != kUnreachable && double(r.max_radius) <= delta_bound;
  return r;
}

}  // namespace dynlsf::oracle
