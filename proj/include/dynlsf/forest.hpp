#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "dynlsf/error.hpp"
#include "dynlsf/graph.hpp"

namespace dynlsf {

/// Tree distances in a forest via rooted BFS and binary-lifting LCA.
class TreeDistance {
 public:
  TreeDistance(NodeId n, std::span<const Edge> forest) : n_(n), comp_(n, kRoot), depth_(n, 0) {
    std::vector<std::vector<NodeId>> adj(n);
    for (const Edge& e : forest) {
      if (e.u >= n || e.v >= n) throw Error(ErrorCode::InvalidNode, "forest edge out of range");
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    log_ = 1;
    while ((NodeId{1} << log_) < std::max<NodeId>(n, 2)) ++log_;
    up_.assign(log_, std::vector<NodeId>(n, 0));
    std::deque<NodeId> q;
    for (NodeId r = 0; r < n; ++r) {
      if (comp_[r] != kRoot) continue;
      comp_[r] = r;
      up_[0][r] = r;
      q.push_back(r);
      while (!q.empty()) {
        const NodeId x = q.front();
        q.pop_front();
        for (NodeId y : adj[x]) {
          if (comp_[y] != kRoot) {
            if (y != up_[0][x]) acyclic_ = false;
            continue;
          }
          comp_[y] = r;
          depth_[y] = depth_[x] + 1;
          up_[0][y] = x;
          q.push_back(y);
        }
      }
    }
    for (int j = 1; j < log_; ++j)
      for (NodeId u = 0; u < n; ++u) up_[j][u] = up_[j - 1][up_[j - 1][u]];
  }

  /// False when a non-tree edge was met (the input was not a forest).
  bool acyclic() const { return acyclic_; }
  bool connected(NodeId u, NodeId v) const { return comp_[u] == comp_[v]; }
  NodeId component(NodeId u) const { return comp_[u]; }

  std::optional<std::uint64_t> distance(NodeId u, NodeId v) const {
    if (!connected(u, v)) return std::nullopt;
    const NodeId a = lca(u, v);
    return std::uint64_t(depth_[u] + depth_[v] - 2 * depth_[a]);
  }

 private:
  NodeId lca(NodeId u, NodeId v) const {
    if (depth_[u] < depth_[v]) std::swap(u, v);
    std::uint32_t diff = depth_[u] - depth_[v];
    for (int j = 0; diff; ++j, diff >>= 1)
      if (diff & 1) u = up_[j][u];
    if (u == v) return u;
    for (int j = log_ - 1; j >= 0; --j)
      if (up_[j][u] != up_[j][v]) u = up_[j][u], v = up_[j][v];
    return up_[0][u];
  }

  NodeId n_;
  int log_ = 1;
  bool acyclic_ = true;
  std::vector<NodeId> comp_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::vector<NodeId>> up_;
};

/// Spanning forest by BFS: roots in increasing id order, neighbors in sorted order.
inline std::vector<Edge> bfs_spanning_forest(NodeId n, std::span<const SkeletonEdge> skeleton) {
  const auto adj = adjacency_lists(n, skeleton);
  std::vector<bool> seen(n, false);
  std::vector<Edge> out;
  std::deque<NodeId> q;
  for (NodeId r = 0; r < n; ++r) {
    if (seen[r]) continue;
    seen[r] = true;
    q.push_back(r);
    while (!q.empty()) {
      const NodeId x = q.front();
      q.pop_front();
      for (NodeId y : adj[x]) {
        if (seen[y]) continue;
        seen[y] = true;
        out.emplace_back(x, y);
        q.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// sum over skeleton edges of mu(e) * dist_T(u, v); throws NotSpanning.
inline std::uint64_t total_stretch(NodeId n, std::span<const SkeletonEdge> graph, std::span<const Edge> forest) {
  const TreeDistance td(n, forest);
  std::uint64_t total = 0;
  for (const auto& e : graph) {
    const auto d = td.distance(e.u, e.v);
    if (!d) throw Error(ErrorCode::NotSpanning, "forest does not connect (" + std::to_string(e.u) + "," +
                                                    std::to_string(e.v) + ")");
    total += std::uint64_t(e.mu) * *d;
  }
  return total;
}

}  // namespace dynlsf
