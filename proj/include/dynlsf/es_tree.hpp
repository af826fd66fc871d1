#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dynlsf/error.hpp"
#include "dynlsf/graph.hpp"
#include "dynlsf/shift_clustering.hpp"

namespace dynlsf {

/// Structural change of a clustering caused by one update.
struct ClusterDelta {
  struct Recenter {
    NodeId node, old_center, new_center;
    friend bool operator==(const Recenter&, const Recenter&) = default;
  };
  struct LevelChange {
    NodeId node;
    std::int64_t old_level, new_level;
    friend bool operator==(const LevelChange&, const LevelChange&) = default;
  };
  struct Reparent {
    NodeId node, old_parent, new_parent;
    friend bool operator==(const Reparent&, const Reparent&) = default;
  };

  std::vector<Recenter> recentered;
  std::vector<LevelChange> level_changes;
  std::vector<Reparent> reparented;
  std::vector<Edge> edges_became_inter;
  std::vector<Edge> edges_became_intra;
  // Filled by the fully dynamic layer only.
  std::vector<Edge> lazy_added;
  std::vector<Edge> lazy_removed;
  bool restarted = false;

  bool empty() const {
    return recentered.empty() && level_changes.empty() && reparented.empty() &&
           edges_became_inter.empty() && edges_became_intra.empty() && lazy_added.empty() &&
           lazy_removed.empty() && !restarted;
  }

  std::size_t edge_transitions() const { return edges_became_inter.size() + edges_became_intra.size(); }
};

struct EsTreeStats {
  std::uint64_t deletions = 0;
  std::uint64_t pops = 0;
  std::uint64_t moves = 0;  // pops that changed (level, center)
  std::uint64_t center_changes = 0;
  std::uint64_t inter_transitions = 0;  // edges turning inter-cluster
};

/// Even-Shiloach tree over the source graph G' that keeps the tie-broken
/// shortest-path clustering under edge deletions. Nodes hold a level, a
/// parent, a center and the set P of neighbors realizing their lexicographic
/// (level + weight, center rank) minimum; a node is repaired when P empties.
///
/// The tree owns its adjacency. Parallel edges are not represented: callers
/// forward only the deletion of the last copy of a pair.
class EsTree {
 public:
  /// (node, old level, old center, new level, new center) for every repair step.
  using MoveObserver = std::function<void(NodeId, std::int64_t, NodeId, std::int64_t, NodeId)>;

  EsTree() = default;

  EsTree(NodeId n, std::span<const SkeletonEdge> skeleton, ShiftAssignment shifts)
      : n_(n), shifts_(std::move(shifts)) {
    if (shifts_.size() != n) throw Error(ErrorCode::InvalidParameters, "shift vector size mismatch");
    const Clustering init = static_partition(n, skeleton, shifts_);
    offset_ = shifts_.max_floor();
    adj_.assign(n, {});
    for (const auto& e : skeleton) {
      adj_[e.u].insert(e.v);
      adj_[e.v].insert(e.u);
    }
    level_ = init.level;
    center_ = init.center;
    parent_ = init.parent;
    in_queue_.assign(n, false);
    potential_.assign(n, {});
    for (NodeId u = 0; u < n; ++u) {
      auto [key, pset] = scan_parents(u);
      potential_[u] = std::move(pset);
      if (key.dist != level_[u] || key.via != parent_[u])
        throw Error(ErrorCode::Internal, "initial potential parents disagree with the partition");
    }
  }

  NodeId node_count() const { return n_; }
  std::int64_t offset() const { return offset_; }
  const ShiftAssignment& shifts() const { return shifts_; }

  std::int64_t level(NodeId u) const { return level_[u]; }
  NodeId center(NodeId u) const { return center_[u]; }
  NodeId parent(NodeId u) const { return parent_[u]; }
  const std::unordered_set<NodeId>& potential_parents(NodeId u) const { return potential_[u]; }
  /// P(u) without the source, sorted.
  std::vector<NodeId> neighbor_parents(NodeId u) const {
    std::vector<NodeId> out;
    for (NodeId z : potential_[u])
      if (z != kRoot) out.push_back(z);
    std::sort(out.begin(), out.end());
    return out;
  }
  const std::unordered_set<NodeId>& neighbors(NodeId u) const { return adj_[u]; }
  bool has_edge(NodeId u, NodeId v) const { return u < n_ && v < n_ && adj_[u].count(v) > 0; }
  const std::vector<NodeId>& centers() const { return center_; }
  const std::vector<std::int64_t>& levels() const { return level_; }
  const std::vector<NodeId>& parents() const { return parent_; }

  const EsTreeStats& stats() const { return stats_; }
  void set_move_observer(MoveObserver obs) { observer_ = std::move(obs); }

  bool repair_pending() const { return !queue_.empty(); }

  Clustering current_clustering() const {
    if (repair_pending()) throw Error(ErrorCode::RepairInProgress, "heap not drained");
    return Clustering{center_, level_, parent_};
  }

  Skeleton skeleton() const {
    Skeleton out;
    for (NodeId u = 0; u < n_; ++u)
      for (NodeId v : adj_[u])
        if (u < v) out.push_back({u, v, 1});
    std::sort(out.begin(), out.end(),
              [](const SkeletonEdge& a, const SkeletonEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    return out;
  }

  ClusterDelta delete_edge(NodeId u, NodeId v) {
    if (!has_edge(u, v))
      throw Error(ErrorCode::EdgeAbsent,
                  "(" + std::to_string(u) + "," + std::to_string(v) + ") not in the tree's graph");
    ++stats_.deletions;
    touched_.clear();
    adj_[u].erase(v);
    adj_[v].erase(u);
    drop_potential_parent(u, v);
    drop_potential_parent(v, u);
    update_levels();
    return collect_delta();
  }

 private:
  struct Snapshot {
    std::int64_t level;
    NodeId center;
    NodeId parent;
  };

  ParentKey key_via(NodeId u, NodeId z) const {
    if (z == kRoot) return ParentKey{offset_ - shifts_.floors[u], shifts_.pi.rank[u], kRoot};
    return ParentKey{level_[z] + 1, shifts_.pi.rank[center_[z]], z};
  }

  std::pair<ParentKey, std::unordered_set<NodeId>> scan_parents(NodeId u) const {
    ParentKey best = key_via(u, kRoot);
    std::unordered_set<NodeId> pset{kRoot};
    for (NodeId z : adj_[u]) {
      const ParentKey k = key_via(u, z);
      if (k.same_class(best)) {
        pset.insert(z);
        if (k < best) best = k;
      } else if (k < best) {
        best = k;
        pset.clear();
        pset.insert(z);
      }
    }
    return {best, std::move(pset)};
  }

  static NodeId min_member(const std::unordered_set<NodeId>& s) {
    NodeId m = kRoot;
    for (NodeId x : s) m = std::min(m, x);
    return m;
  }

  void remember(NodeId u) { touched_.try_emplace(u, Snapshot{level_[u], center_[u], parent_[u]}); }

  /// Removes z from P(x); either enqueues x or moves its parent pointer.
  void drop_potential_parent(NodeId x, NodeId z) {
    auto& pset = potential_[x];
    if (pset.erase(z) == 0) return;
    if (pset.empty()) {
      if (!in_queue_[x]) {
        in_queue_[x] = true;
        queue_.emplace(level_[x], x);
      }
    } else if (parent_[x] == z) {
      remember(x);
      parent_[x] = min_member(pset);
    }
  }

  void update_levels() {
    while (!queue_.empty()) {
      const NodeId y = queue_.top().second;
      queue_.pop();
      in_queue_[y] = false;
      ++stats_.pops;
      remember(y);
      const std::int64_t old_level = level_[y];
      const NodeId old_center = center_[y];

      auto [key, pset] = scan_parents(y);
      potential_[y] = std::move(pset);
      parent_[y] = key.via;
      level_[y] = key.dist;
      center_[y] = key.via == kRoot ? y : center_[key.via];
      if (level_[y] > offset_) throw Error(ErrorCode::Internal, "level exceeds the source-edge bound");

      if (level_[y] == old_level && center_[y] == old_center) continue;
      ++stats_.moves;
      if (center_[y] != old_center) ++stats_.center_changes;
      if (observer_) observer_(y, old_level, old_center, level_[y], center_[y]);
      for (NodeId x : adj_[y]) drop_potential_parent(x, y);
    }
  }

  ClusterDelta collect_delta() {
    ClusterDelta delta;
    std::vector<NodeId> nodes;
    nodes.reserve(touched_.size());
    for (const auto& [u, snap] : touched_) nodes.push_back(u);
    std::sort(nodes.begin(), nodes.end());

    auto old_center = [&](NodeId x) {
      auto it = touched_.find(x);
      return it == touched_.end() ? center_[x] : it->second.center;
    };
    std::vector<Edge> flipped;
    for (NodeId u : nodes) {
      const Snapshot& s = touched_.at(u);
      if (s.center != center_[u]) {
        delta.recentered.push_back({u, s.center, center_[u]});
        for (NodeId y : adj_[u]) flipped.emplace_back(u, y);
      }
      if (s.level != level_[u]) delta.level_changes.push_back({u, s.level, level_[u]});
      if (s.parent != parent_[u]) delta.reparented.push_back({u, s.parent, parent_[u]});
    }
    std::sort(flipped.begin(), flipped.end());
    flipped.erase(std::unique(flipped.begin(), flipped.end()), flipped.end());
    for (const Edge& e : flipped) {
      const bool was_inter = old_center(e.u) != old_center(e.v);
      const bool is_inter = center_[e.u] != center_[e.v];
      if (!was_inter && is_inter) delta.edges_became_inter.push_back(e);
      if (was_inter && !is_inter) delta.edges_became_intra.push_back(e);
    }
    stats_.inter_transitions += delta.edges_became_inter.size();
    touched_.clear();
    return delta;
  }

  NodeId n_ = 0;
  ShiftAssignment shifts_;
  std::int64_t offset_ = 0;
  std::vector<std::unordered_set<NodeId>> adj_;
  std::vector<std::int64_t> level_;
  std::vector<NodeId> center_;
  std::vector<NodeId> parent_;
  std::vector<std::unordered_set<NodeId>> potential_;
  std::vector<bool> in_queue_;
  std::priority_queue<std::pair<std::int64_t, NodeId>, std::vector<std::pair<std::int64_t, NodeId>>,
                      std::greater<>>
      queue_;
  std::unordered_map<NodeId, Snapshot> touched_;
  EsTreeStats stats_;
  MoveObserver observer_;
};

}  // namespace dynlsf
