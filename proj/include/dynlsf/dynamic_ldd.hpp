#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dynlsf/error.hpp"
#include "dynlsf/es_tree.hpp"
#include "dynlsf/graph.hpp"
#include "dynlsf/random.hpp"
#include "dynlsf/shift_clustering.hpp"

namespace dynlsf {

/// Fully dynamic low-diameter decomposition. Runs the decremental tree with
/// parameter beta/3 in phases: deletions go to the tree, insertions are parked
/// in a lazy multiset and always count as inter-cluster, and after
/// ceil(beta * m_i / 3) updates (at least one) the tree is rebuilt from scratch
/// on the current graph with fresh shifts and a fresh permutation.
class DynLdd {
 public:
  DynLdd(NodeId n, double beta, std::uint64_t seed, int d = 1, int max_retries = 1000)
      : n_(n), beta_(beta), d_(d), max_retries_(max_retries), graph_(n),
        rng_(derive_seed(seed, "phase-restarts")) {
    if (!(beta > 0.0 && beta < 1.0))
      throw Error(ErrorCode::InvalidBeta, "beta must lie in (0,1), got " + std::to_string(beta));
    if (d < 1) throw Error(ErrorCode::InvalidParameters, "d must be >= 1");
    rebuild();
  }

  ClusterDelta process_update(const UpdateEvent& ev) {
    const Edge e(ev.u, ev.v);
    const bool ends_phase = updates_in_phase_ + 1 >= threshold_;
    Snapshot before;
    if (ends_phase) before = snapshot();

    const ChangeSummary change = graph_.apply_update(ev);
    ClusterDelta delta;
    if (ev.kind == UpdateEvent::Kind::Insert) {
      ++lazy_[e];
      delta.lazy_added.push_back(e);
    } else if (auto it = lazy_.find(e); it != lazy_.end()) {
      if (--it->second == 0) lazy_.erase(it);
      delta.lazy_removed.push_back(e);
    } else if (change.structural == ChangeSummary::Structural::SkeletonEdgeRemoved) {
      delta = tree_.delete_edge(e.u, e.v);
    }

    ++updates_in_phase_;
    ++total_updates_;
    if (ends_phase) {
      completed_thresholds_.push_back(threshold_);
      rebuild();
      ++restarts_;
      ClusterDelta restart = diff_against(before);
      restart.lazy_added = std::move(delta.lazy_added);
      restart.lazy_removed = std::move(delta.lazy_removed);
      return restart;
    }
    return delta;
  }

  /// Inter-cluster multi-edges: tree edges with differing centers scaled by
  /// their non-lazy multiplicity, plus every lazy copy.
  std::map<Edge, std::uint32_t> inter_cluster_edges() const {
    std::map<Edge, std::uint32_t> out;
    for (NodeId u = 0; u < n_; ++u)
      for (const auto& [v, mu] : graph_.neighbors(u)) {
        if (v < u) continue;
        const Edge e(u, v);
        const std::uint32_t lazy = lazy_count(e);
        const std::uint32_t count = (tree_.center(u) != tree_.center(v) ? mu - lazy : 0) + lazy;
        if (count > 0) out[e] = count;
      }
    return out;
  }

  std::uint64_t inter_cluster_multi_edges() const {
    std::uint64_t total = 0;
    for (const auto& [e, c] : inter_cluster_edges()) total += c;
    return total;
  }

  double inter_cluster_fraction() const {
    const auto m = graph_.multi_edge_count();
    return m == 0 ? 0.0 : double(inter_cluster_multi_edges()) / double(m);
  }

  /// Pairs seen by the decremental tree (multiplicity = non-lazy copies).
  Skeleton inner_skeleton() const {
    Skeleton out;
    for (const auto& e : graph_.snapshot_skeleton()) {
      const std::uint32_t lazy = lazy_count(Edge(e.u, e.v));
      if (e.mu > lazy) out.push_back({e.u, e.v, e.mu - lazy});
    }
    return out;
  }

  /// Strong-radius bound 3 * (2 d ln n / (beta/3)).
  double radius_bound() const { return 3.0 * 2.0 * ldd_shift_cap(n_, inner_beta(), d_); }

  NodeId node_count() const { return n_; }
  double beta() const { return beta_; }
  double inner_beta() const { return beta_ / 3.0; }
  int d() const { return d_; }
  const DynamicMultigraph& graph() const { return graph_; }
  const EsTree& tree() const { return tree_; }
  NodeId center(NodeId u) const { return tree_.center(u); }
  NodeId parent(NodeId u) const { return tree_.parent(u); }
  const std::vector<NodeId>& centers() const { return tree_.centers(); }
  const std::map<Edge, std::uint32_t>& lazy_edges() const { return lazy_; }
  std::uint32_t lazy_count(const Edge& e) const {
    auto it = lazy_.find(e);
    return it == lazy_.end() ? 0 : it->second;
  }

  std::uint64_t phase_start_edges() const { return phase_start_edges_; }
  std::uint64_t updates_in_phase() const { return updates_in_phase_; }
  std::uint64_t phase_threshold() const { return threshold_; }
  std::uint64_t restarts() const { return restarts_; }
  std::uint64_t total_updates() const { return total_updates_; }
  const std::vector<std::uint64_t>& completed_thresholds() const { return completed_thresholds_; }

  /// Tree statistics summed over all phases.
  EsTreeStats cumulative_stats() const {
    EsTreeStats s = past_stats_;
    const auto& t = tree_.stats();
    s.deletions += t.deletions;
    s.pops += t.pops;
    s.moves += t.moves;
    s.center_changes += t.center_changes;
    s.inter_transitions += t.inter_transitions;
    return s;
  }

 private:
  struct Snapshot {
    std::vector<NodeId> center;
    std::vector<std::int64_t> level;
    std::vector<NodeId> parent;
    std::map<Edge, std::uint32_t> lazy;
  };

  Snapshot snapshot() const { return {tree_.centers(), tree_.levels(), tree_.parents(), lazy_}; }

  void rebuild() {
    const auto& t = tree_.stats();
    past_stats_.deletions += t.deletions;
    past_stats_.pops += t.pops;
    past_stats_.moves += t.moves;
    past_stats_.center_changes += t.center_changes;
    past_stats_.inter_transitions += t.inter_transitions;

    const double cap = ldd_shift_cap(n_, inner_beta(), d_);
    ShiftAssignment shifts = sample_shifts(n_, inner_beta(), cap, rng_, max_retries_, d_);
    const Skeleton sk = graph_.snapshot_skeleton();
    tree_ = EsTree(n_, sk, std::move(shifts));
    lazy_.clear();
    phase_start_edges_ = graph_.multi_edge_count();
    threshold_ = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::ceil(beta_ * double(phase_start_edges_) / 3.0)));
    updates_in_phase_ = 0;
  }

  ClusterDelta diff_against(const Snapshot& before) const {
    ClusterDelta delta;
    delta.restarted = true;
    for (NodeId u = 0; u < n_; ++u) {
      if (before.center[u] != tree_.center(u)) delta.recentered.push_back({u, before.center[u], tree_.center(u)});
      if (before.level[u] != tree_.level(u)) delta.level_changes.push_back({u, before.level[u], tree_.level(u)});
      if (before.parent[u] != tree_.parent(u)) delta.reparented.push_back({u, before.parent[u], tree_.parent(u)});
    }
    for (const auto& e : graph_.snapshot_skeleton()) {
      const Edge pair(e.u, e.v);
      const bool was_inter = before.lazy.count(pair) > 0 || before.center[e.u] != before.center[e.v];
      const bool is_inter = tree_.center(e.u) != tree_.center(e.v);
      if (!was_inter && is_inter) delta.edges_became_inter.push_back(pair);
      if (was_inter && !is_inter) delta.edges_became_intra.push_back(pair);
    }
    return delta;
  }

  NodeId n_;
  double beta_;
  int d_;
  int max_retries_;
  DynamicMultigraph graph_;
  Rng rng_;
  EsTree tree_;
  std::map<Edge, std::uint32_t> lazy_;
  std::uint64_t phase_start_edges_ = 0;
  std::uint64_t updates_in_phase_ = 0;
  std::uint64_t threshold_ = 1;
  std::uint64_t restarts_ = 0;
  std::uint64_t total_updates_ = 0;
  std::vector<std::uint64_t> completed_thresholds_;
  EsTreeStats past_stats_;
};

}  // namespace dynlsf
