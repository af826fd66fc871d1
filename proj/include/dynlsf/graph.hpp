#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dynlsf/error.hpp"

namespace dynlsf {

using NodeId = std::uint32_t;

/// Parent value of a node hanging directly below the virtual source.
inline constexpr NodeId kRoot = std::numeric_limits<NodeId>::max();

/// Undirected pair stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t(e.u) << 32) | e.v);
  }
};

struct SkeletonEdge {
  NodeId u = 0;
  NodeId v = 0;
  std::uint32_t mu = 0;

  friend bool operator==(const SkeletonEdge&, const SkeletonEdge&) = default;
};

using Skeleton = std::vector<SkeletonEdge>;

struct UpdateEvent {
  enum class Kind { Insert, Delete };
  Kind kind = Kind::Insert;
  NodeId u = 0;
  NodeId v = 0;

  static UpdateEvent insert(NodeId a, NodeId b) { return {Kind::Insert, a, b}; }
  static UpdateEvent erase(NodeId a, NodeId b) { return {Kind::Delete, a, b}; }

  friend bool operator==(const UpdateEvent&, const UpdateEvent&) = default;
};

struct ChangeSummary {
  enum class Structural { SkeletonEdgeAdded, SkeletonEdgeRemoved, MultiplicityOnly };
  Structural structural = Structural::MultiplicityOnly;
  std::uint32_t new_multiplicity = 0;

  bool skeleton_changed() const { return structural != Structural::MultiplicityOnly; }
};

/// Unweighted undirected multigraph on a fixed node set, stored as its skeleton:
/// per-node neighbor maps carrying the multiplicity of each distinct pair.
class DynamicMultigraph {
 public:
  using Adjacency = std::unordered_map<NodeId, std::uint32_t>;

  DynamicMultigraph() = default;
  explicit DynamicMultigraph(NodeId n) : adj_(n) {}

  static DynamicMultigraph from_skeleton(NodeId n, std::span<const SkeletonEdge> edges) {
    DynamicMultigraph g(n);
    for (const auto& e : edges) {
      g.check_pair(e.u, e.v);
      for (std::uint32_t i = 0; i < e.mu; ++i) g.apply_update(UpdateEvent::insert(e.u, e.v));
    }
    return g;
  }

  NodeId node_count() const { return static_cast<NodeId>(adj_.size()); }
  std::uint64_t multi_edge_count() const { return m_; }
  std::uint64_t skeleton_edge_count() const { return m_bar_; }

  ChangeSummary apply_update(const UpdateEvent& ev) {
    check_pair(ev.u, ev.v);
    auto& fwd = adj_[ev.u];
    if (ev.kind == UpdateEvent::Kind::Insert) {
      auto [it, fresh] = fwd.try_emplace(ev.v, 0);
      ++it->second;
      ++adj_[ev.v][ev.u];
      ++m_;
      if (fresh) {
        ++m_bar_;
        return {ChangeSummary::Structural::SkeletonEdgeAdded, 1};
      }
      return {ChangeSummary::Structural::MultiplicityOnly, it->second};
    }
    auto it = fwd.find(ev.v);
    if (it == fwd.end())
      throw Error(ErrorCode::DeleteAbsentEdge,
                  "no edge (" + std::to_string(ev.u) + "," + std::to_string(ev.v) + ")");
    --m_;
    if (--it->second == 0) {
      fwd.erase(it);
      adj_[ev.v].erase(ev.u);
      --m_bar_;
      return {ChangeSummary::Structural::SkeletonEdgeRemoved, 0};
    }
    --adj_[ev.v][ev.u];
    return {ChangeSummary::Structural::MultiplicityOnly, it->second};
  }

  std::uint32_t multiplicity(NodeId u, NodeId v) const {
    if (u >= node_count() || v >= node_count()) return 0;
    auto it = adj_[u].find(v);
    return it == adj_[u].end() ? 0 : it->second;
  }

  bool has_edge(NodeId u, NodeId v) const { return multiplicity(u, v) > 0; }

  const Adjacency& neighbors(NodeId u) const { return adj_[u]; }

  std::size_t degree(NodeId u) const { return adj_[u].size(); }

  /// Distinct pairs with multiplicities, lexicographic on (min, max).
  Skeleton snapshot_skeleton() const {
    Skeleton out;
    out.reserve(m_bar_);
    for (NodeId u = 0; u < node_count(); ++u)
      for (const auto& [v, mu] : adj_[u])
        if (u < v) out.push_back({u, v, mu});
    std::sort(out.begin(), out.end(), [](const SkeletonEdge& a, const SkeletonEdge& b) {
      return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    return out;
  }

  friend bool operator==(const DynamicMultigraph& a, const DynamicMultigraph& b) {
    return a.node_count() == b.node_count() && a.m_ == b.m_ && a.m_bar_ == b.m_bar_ &&
           a.adj_ == b.adj_;
  }

 private:
  void check_pair(NodeId u, NodeId v) const {
    if (u >= node_count() || v >= node_count())
      throw Error(ErrorCode::InvalidNode, "endpoint out of range: (" + std::to_string(u) + "," +
                                              std::to_string(v) + ")");
    if (u == v) throw Error(ErrorCode::InvalidNode, "self-loop at " + std::to_string(u));
  }

  std::vector<Adjacency> adj_;
  std::uint64_t m_ = 0;
  std::uint64_t m_bar_ = 0;
};

/// Plain adjacency lists of a skeleton (multiplicities dropped), neighbors sorted.
inline std::vector<std::vector<NodeId>> adjacency_lists(NodeId n, std::span<const SkeletonEdge> edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

inline std::uint64_t total_multiplicity(std::span<const SkeletonEdge> edges) {
  std::uint64_t m = 0;
  for (const auto& e : edges) m += e.mu;
  return m;
}

}  // namespace dynlsf
