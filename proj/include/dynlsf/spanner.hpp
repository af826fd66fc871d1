#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynlsf/error.hpp"
#include "dynlsf/es_tree.hpp"
#include "dynlsf/graph.hpp"
#include "dynlsf/random.hpp"
#include "dynlsf/shift_clustering.hpp"

namespace dynlsf {

/// Which neighbors x contributes.
///  AllQualifying: every y with floor m(y) = floor m(x) - 1, or equal floors
///    and c(y) ranked before c(x).
///  OnePerCluster: among those y, only the smallest id per cluster c(y).
enum class SpannerRule { AllQualifying, OnePerCluster };

struct SpannerDelta {
  std::vector<Edge> added;
  std::vector<Edge> removed;
  bool empty() const { return added.empty() && removed.empty(); }
};

inline double spanner_beta(NodeId n, int k, double c) { return std::log(c * double(std::max<NodeId>(n, 1))) / k; }

/// Spanner from shifted shortest paths over the ES-tree of G'; decremental.
class SpannerState {
 public:
  SpannerState() = default;

  /// Uses the given shifts (every shift must be below k).
  SpannerState(NodeId n, std::span<const SkeletonEdge> skeleton, int k, double c, ShiftAssignment shifts,
               SpannerRule rule = SpannerRule::OnePerCluster)
      : n_(n), k_(k), c_(c), rule_(rule) {
    check_params(k, c);
    if (shifts.max_shift() >= double(k)) throw Error(ErrorCode::InvalidParameters, "spanner shifts must be < k");
    es_ = EsTree(n, skeleton, std::move(shifts));
    contrib_.assign(n, {});
    for (NodeId x = 0; x < n; ++x) {
      contrib_[x] = compute_contrib(x);
      for (NodeId y : contrib_[x]) ++h_[Edge(x, y)];
    }
  }

  static void check_params(int k, double c) {
    if (k < 1) throw Error(ErrorCode::InvalidParameters, "k must be >= 1");
    if (!(c >= 3)) throw Error(ErrorCode::InvalidParameters, "c must be >= 3");
  }

  NodeId node_count() const { return n_; }
  int k() const { return k_; }
  double c() const { return c_; }
  SpannerRule rule() const { return rule_; }
  const EsTree& tree() const { return es_; }
  const ShiftAssignment& shifts() const { return es_.shifts(); }

  /// floor m(x) = level(x) - K.
  std::int64_t rounded_shifted_distance(NodeId x) const { return es_.level(x) - es_.offset(); }

  const std::unordered_set<NodeId>& contributed(NodeId x) const { return contrib_[x]; }
  bool in_spanner(const Edge& e) const { return h_.count(e) > 0; }
  std::size_t size() const { return h_.size(); }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(h_.size());
    for (const auto& [e, c] : h_) out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
  }

  Skeleton graph_skeleton() const { return es_.skeleton(); }
  bool has_edge(NodeId u, NodeId v) const { return es_.has_edge(u, v); }

  SpannerDelta decremental_delete(NodeId u, NodeId v) {
    if (!es_.has_edge(u, v))
      throw Error(ErrorCode::EdgeAbsent, "(" + std::to_string(u) + "," + std::to_string(v) + ") not in the graph");
    before_.clear();
    set_contrib(u, v, false);
    set_contrib(v, u, false);
    const ClusterDelta d = es_.delete_edge(u, v);

    std::set<NodeId> changed;
    for (const auto& r : d.recentered) changed.insert(r.node);
    for (const auto& l : d.level_changes) changed.insert(l.node);

    std::set<NodeId> rescan(changed.begin(), changed.end());
    if (rule_ == SpannerRule::OnePerCluster) {
      rescan.insert(u);
      rescan.insert(v);
      for (NodeId x : changed)
        for (NodeId y : es_.neighbors(x)) rescan.insert(y);
    }
    for (NodeId x : rescan) replace_contrib(x, compute_contrib(x));
    if (rule_ == SpannerRule::AllQualifying)
      for (NodeId x : changed)
        for (NodeId y : es_.neighbors(x)) set_contrib(y, x, qualifies(y, x));

    SpannerDelta delta;
    for (const auto& [e, was] : before_) {
      const bool now = h_.count(e) > 0;
      if (was && !now) delta.removed.push_back(e);
      if (!was && now) delta.added.push_back(e);
    }
    before_.clear();
    return delta;
  }

 private:
  bool qualifies(NodeId x, NodeId y) const {
    const auto mx = rounded_shifted_distance(x), my = rounded_shifted_distance(y);
    if (my == mx - 1) return true;
    const auto& rank = es_.shifts().pi.rank;
    return my == mx && rank[es_.center(y)] < rank[es_.center(x)];
  }

  std::unordered_set<NodeId> compute_contrib(NodeId x) const {
    std::unordered_set<NodeId> out;
    if (rule_ == SpannerRule::AllQualifying) {
      for (NodeId y : es_.neighbors(x))
        if (qualifies(x, y)) out.insert(y);
      return out;
    }
    std::unordered_map<NodeId, NodeId> pick;  // cluster -> smallest qualifying neighbor
    for (NodeId y : es_.neighbors(x)) {
      if (!qualifies(x, y)) continue;
      auto [it, fresh] = pick.try_emplace(es_.center(y), y);
      if (!fresh) it->second = std::min(it->second, y);
    }
    for (const auto& [cl, y] : pick) out.insert(y);
    return out;
  }

  void note(const Edge& e) { before_.try_emplace(e, h_.count(e) > 0); }

  void set_contrib(NodeId x, NodeId y, bool on) {
    auto& cx = contrib_[x];
    const bool has = cx.count(y) > 0;
    if (has == on) return;
    const Edge e(x, y);
    note(e);
    if (on) {
      cx.insert(y);
      ++h_[e];
    } else {
      cx.erase(y);
      if (--h_[e] == 0) h_.erase(e);
    }
  }

  void replace_contrib(NodeId x, const std::unordered_set<NodeId>& next) {
    std::vector<NodeId> drop;
    for (NodeId y : contrib_[x])
      if (!next.count(y)) drop.push_back(y);
    for (NodeId y : drop) set_contrib(x, y, false);
    for (NodeId y : next) set_contrib(x, y, true);
  }

  NodeId n_ = 0;
  int k_ = 1;
  double c_ = 3;
  SpannerRule rule_ = SpannerRule::OnePerCluster;
  EsTree es_;
  std::vector<std::unordered_set<NodeId>> contrib_;
  std::map<Edge, std::uint8_t> h_;  // number of endpoints contributing the edge
  std::map<Edge, bool> before_;
};

/// Samples Exp(ln(cn)/k) shifts resampled below k, then builds the spanner.
inline SpannerState static_spanner(NodeId n, std::span<const SkeletonEdge> skeleton, int k, double c, Rng& rng,
                                   SpannerRule rule = SpannerRule::OnePerCluster, int max_retries = 1000) {
  SpannerState::check_params(k, c);
  ShiftAssignment s = sample_shifts(n, spanner_beta(n, k, c), double(k), rng, max_retries);
  return SpannerState(n, skeleton, k, c, std::move(s), rule);
}

struct SpannerCheck {
  bool ok = true;
  double worst_stretch = 0;  // infinity when an edge's endpoints are disconnected in H
  std::optional<Edge> witness;
};

/// BFS in H from one endpoint of every graph edge.
inline SpannerCheck verify_spanner(NodeId n, std::span<const SkeletonEdge> graph, std::span<const Edge> h, int k) {
  SpannerCheck r;
  std::vector<std::vector<NodeId>> adj(n);
  for (const Edge& e : h) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::map<NodeId, std::vector<Edge>> by_source;
  for (const auto& e : graph) by_source[e.u].emplace_back(e.u, e.v);
  std::vector<std::int64_t> dist(n, -1);
  std::deque<NodeId> q;
  const double bound = 2.0 * k - 1.0;
  for (const auto& [s, edges] : by_source) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    q.assign(1, s);
    while (!q.empty()) {
      const NodeId x = q.front();
      q.pop_front();
      if (dist[x] >= std::int64_t(bound)) continue;
      for (NodeId y : adj[x])
        if (dist[y] < 0) dist[y] = dist[x] + 1, q.push_back(y);
    }
    for (const Edge& e : edges) {
      const NodeId t = e.u == s ? e.v : e.u;
      double st = dist[t] < 0 ? std::numeric_limits<double>::infinity() : double(dist[t]);
      if (dist[t] < 0) {
        // Not reached within the bound; measure the true value for the report.
        std::vector<std::int64_t> full(n, -1);
        full[s] = 0;
        std::deque<NodeId> fq{s};
        while (!fq.empty()) {
          const NodeId x = fq.front();
          fq.pop_front();
          for (NodeId y : adj[x])
            if (full[y] < 0) full[y] = full[x] + 1, fq.push_back(y);
        }
        if (full[t] >= 0) st = double(full[t]);
      }
      if (st > r.worst_stretch) r.worst_stretch = st;
      if (st > bound && r.ok) {
        r.ok = false;
        r.witness = e;
      }
    }
  }
  return r;
}

/// Fully dynamic spanner from the decremental one: buckets of capacity 2^j
/// merged like a binary counter and rebuilt with fresh randomness. Works on the
/// skeleton; parallel copies only adjust a multiplicity.
class BucketedSpanner {
 public:
  struct Bucket {
    int cls = 0;
    std::set<Edge> edges;
    SpannerState state;
  };

  BucketedSpanner(NodeId n, int k, double c, std::uint64_t seed, SpannerRule rule = SpannerRule::OnePerCluster)
      : n_(n), k_(k), c_(c), rule_(rule), graph_(n), rng_(derive_seed(seed, "buckets")) {
    SpannerState::check_params(k, c);
  }

  SpannerDelta fully_dynamic_update(const UpdateEvent& ev) {
    const ChangeSummary change = graph_.apply_update(ev);
    SpannerDelta delta;
    if (!change.skeleton_changed()) return delta;
    const Edge e(ev.u, ev.v);
    if (ev.kind == UpdateEvent::Kind::Delete) {
      const std::uint64_t id = location_.at(e);
      location_.erase(e);
      Bucket& b = buckets_.at(id);
      b.edges.erase(e);
      delta = b.state.decremental_delete(e.u, e.v);
      if (b.edges.empty()) buckets_.erase(id);
      return delta;
    }

    std::set<Edge> edges{e};
    std::vector<Edge> old_h;
    int cls = 0;
    for (;;) {
      auto it = std::find_if(buckets_.begin(), buckets_.end(), [&](const auto& kv) { return kv.second.cls == cls; });
      if (it == buckets_.end()) break;
      for (const Edge& x : it->second.state.edges()) old_h.push_back(x);
      edges.insert(it->second.edges.begin(), it->second.edges.end());
      buckets_.erase(it);
      ++cls;
      ++merges_;
    }
    Skeleton sk;
    for (const Edge& x : edges) sk.push_back({x.u, x.v, 1});
    Rng local(rng_.next());
    Bucket b{cls, std::move(edges), static_spanner(n_, sk, k_, c_, local, rule_)};
    const std::uint64_t id = next_id_++;
    for (const Edge& x : b.edges) location_[x] = id;
    const auto new_h = b.state.edges();
    buckets_.emplace(id, std::move(b));

    std::sort(old_h.begin(), old_h.end());
    std::set_difference(new_h.begin(), new_h.end(), old_h.begin(), old_h.end(), std::back_inserter(delta.added));
    std::set_difference(old_h.begin(), old_h.end(), new_h.begin(), new_h.end(), std::back_inserter(delta.removed));
    return delta;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (const auto& [id, b] : buckets_)
      for (const Edge& e : b.state.edges()) out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& [id, b] : buckets_) s += b.state.size();
    return s;
  }

  /// Edge counts per bucket, largest class first.
  std::vector<std::size_t> bucket_sizes() const {
    std::vector<std::pair<int, std::size_t>> v;
    for (const auto& [id, b] : buckets_) v.emplace_back(b.cls, b.edges.size());
    std::sort(v.rbegin(), v.rend());
    std::vector<std::size_t> out;
    for (const auto& [c, s] : v) out.push_back(s);
    return out;
  }

  const std::map<std::uint64_t, Bucket>& buckets() const { return buckets_; }
  std::optional<std::uint64_t> bucket_of(const Edge& e) const {
    auto it = location_.find(e);
    if (it == location_.end()) return std::nullopt;
    return it->second;
  }
  const DynamicMultigraph& graph() const { return graph_; }
  std::uint64_t merges() const { return merges_; }
  int k() const { return k_; }

 private:
  NodeId n_;
  int k_;
  double c_;
  SpannerRule rule_;
  DynamicMultigraph graph_;
  Rng rng_;
  std::map<std::uint64_t, Bucket> buckets_;
  std::unordered_map<Edge, std::uint64_t, EdgeHash> location_;
  std::uint64_t next_id_ = 0;
  std::uint64_t merges_ = 0;
};

}  // namespace dynlsf
