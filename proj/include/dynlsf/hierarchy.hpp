#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "dynlsf/dynamic_ldd.hpp"
#include "dynlsf/error.hpp"
#include "dynlsf/forest.hpp"
#include "dynlsf/graph.hpp"
#include "dynlsf/random.hpp"
#include "dynlsf/shift_clustering.hpp"

namespace dynlsf {

enum class TopMode { StaticRecompute, DynamicForest };

struct HierarchyConfig {
  int k = 1;
  std::vector<double> betas;  // one per level 0..k-1
  TopMode top_mode = TopMode::StaticRecompute;
  std::uint64_t seed = 0;
  int d = 1;
  double top_beta = 0.5;  // shift parameter of the static top recursion

  /// k = ceil(sqrt(log2 n)), beta = m_hat^(-1/(2k+1)) on every level.
  static HierarchyConfig regime_a(NodeId n, std::uint64_t m_hat, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::InvalidParameters, "regime a needs n >= 2");
    if (m_hat < 2) throw Error(ErrorCode::InvalidParameters, "regime a needs m_hat >= 2");
    HierarchyConfig c;
    c.k = std::max(1, int(std::ceil(std::sqrt(std::log2(double(n))))));
    const double beta = std::pow(double(m_hat), -1.0 / double(2 * c.k + 1));
    c.betas.assign(c.k, beta);
    c.top_mode = TopMode::StaticRecompute;
    c.top_beta = beta;
    c.seed = seed;
    return c;
  }

  /// k = ceil(log2 log2 n), beta_0 = sqrt(t/n), beta_i = sqrt(beta_{i-1}).
  static HierarchyConfig regime_b(NodeId n, double t, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::InvalidParameters, "regime b needs n >= 2");
    if (!(t > 0) || !(t < double(n))) throw Error(ErrorCode::InvalidParameters, "regime b needs 0 < t < n");
    HierarchyConfig c;
    c.k = std::max(1, int(std::ceil(std::log2(std::log2(double(n))))));
    c.betas.resize(c.k);
    c.betas[0] = std::sqrt(t / double(n));
    for (int i = 1; i < c.k; ++i) c.betas[i] = std::sqrt(c.betas[i - 1]);
    c.top_mode = TopMode::DynamicForest;
    c.seed = seed;
    return c;
  }

  void validate() const {
    if (k < 1) throw Error(ErrorCode::InvalidParameters, "k must be >= 1");
    if (betas.size() != std::size_t(k)) throw Error(ErrorCode::InvalidParameters, "need exactly k betas");
    for (double b : betas)
      if (!(b > 0 && b < 1)) throw Error(ErrorCode::InvalidParameters, "every beta must lie in (0,1)");
    if (!(top_beta > 0)) throw Error(ErrorCode::InvalidParameters, "top_beta must be positive");
    if (d < 1) throw Error(ErrorCode::InvalidParameters, "d must be >= 1");
  }
};

/// pair of G_i -> multiset of original edges contracted onto it.
using Provenance = std::map<Edge, std::map<Edge, std::uint32_t>>;

/// Forest of original edges, each tagged with the level that contributed it
/// (0..k-1 for cluster trees, k for the top forest).
struct Forest {
  std::map<Edge, int> edges;

  std::vector<Edge> edge_list() const {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const auto& [e, lvl] : edges) out.push_back(e);
    return out;
  }
  std::size_t size() const { return edges.size(); }
  friend bool operator==(const Forest&, const Forest&) = default;
};

struct ForestDelta {
  std::vector<Edge> added;
  std::vector<Edge> removed;
  std::vector<std::uint64_t> fed;  // events entering level i, i = 0..k
  bool top_recomputed = false;

  std::uint64_t propagation_count() const {
    std::uint64_t s = 0;
    for (std::size_t i = 1; i < fed.size(); ++i) s += fed[i];
    return s;
  }
};

struct StretchReport {
  std::uint64_t total = 0;
  double average = 0;
  std::uint64_t edges = 0;  // multi-edge count of G
  std::map<int, std::uint64_t> per_level;
};

struct TopForest {
  std::vector<Edge> edges;
  std::uint64_t total_stretch = 0;
};

inline Edge min_original(const Provenance& prov, const Edge& pair) {
  auto it = prov.find(pair);
  if (it == prov.end() || it->second.empty())
    throw Error(ErrorCode::Internal, "no original edge behind a contracted pair");
  return it->second.begin()->first;
}

/// Spanning forest of a multigraph by a recursive static decomposition: cluster,
/// keep the cluster trees, contract, repeat until the graph is edgeless. Runs on
/// the skeleton only; the stretch certificate is weighted by multiplicity.
inline TopForest static_top_forest(NodeId n, std::span<const SkeletonEdge> skeleton, double beta,
                                   std::uint64_t seed, int d = 1) {
  TopForest out;
  if (skeleton.empty()) return out;
  Rng rng(seed);
  // current pair -> representative pair of the input
  std::map<Edge, Edge> cur;
  for (const auto& e : skeleton) cur.emplace(Edge(e.u, e.v), Edge(e.u, e.v));
  std::vector<Edge> chosen;
  constexpr int kStallLimit = 64;
  int stalled = 0;
  const double cap = ldd_shift_cap(n, beta, d);
  while (!cur.empty()) {
    Skeleton sk;
    sk.reserve(cur.size());
    for (const auto& [p, rep] : cur) sk.push_back({p.u, p.v, 1});
    if (stalled >= kStallLimit) {
      for (const Edge& p : bfs_spanning_forest(n, sk)) chosen.push_back(cur.at(p));
      break;
    }
    const ShiftAssignment shifts = sample_shifts(n, beta, cap, rng, 1000, d);
    const Clustering c = static_partition(n, sk, shifts);
    for (NodeId x = 0; x < n; ++x)
      if (c.parent[x] != kRoot) chosen.push_back(cur.at(Edge(x, c.parent[x])));
    std::map<Edge, Edge> next;
    for (const auto& [p, rep] : cur) {
      const NodeId a = c.center[p.u], b = c.center[p.v];
      if (a == b) continue;
      auto [it, fresh] = next.try_emplace(Edge(a, b), rep);
      if (!fresh) it->second = std::min(it->second, rep);
    }
    stalled = next.size() == cur.size() ? stalled + 1 : 0;
    cur = std::move(next);
  }
  std::sort(chosen.begin(), chosen.end());
  out.edges = std::move(chosen);
  out.total_stretch = total_stretch(n, skeleton, out.edges);
  return out;
}

/// k-level hierarchy of contracted multigraphs G_0..G_k with a dynamic
/// decomposition on each of G_0..G_{k-1}, and the spanning forest assembled
/// from the per-level cluster trees plus a forest of G_k.
class LddHierarchy {
 public:
  struct LevelEvent {
    UpdateEvent::Kind kind;
    Edge pair;
    Edge original;
  };

  LddHierarchy(NodeId n, HierarchyConfig cfg) : n_(n), cfg_(std::move(cfg)), top_graph_(n) {
    cfg_.validate();
    levels_.reserve(cfg_.k);
    for (int i = 0; i < cfg_.k; ++i)
      levels_.emplace_back(n, cfg_.betas[i], derive_seed(cfg_.seed, "level", std::uint64_t(i)), cfg_.d);
    prov_.assign(cfg_.k + 1, {});
    fed_total_.assign(cfg_.k + 1, 0);
  }

  ForestDelta process_update(const UpdateEvent& ev) {
    ForestDelta delta;
    delta.fed.assign(cfg_.k + 1, 0);
    std::vector<LevelEvent> batch{{ev.kind, Edge(ev.u, ev.v), Edge(ev.u, ev.v)}};
    for (int i = 0; i < cfg_.k; ++i) {
      delta.fed[i] = batch.size();
      batch = feed(i, batch);
    }
    delta.fed[cfg_.k] = batch.size();
    if (!batch.empty()) {
      apply_top(batch);
      delta.top_recomputed = true;
    }
    for (int i = 0; i <= cfg_.k; ++i) fed_total_[i] += delta.fed[i];
    ++updates_;

    Forest next = assemble_forest();
    for (const auto& [e, lvl] : next.edges)
      if (!forest_.edges.count(e)) delta.added.push_back(e);
    for (const auto& [e, lvl] : forest_.edges)
      if (!next.edges.count(e)) delta.removed.push_back(e);
    forest_ = std::move(next);
    return delta;
  }

  const Forest& current_forest() const { return forest_; }

  NodeId node_count() const { return n_; }
  int k() const { return cfg_.k; }
  const HierarchyConfig& config() const { return cfg_; }
  const DynLdd& level(int i) const { return levels_.at(i); }
  const DynamicMultigraph& graph(int i) const { return i < cfg_.k ? levels_.at(i).graph() : top_graph_; }
  const Provenance& provenance(int i) const { return prov_.at(i); }
  const std::vector<Edge>& top_pairs() const { return top_pairs_; }
  std::uint64_t top_epoch() const { return top_epoch_; }
  const std::vector<std::uint64_t>& fed_total() const { return fed_total_; }
  std::uint64_t updates() const { return updates_; }

  std::uint64_t restarts() const {
    std::uint64_t r = 0;
    for (const auto& l : levels_) r += l.restarts();
    return r;
  }

  /// Largest i such that the edge still appears (contracted) in G_i.
  std::map<Edge, int> edge_levels() const {
    std::map<Edge, int> out;
    for (int i = 0; i <= cfg_.k; ++i)
      for (const auto& [pair, orig] : prov_[i])
        for (const auto& [e, c] : orig) out[e] = i;
    return out;
  }

  StretchReport measure_stretch(const Forest& forest) const {
    StretchReport r;
    const auto levels = edge_levels();
    const TreeDistance td(n_, forest.edge_list());
    for (const auto& e : levels_[0].graph().snapshot_skeleton()) {
      const auto d = td.distance(e.u, e.v);
      if (!d) throw Error(ErrorCode::NotSpanning, "forest does not connect (" + std::to_string(e.u) + "," +
                                                      std::to_string(e.v) + ")");
      const std::uint64_t s = std::uint64_t(e.mu) * *d;
      r.total += s;
      r.edges += e.mu;
      r.per_level[levels.at(Edge(e.u, e.v))] += s;
    }
    r.average = r.edges == 0 ? 0.0 : double(r.total) / double(r.edges);
    return r;
  }

  struct StaticAssembly {
    std::vector<Provenance> prov;
    Forest forest;
  };

  /// Recomputes every G_i and the forest from G_0, each level's current shifts,
  /// permutation and lazy set, and the top seed, sharing none of the
  /// incremental bookkeeping.
  StaticAssembly assemble_static() const {
    StaticAssembly a;
    a.prov.assign(cfg_.k + 1, {});
    for (const auto& e : levels_[0].graph().snapshot_skeleton()) a.prov[0][Edge(e.u, e.v)][Edge(e.u, e.v)] = e.mu;
    for (int i = 0; i < cfg_.k; ++i) {
      Skeleton inner;
      for (const auto& [p, orig] : a.prov[i]) {
        std::uint32_t mu = 0;
        for (const auto& [o, c] : orig) mu += c;
        const std::uint32_t lazy = levels_[i].lazy_count(p);
        if (mu > lazy) inner.push_back({p.u, p.v, mu - lazy});
      }
      const Clustering c = static_partition(n_, inner, levels_[i].tree().shifts());
      for (NodeId x = 0; x < n_; ++x)
        if (c.parent[x] != kRoot) a.forest.edges[min_original(a.prov[i], Edge(x, c.parent[x]))] = i;
      for (const auto& [p, orig] : a.prov[i]) {
        const NodeId cu = c.center[p.u], cv = c.center[p.v];
        if (cu == cv) continue;
        auto& dst = a.prov[i + 1][Edge(cu, cv)];
        for (const auto& [o, cnt] : orig) dst[o] += cnt;
      }
    }
    Skeleton top;
    for (const auto& [p, orig] : a.prov[cfg_.k]) {
      std::uint32_t mu = 0;
      for (const auto& [o, c] : orig) mu += c;
      top.push_back({p.u, p.v, mu});
    }
    for (const Edge& p : top_forest_of(top, top_epoch_ == 0 ? 0 : top_epoch_ - 1))
      a.forest.edges[min_original(a.prov[cfg_.k], p)] = cfg_.k;
    return a;
  }

  /// Strong-diameter cap of level j: twice the floor of its shift ceiling.
  double level_diameter_cap(int j) const {
    return 2.0 * std::floor(ldd_shift_cap(n_, levels_.at(j).inner_beta(), cfg_.d));
  }

  struct SameClusterReport {
    bool ok = true;
    std::uint64_t pairs_checked = 0;
    int level = -1;  // first violating level
    NodeId u = kRoot, v = kRoot;
  };

  /// Nodes contracted to one center in G_i are within prod_{j<i} 3 (Delta_j + 1)
  /// in the current forest; checked for every such pair.
  SameClusterReport check_same_cluster_bound() const {
    SameClusterReport r;
    const TreeDistance td(n_, forest_.edge_list());
    std::vector<NodeId> rep(n_);
    for (NodeId u = 0; u < n_; ++u) rep[u] = u;
    double bound = 1;
    for (int i = 1; i <= cfg_.k; ++i) {
      for (NodeId u = 0; u < n_; ++u) rep[u] = levels_[i - 1].center(rep[u]);
      bound *= 3.0 * (level_diameter_cap(i - 1) + 1.0);
      std::map<NodeId, std::vector<NodeId>> groups;
      for (NodeId u = 0; u < n_; ++u) groups[rep[u]].push_back(u);
      for (const auto& [c, nodes] : groups)
        for (std::size_t a = 0; a < nodes.size(); ++a)
          for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            ++r.pairs_checked;
            const auto d = td.distance(nodes[a], nodes[b]);
            if (!d || double(*d) > bound) {
              if (r.ok) r.level = i, r.u = nodes[a], r.v = nodes[b];
              r.ok = false;
            }
          }
    }
    return r;
  }

 private:
  static void apply_to(Provenance& prov, const LevelEvent& ev) {
    if (ev.kind == UpdateEvent::Kind::Insert) {
      ++prov[ev.pair][ev.original];
      return;
    }
    auto pit = prov.find(ev.pair);
    if (pit == prov.end()) throw Error(ErrorCode::Internal, "provenance missing for a deleted pair");
    auto oit = pit->second.find(ev.original);
    if (oit == pit->second.end()) throw Error(ErrorCode::Internal, "original edge missing from provenance");
    if (--oit->second == 0) pit->second.erase(oit);
    if (pit->second.empty()) prov.erase(pit);
  }

  /// Applies a batch to level i and returns the batch for level i+1:
  /// deletions of the old contracted copies first, then insertions.
  std::vector<LevelEvent> feed(int i, const std::vector<LevelEvent>& batch) {
    Provenance& prov = prov_[i];
    DynLdd& ldd = levels_[i];
    Provenance before;
    for (const auto& ev : batch)
      if (!before.count(ev.pair)) {
        auto it = prov.find(ev.pair);
        before[ev.pair] = it == prov.end() ? std::map<Edge, std::uint32_t>{} : it->second;
      }
    std::unordered_map<NodeId, NodeId> old_center;
    for (const auto& ev : batch) {
      const ClusterDelta d = ldd.process_update(UpdateEvent{ev.kind, ev.pair.u, ev.pair.v});
      apply_to(prov, ev);
      for (const auto& r : d.recentered) old_center.try_emplace(r.node, r.old_center);
    }

    std::set<Edge> affected;
    for (const auto& [p, m] : before) affected.insert(p);
    for (const auto& [x, c] : old_center)
      for (const auto& [y, mu] : ldd.graph().neighbors(x)) affected.insert(Edge(x, y));

    auto center_before = [&](NodeId x) {
      auto it = old_center.find(x);
      return it == old_center.end() ? ldd.center(x) : it->second;
    };
    static const std::map<Edge, std::uint32_t> kEmpty;

    std::vector<LevelEvent> dels, ins;
    for (const Edge& p : affected) {
      auto cur = prov.find(p);
      const auto& m_new = cur == prov.end() ? kEmpty : cur->second;
      auto bit = before.find(p);
      const auto& m_old = bit == before.end() ? m_new : bit->second;
      const NodeId ou = center_before(p.u), ov = center_before(p.v);
      const NodeId nu = ldd.center(p.u), nv = ldd.center(p.v);
      const std::optional<Edge> t_old = ou != ov ? std::optional<Edge>(Edge(ou, ov)) : std::nullopt;
      const std::optional<Edge> t_new = nu != nv ? std::optional<Edge>(Edge(nu, nv)) : std::nullopt;
      if (t_old && t_new && *t_old == *t_new) {
        std::set<Edge> keys;
        for (const auto& [o, c] : m_old) keys.insert(o);
        for (const auto& [o, c] : m_new) keys.insert(o);
        for (const Edge& o : keys) {
          const auto a = m_old.count(o) ? m_old.at(o) : 0u;
          const auto b = m_new.count(o) ? m_new.at(o) : 0u;
          for (std::uint32_t j = b; j < a; ++j) dels.push_back({UpdateEvent::Kind::Delete, *t_old, o});
          for (std::uint32_t j = a; j < b; ++j) ins.push_back({UpdateEvent::Kind::Insert, *t_new, o});
        }
        continue;
      }
      if (t_old)
        for (const auto& [o, c] : m_old)
          for (std::uint32_t j = 0; j < c; ++j) dels.push_back({UpdateEvent::Kind::Delete, *t_old, o});
      if (t_new)
        for (const auto& [o, c] : m_new)
          for (std::uint32_t j = 0; j < c; ++j) ins.push_back({UpdateEvent::Kind::Insert, *t_new, o});
    }
    dels.insert(dels.end(), ins.begin(), ins.end());
    return dels;
  }

  void apply_top(const std::vector<LevelEvent>& batch) {
    for (const auto& ev : batch) {
      top_graph_.apply_update(UpdateEvent{ev.kind, ev.pair.u, ev.pair.v});
      apply_to(prov_[cfg_.k], ev);
    }
    top_pairs_ = top_forest_of(top_graph_.snapshot_skeleton(), top_epoch_);
    ++top_epoch_;
  }

  std::vector<Edge> top_forest_of(const Skeleton& sk, std::uint64_t epoch) const {
    if (cfg_.top_mode == TopMode::DynamicForest) return bfs_spanning_forest(n_, sk);
    return static_top_forest(n_, sk, cfg_.top_beta, derive_seed(cfg_.seed, "top", epoch), cfg_.d).edges;
  }

  Forest assemble_forest() const {
    Forest f;
    for (int i = 0; i < cfg_.k; ++i)
      for (NodeId x = 0; x < n_; ++x) {
        const NodeId p = levels_[i].parent(x);
        if (p != kRoot) f.edges[min_original(prov_[i], Edge(x, p))] = i;
      }
    for (const Edge& p : top_pairs_) f.edges[min_original(prov_[cfg_.k], p)] = cfg_.k;
    return f;
  }

  NodeId n_;
  HierarchyConfig cfg_;
  std::vector<DynLdd> levels_;
  DynamicMultigraph top_graph_;
  std::vector<Provenance> prov_;
  std::vector<Edge> top_pairs_;
  std::uint64_t top_epoch_ = 0;
  Forest forest_;
  std::vector<std::uint64_t> fed_total_;
  std::uint64_t updates_ = 0;
};

}  // namespace dynlsf
