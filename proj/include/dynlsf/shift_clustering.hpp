#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "dynlsf/error.hpp"
#include "dynlsf/graph.hpp"
#include "dynlsf/random.hpp"

namespace dynlsf {

/// Tie-breaking order on nodes: rank[u] in [0, n), lower rank wins.
struct Permutation {
  std::vector<NodeId> rank;

  static Permutation identity(NodeId n) {
    Permutation p;
    p.rank.resize(n);
    std::iota(p.rank.begin(), p.rank.end(), NodeId{0});
    return p;
  }

  static Permutation uniform(NodeId n, Rng& rng) {
    Permutation p = identity(n);
    rng.shuffle(p.rank);
    return p;
  }

  bool is_bijection() const {
    std::vector<bool> seen(rank.size(), false);
    for (NodeId r : rank) {
      if (r >= rank.size() || seen[r]) return false;
      seen[r] = true;
    }
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

struct ShiftAssignment {
  double beta = 0.5;
  int d = 1;
  std::vector<double> shifts;
  std::vector<std::int64_t> floors;
  double shift_cap = std::numeric_limits<double>::infinity();
  Permutation pi;

  NodeId size() const { return static_cast<NodeId>(floors.size()); }

  std::int64_t max_floor() const {
    std::int64_t k = 0;
    for (auto f : floors) k = std::max(k, f);
    return k;
  }

  double max_shift() const {
    double m = 0;
    for (double s : shifts) m = std::max(m, s);
    return m;
  }

  /// Fixture constructor: integer shifts and explicit ranks.
  static ShiftAssignment from_floors(std::vector<std::int64_t> floors, std::vector<NodeId> ranks,
                                     double beta = 0.5) {
    ShiftAssignment s;
    s.beta = beta;
    s.floors = std::move(floors);
    s.shifts.assign(s.floors.begin(), s.floors.end());
    s.pi.rank = std::move(ranks);
    return s;
  }

  friend bool operator==(const ShiftAssignment&, const ShiftAssignment&) = default;
};

/// Inverse-CDF draw from Exp(beta) for u in (0, 1].
inline double exponential_from_uniform(double u, double beta) { return -std::log(u) / beta; }

/// Shift ceiling d * ln n / beta used by the decremental decomposition; n < 2 is
/// treated as n = 2 so the ceiling stays positive.
inline double ldd_shift_cap(NodeId n, double beta, int d = 1) {
  return d * std::log(double(std::max<NodeId>(n, 2))) / beta;
}

/// Samples i.i.d. Exp(beta) shifts, resampling the whole vector until every
/// shift is below `cap`, then an independent uniform permutation.
inline ShiftAssignment sample_shifts(NodeId n, double beta, double cap, Rng& rng,
                                     int max_retries = 1000, int d = 1) {
  if (!(beta > 0) || !std::isfinite(beta))
    throw Error(ErrorCode::InvalidBeta, "beta must be positive, got " + std::to_string(beta));
  if (!(cap > 0)) throw Error(ErrorCode::InvalidParameters, "shift cap must be positive");
  if (max_retries < 1) throw Error(ErrorCode::InvalidParameters, "max_retries must be >= 1");

  ShiftAssignment s;
  s.beta = beta;
  s.d = d;
  s.shift_cap = cap;
  s.shifts.resize(n);
  bool ok = false;
  for (int attempt = 0; attempt < max_retries && !ok; ++attempt) {
    ok = true;
    for (NodeId u = 0; u < n; ++u) {
      s.shifts[u] = exponential_from_uniform(rng.uniform_open_closed(), beta);
      if (s.shifts[u] >= cap) ok = false;
    }
  }
  if (!ok)
    throw Error(ErrorCode::ResampleExhausted,
                "no shift vector below cap " + std::to_string(cap) + " after " +
                    std::to_string(max_retries) + " attempts");
  s.floors.resize(n);
  for (NodeId u = 0; u < n; ++u) s.floors[u] = static_cast<std::int64_t>(std::floor(s.shifts[u]));
  s.pi = Permutation::uniform(n, rng);
  return s;
}

/// G' = G plus a virtual source joined to every node; graph edges weigh 1 and
/// the source edge of u weighs offset - floor(delta_u), offset = max floor.
struct SourceGraph {
  std::int64_t offset = 0;
  std::vector<std::int64_t> source_weight;
  std::vector<std::vector<NodeId>> adj;

  NodeId size() const { return static_cast<NodeId>(adj.size()); }
};

inline SourceGraph build_source_graph(NodeId n, std::span<const SkeletonEdge> skeleton,
                                      const ShiftAssignment& shifts) {
  if (shifts.size() != n) throw Error(ErrorCode::InvalidParameters, "shift vector size mismatch");
  SourceGraph g;
  g.offset = shifts.max_floor();
  g.source_weight.resize(n);
  for (NodeId u = 0; u < n; ++u) g.source_weight[u] = g.offset - shifts.floors[u];
  g.adj = adjacency_lists(n, skeleton);
  return g;
}

struct Clustering {
  std::vector<NodeId> center;
  std::vector<std::int64_t> level;
  std::vector<NodeId> parent;  // kRoot below the source

  NodeId size() const { return static_cast<NodeId>(center.size()); }

  std::map<NodeId, std::vector<NodeId>> clusters() const {
    std::map<NodeId, std::vector<NodeId>> out;
    for (NodeId u = 0; u < size(); ++u) out[center[u]].push_back(u);
    return out;
  }

  bool same_partition_and_levels(const Clustering& o) const {
    return center == o.center && level == o.level;
  }

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

/// Lexicographic key a node would obtain through a given parent: tree distance,
/// rank of the inherited center, then parent id (source = kRoot, compared last).
struct ParentKey {
  std::int64_t dist;
  NodeId center_rank;
  NodeId via;

  bool same_class(const ParentKey& o) const { return dist == o.dist && center_rank == o.center_rank; }
  friend auto operator<=>(const ParentKey&, const ParentKey&) = default;
};

/// Dijkstra on G' with the tie-breaking relaxation: among equal distances the
/// candidate whose center ranks lower wins, then the lower parent id. Centers
/// follow c(u) = u below the source and c(u) = c(p(u)) otherwise.
inline Clustering static_partition(NodeId n, std::span<const SkeletonEdge> skeleton,
                                   const ShiftAssignment& shifts) {
  const SourceGraph g = build_source_graph(n, skeleton, shifts);
  const auto& rank = shifts.pi.rank;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

  Clustering out;
  out.level.assign(n, kInf);
  out.parent.assign(n, kRoot);
  out.center.assign(n, kRoot);
  std::vector<ParentKey> best(n, ParentKey{kInf, kRoot, kRoot});
  std::vector<bool> done(n, false);

  using Item = std::pair<std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  auto relax = [&](NodeId v, ParentKey cand, NodeId cand_center) {
    if (done[v] || !(cand < best[v])) return;
    const bool shorter = cand.dist < best[v].dist;
    best[v] = cand;
    out.level[v] = cand.dist;
    out.parent[v] = cand.via;
    out.center[v] = cand_center;
    if (shorter) heap.emplace(cand.dist, v);
  };

  // The source is popped first and relaxes all of its edges.
  for (NodeId v = 0; v < n; ++v) relax(v, ParentKey{g.source_weight[v], rank[v], kRoot}, v);

  while (!heap.empty()) {
    auto [dist, u] = heap.top();
    heap.pop();
    if (done[u] || dist != out.level[u]) continue;
    done[u] = true;
    const ParentKey via_u{dist + 1, rank[out.center[u]], u};
    for (NodeId v : g.adj[u]) relax(v, via_u, out.center[u]);
  }
  return out;
}

/// Multiplicity-weighted fraction of inter-cluster edges (0 for an edgeless graph).
inline double inter_cluster_fraction(std::span<const SkeletonEdge> skeleton,
                                     const std::vector<NodeId>& center) {
  std::uint64_t total = 0, inter = 0;
  for (const auto& e : skeleton) {
    total += e.mu;
    if (center[e.u] != center[e.v]) inter += e.mu;
  }
  return total == 0 ? 0.0 : double(inter) / double(total);
}

}  // namespace dynlsf
