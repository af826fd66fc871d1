#include <gtest/gtest.h>

#include <cmath>

#include "dynlsf/dynamic_ldd.hpp"
#include "dynlsf/oracle.hpp"
#include "dynlsf/stream.hpp"
#include "test_util.hpp"

using namespace dynlsf;

TEST(DynLdd, FreshInstance) {
  DynLdd d(5, 0.5, 1);
  for (NodeId u = 0; u < 5; ++u) EXPECT_EQ(d.center(u), u);
  EXPECT_TRUE(d.inter_cluster_edges().empty());
  EXPECT_EQ(d.phase_threshold(), 1u);
  EXPECT_EQ(d.restarts(), 0u);
}

TEST(DynLdd, SameSeedSameState) {
  DynLdd a(40, 0.4, 77), b(40, 0.4, 77);
  StreamParams p;
  p.n = 40;
  p.window = 50;
  p.updates = 400;
  const auto s = generate_stream(StreamModel::SlidingWindow, p, 5);
  for (const auto& ev : s.events) {
    a.process_update(ev);
    b.process_update(ev);
    ASSERT_EQ(a.centers(), b.centers());
    ASSERT_EQ(a.lazy_edges(), b.lazy_edges());
  }
  EXPECT_EQ(a.tree().shifts(), b.tree().shifts());
}

TEST(DynLdd, InvalidBeta) {
  for (double beta : {1.5, 1.0, 0.0, -0.2}) {
    try {
      DynLdd d(4, beta, 0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidBeta);
    }
  }
}

TEST(DynLdd, EarlyUpdatesRestartEveryTime) {
  DynLdd d(10, 0.5, 3);
  // m_i < 6 gives ceil(0.5 m_i / 3) = 1: each update finishes the phase.
  for (NodeId v = 1; v <= 6; ++v) {
    const ClusterDelta delta = d.process_update(UpdateEvent::insert(0, v));
    EXPECT_TRUE(delta.restarted);
    EXPECT_EQ(d.restarts(), v);
  }
  EXPECT_TRUE(d.lazy_edges().empty());
}

namespace {
// Builds an instance whose current phase is long enough to observe lazy edges.
DynLdd warmed_up(std::uint64_t seed) {
  DynLdd d(30, 0.3, seed);
  Rng rng(seed);
  const Skeleton sk = tu::random_er(30, 0.5, rng);
  for (const auto& e : sk) d.process_update(UpdateEvent::insert(e.u, e.v));
  while (d.updates_in_phase() != 0) d.process_update(UpdateEvent::insert(0, 1));
  return d;
}
}  // namespace

TEST(DynLdd, MidPhaseInsertIsLazy) {
  DynLdd d = warmed_up(4);
  ASSERT_GT(d.phase_threshold(), 3u);
  const auto before = d.centers();
  const ClusterDelta delta = d.process_update(UpdateEvent::insert(2, 3));
  EXPECT_FALSE(delta.restarted);
  EXPECT_TRUE(delta.recentered.empty());
  EXPECT_EQ(delta.lazy_added, std::vector<Edge>{Edge(2, 3)});
  EXPECT_EQ(d.centers(), before);
  EXPECT_GE(d.inter_cluster_edges().at(Edge(2, 3)), 1u);
}

TEST(DynLdd, LazyEdgeInsideClusterStillReported) {
  DynLdd d = warmed_up(6);
  // find two co-clustered nodes
  NodeId a = kRoot, b = kRoot;
  for (NodeId u = 0; u < 30 && a == kRoot; ++u)
    for (NodeId v = u + 1; v < 30; ++v)
      if (d.center(u) == d.center(v)) {
        a = u, b = v;
        break;
      }
  ASSERT_NE(a, kRoot);
  const auto before = d.inter_cluster_edges();
  const std::uint32_t prior = before.count(Edge(a, b)) ? before.at(Edge(a, b)) : 0;
  d.process_update(UpdateEvent::insert(a, b));
  EXPECT_EQ(d.inter_cluster_edges().at(Edge(a, b)), prior + 1);
}

TEST(DynLdd, DeleteLazyEdgeLeavesTreeAlone) {
  DynLdd d = warmed_up(8);
  ASSERT_GT(d.phase_threshold(), 3u);
  d.process_update(UpdateEvent::insert(5, 9));
  const auto deletions = d.tree().stats().deletions;
  const auto before = d.inter_cluster_edges();
  const ClusterDelta delta = d.process_update(UpdateEvent::erase(5, 9));
  EXPECT_EQ(delta.lazy_removed, std::vector<Edge>{Edge(5, 9)});
  EXPECT_EQ(d.tree().stats().deletions, deletions);
  EXPECT_EQ(d.lazy_count(Edge(5, 9)), 0u);
  auto after = d.inter_cluster_edges();
  auto expect = before;
  if (--expect[Edge(5, 9)] == 0) expect.erase(Edge(5, 9));
  EXPECT_EQ(after, expect);
}

TEST(DynLdd, InterClusterEdgesExamples) {
  // zero-shift style: an empty inner graph keeps singletons, so every lazy copy counts
  DynLdd d = warmed_up(10);
  std::uint64_t total = 0;
  for (const auto& [e, c] : d.inter_cluster_edges()) {
    EXPECT_LE(c, d.graph().multiplicity(e.u, e.v));
    total += c;
  }
  EXPECT_EQ(total, d.inter_cluster_multi_edges());
}

TEST(DynLdd, IllegalDeletePropagates) {
  DynLdd d(4, 0.5, 1);
  try {
    d.process_update(UpdateEvent::erase(0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeleteAbsentEdge);
  }
}

// Every update: the tree equals a from-scratch partition of the non-lazy graph,
// radii obey the bound, and the phase arithmetic adds up.
TEST(DynLdd, MixedStreamInvariants) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    StreamParams p;
    p.n = 40;
    p.window = 120;
    p.updates = 600;
    const auto s = generate_stream(StreamModel::SlidingWindow, p, seed);
    DynLdd d(40, 0.4, seed);
    std::uint64_t q = 0;
    for (const auto& ev : s.events) {
      d.process_update(ev);
      ++q;
      ASSERT_LT(d.updates_in_phase(), d.phase_threshold());
      const auto ref = static_partition(40, d.inner_skeleton(), d.tree().shifts());
      ASSERT_EQ(ref.center, d.centers());
      const auto rep = oracle::verify_decomposition(40, d.graph().snapshot_skeleton(), d.centers(), d.radius_bound());
      ASSERT_TRUE(rep.ok);
      for (const auto& [e, c] : d.lazy_edges()) ASSERT_GE(d.inter_cluster_edges().at(e), c);
    }
    std::uint64_t sum = 0;
    for (auto t : d.completed_thresholds()) sum += t;
    EXPECT_EQ(sum + d.updates_in_phase(), q);
    EXPECT_LE(sum, q + d.phase_threshold());
  }
}

TEST(DynLdd, RestartDeltaMatchesDiff) {
  DynLdd d(20, 0.5, 12);
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    const auto before = d.centers();
    UpdateEvent ev = tu::edges_of(d.graph().snapshot_skeleton()).empty() || rng.bernoulli(0.6)
                         ? UpdateEvent::insert(NodeId(rng.below(10)), NodeId(10 + rng.below(10)))
                         : [&] {
                             const auto e = d.graph().snapshot_skeleton()[rng.below(d.graph().skeleton_edge_count())];
                             return UpdateEvent::erase(e.u, e.v);
                           }();
    const ClusterDelta delta = d.process_update(ev);
    std::vector<NodeId> changed;
    for (NodeId u = 0; u < 20; ++u)
      if (before[u] != d.center(u)) changed.push_back(u);
    std::vector<NodeId> reported;
    for (const auto& r : delta.recentered) reported.push_back(r.node);
    std::sort(reported.begin(), reported.end());
    ASSERT_EQ(reported, changed);
  }
}
