#include <gtest/gtest.h>

#include "dynlsf/graph.hpp"
#include "dynlsf/random.hpp"

using namespace dynlsf;
using S = ChangeSummary::Structural;

TEST(Graph, FirstInsertAddsSkeletonEdge) {
  DynamicMultigraph g(3);
  const auto s = g.apply_update(UpdateEvent::insert(0, 1));
  EXPECT_EQ(s.structural, S::SkeletonEdgeAdded);
  EXPECT_EQ(s.new_multiplicity, 1u);
  EXPECT_EQ(g.multi_edge_count(), 1u);
  EXPECT_EQ(g.skeleton_edge_count(), 1u);
}

TEST(Graph, DeleteOfParallelCopyIsMultiplicityOnly) {
  DynamicMultigraph g(3);
  g.apply_update(UpdateEvent::insert(0, 1));
  g.apply_update(UpdateEvent::insert(1, 0));
  const auto s = g.apply_update(UpdateEvent::erase(0, 1));
  EXPECT_EQ(s.structural, S::MultiplicityOnly);
  EXPECT_EQ(s.new_multiplicity, 1u);
  EXPECT_EQ(g.multiplicity(1, 0), 1u);
}

TEST(Graph, DeleteBelowZeroThrows) {
  DynamicMultigraph g(3);
  g.apply_update(UpdateEvent::insert(0, 1));
  EXPECT_EQ(g.apply_update(UpdateEvent::erase(0, 1)).structural, S::SkeletonEdgeRemoved);
  try {
    g.apply_update(UpdateEvent::erase(0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeleteAbsentEdge);
  }
  EXPECT_EQ(g.multi_edge_count(), 0u);
}

TEST(Graph, InvalidEndpoints) {
  DynamicMultigraph g(3);
  for (auto ev : {UpdateEvent::insert(0, 3), UpdateEvent::insert(1, 1), UpdateEvent::erase(5, 0)}) {
    try {
      g.apply_update(ev);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidNode);
    }
  }
}

TEST(Graph, SnapshotEmpty) { EXPECT_TRUE(DynamicMultigraph(4).snapshot_skeleton().empty()); }

TEST(Graph, SnapshotCanonicalOrder) {
  DynamicMultigraph g(3);
  g.apply_update(UpdateEvent::insert(1, 0));
  g.apply_update(UpdateEvent::insert(0, 2));
  g.apply_update(UpdateEvent::insert(1, 0));
  const Skeleton expect{{0, 1, 2}, {0, 2, 1}};
  EXPECT_EQ(g.snapshot_skeleton(), expect);
}

TEST(Graph, SymmetricInsertsMerge) {
  DynamicMultigraph g(3);
  g.apply_update(UpdateEvent::insert(2, 0));
  g.apply_update(UpdateEvent::insert(0, 2));
  const Skeleton expect{{0, 2, 2}};
  EXPECT_EQ(g.snapshot_skeleton(), expect);
}

TEST(Graph, SnapshotRoundTrip) {
  Rng rng(7);
  DynamicMultigraph g(20);
  for (int i = 0; i < 300; ++i) {
    const NodeId u = NodeId(rng.below(20)), v = NodeId(rng.below(20));
    if (u == v) continue;
    if (g.has_edge(u, v) && rng.bernoulli(0.4)) g.apply_update(UpdateEvent::erase(u, v));
    else g.apply_update(UpdateEvent::insert(u, v));
  }
  const auto sk = g.snapshot_skeleton();
  EXPECT_EQ(DynamicMultigraph::from_skeleton(20, sk), g);
}

TEST(Graph, ReplayIsDeterministicAndCountsMatch) {
  Rng rng(11);
  std::vector<UpdateEvent> evs;
  DynamicMultigraph a(15);
  std::uint64_t ins = 0, del = 0;
  for (int i = 0; i < 500; ++i) {
    const NodeId u = NodeId(rng.below(15));
    NodeId v = NodeId(rng.below(14));
    if (v >= u) ++v;
    UpdateEvent ev = a.has_edge(u, v) && rng.bernoulli(0.5) ? UpdateEvent::erase(u, v) : UpdateEvent::insert(u, v);
    a.apply_update(ev);
    evs.push_back(ev);
    (ev.kind == UpdateEvent::Kind::Insert ? ins : del)++;
  }
  DynamicMultigraph b(15);
  for (const auto& ev : evs) b.apply_update(ev);
  EXPECT_EQ(a.snapshot_skeleton(), b.snapshot_skeleton());
  EXPECT_EQ(total_multiplicity(a.snapshot_skeleton()), ins - del);
  EXPECT_EQ(a.multi_edge_count(), ins - del);
  EXPECT_EQ(a.skeleton_edge_count(), a.snapshot_skeleton().size());
}

TEST(Graph, EdgeNormalization) {
  EXPECT_EQ(Edge(3, 1), Edge(1, 3));
  EXPECT_EQ(Edge(3, 1).u, 1u);
}

TEST(Random, DeriveSeedSeparatesLabels) {
  EXPECT_NE(derive_seed(1, "shifts"), derive_seed(1, "stream"));
  EXPECT_NE(derive_seed(1, "level", 0), derive_seed(1, "level", 1));
  EXPECT_EQ(derive_seed(9, "x"), derive_seed(9, "x"));
}

TEST(Random, UniformRanges) {
  Rng r(3);
  for (int i = 0; i < 10000; ++i) {
    const double a = r.uniform_open_closed();
    EXPECT_GT(a, 0.0);
    EXPECT_LE(a, 1.0);
    EXPECT_LT(r.below(7), 7u);
  }
}
