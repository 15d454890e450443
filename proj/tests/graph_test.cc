#include "mf/graph.h"

#include <algorithm>
#include <deque>

#include <gtest/gtest.h>

#include "mf/normalize.h"

#include "oracles.h"
#include "support.h"

namespace mf {
namespace {

using testing::Gen;
using testing::Id;
using testing::MakeThing;

TEST(GraphTest, AddThingRoundTrip) {
  Graph g;
  EXPECT_EQ(g.AddThing(MakeThing("pimo:topicML", ThingKind::kTopic, "machine learning")),
            Id("pimo:topicML"));
  const Thing &t = g.Get(Id("pimo:topicML"));
  EXPECT_EQ(t.kind, ThingKind::kTopic);
  EXPECT_EQ(t.primary_label, "machine learning");
}

TEST(GraphTest, DuplicateAndEmptyLabelRejected) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kTopic, "A"));
  EXPECT_MF_ERROR(g.AddThing(MakeThing("a", ThingKind::kTopic, "again")),
                  ErrorCode::kDuplicateId);
  EXPECT_MF_ERROR(g.AddThing(MakeThing("b", ThingKind::kTopic, "")),
                  ErrorCode::kInvalidThing);
  EXPECT_FALSE(g.Contains(Id("b")));
}

TEST(GraphTest, EventMustNotEndBeforeItStarts) {
  Graph g;
  Thing e = MakeThing("ev", ThingKind::kEvent, "meeting");
  e.attributes = {{"start", "200"}, {"end", "100"}};
  EXPECT_MF_ERROR(g.AddThing(e), ErrorCode::kInvalidThing);
  e.attributes["end"] = "200";
  g.AddThing(e);
  EXPECT_TRUE(g.Contains(Id("ev")));
}

TEST(GraphTest, AddEdgeStoresAndIsIdempotent) {
  Graph g;
  g.AddThing(MakeThing("doc1", ThingKind::kWebpage, "DFKI website"));
  g.AddThing(MakeThing("topicML", ThingKind::kTopic, "machine learning"));
  g.AddEdge(Id("doc1"), Predicate::kHasSuggestedTopic, Id("topicML"));
  g.AddEdge(Id("doc1"), Predicate::kHasSuggestedTopic, Id("topicML"));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_NE(g.FindEdge(Id("doc1"), Predicate::kHasSuggestedTopic, Id("topicML")), nullptr);
}

TEST(GraphTest, AddEdgeRequiresEndpoints) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kTopic, "A"));
  EXPECT_MF_ERROR(g.AddEdge(Id("a"), Predicate::kRelatedTo, Id("zz")),
                  ErrorCode::kUnknownEntity);
  EXPECT_MF_ERROR(g.AddEdge(Id("zz"), Predicate::kRelatedTo, Id("a")),
                  ErrorCode::kUnknownEntity);
}

TEST(GraphTest, SubContextCyclesRejected) {
  Graph g;
  for (const char *id : {"ctxA", "ctxB", "ctxC"}) {
    g.AddThing(MakeThing(id, ThingKind::kContext, id));
  }
  EXPECT_MF_ERROR(g.AddEdge(Id("ctxA"), Predicate::kSubContextOf, Id("ctxA")),
                  ErrorCode::kCycleRejected);
  g.AddEdge(Id("ctxA"), Predicate::kSubContextOf, Id("ctxB"));
  g.AddEdge(Id("ctxB"), Predicate::kSubContextOf, Id("ctxC"));
  EXPECT_MF_ERROR(g.AddEdge(Id("ctxC"), Predicate::kSubContextOf, Id("ctxA")),
                  ErrorCode::kCycleRejected);
  // Other predicates may close loops freely.
  g.AddEdge(Id("ctxC"), Predicate::kRelatedTo, Id("ctxA"));
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST(GraphTest, NeighborsExamples) {
  Graph g;
  for (const char *id : {"hub", "x", "y", "z", "lonely"}) {
    g.AddThing(MakeThing(id, ThingKind::kTopic, id));
  }
  EXPECT_TRUE(g.Neighbors(Id("lonely")).empty());
  for (const char *id : {"x", "y", "z"}) g.AddEdge(Id("hub"), Predicate::kRelatedTo, Id(id));
  EXPECT_EQ(g.Neighbors(Id("hub"), {}, Direction::kOut).size(), 3u);
  EXPECT_EQ(g.Neighbors(Id("hub"), {}, Direction::kIn).size(), 0u);
  // y: one in-edge from hub, one out-edge to z.
  g.AddEdge(Id("y"), Predicate::kHasTopic, Id("z"));
  EXPECT_EQ(g.Neighbors(Id("y"), {}, Direction::kBoth).size(), 2u);
  EXPECT_MF_ERROR(g.Neighbors(Id("nope")), ErrorCode::kUnknownEntity);
}

TEST(GraphTest, NeighborsMatchEdgeScanOnRandomGraphs) {
  Gen gen(11);
  for (int round = 0; round < 60; ++round) {
    const int nodes = gen.Int(1, 200);
    Graph g = testing::RandomGraph(gen, nodes, gen.Int(0, 3 * nodes));
    for (const auto &[id, thing] : g.things()) {
      std::optional<PredicateSet> filter;
      if (gen.Coin(0.5)) {
        filter = PredicateSet{};
        for (int p = 0; p < kPredicateCount; ++p) {
          if (gen.Coin(0.4)) filter->insert(static_cast<Predicate>(p));
        }
      }
      const auto dir = static_cast<Direction>(gen.Int(0, 2));
      ASSERT_EQ(oracle::Keys(id, g.Neighbors(id, filter, dir)),
                oracle::NeighborsByScan(g, id, filter, dir))
          << "round " << round << " node " << id.str();
    }
  }
}

TEST(GraphTest, EdgesAlwaysResolveAndSubContextStaysAcyclic) {
  Gen gen(12);
  for (int round = 0; round < 40; ++round) {
    Graph g;
    const auto ids = testing::AddNodes(g, gen.Int(2, 40));
    for (int step = 0; step < 120; ++step) {
      const EntityId &a = gen.Pick(ids);
      const EntityId &b = gen.Pick(ids);
      try {
        g.AddEdge(a, gen.Coin(0.7) ? Predicate::kSubContextOf : Predicate::kRelatedTo, b);
      } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::kCycleRejected);
      }
      // Kahn's algorithm over subContextOf must consume every node.
      std::map<EntityId, int> indegree;
      for (const auto &id : ids) indegree[id] = 0;
      const auto edges = g.Edges();
      for (const Edge &e : edges) {
        ASSERT_TRUE(g.Contains(e.subject));
        ASSERT_TRUE(g.Contains(e.object));
        if (e.predicate == Predicate::kSubContextOf) ++indegree[e.object];
      }
      std::deque<EntityId> ready;
      for (const auto &[id, d] : indegree) {
        if (d == 0) ready.push_back(id);
      }
      std::size_t seen = 0;
      while (!ready.empty()) {
        EntityId n = ready.front();
        ready.pop_front();
        ++seen;
        for (const Edge &e : edges) {
          if (e.predicate == Predicate::kSubContextOf && e.subject == n &&
              --indegree[e.object] == 0) {
            ready.push_back(e.object);
          }
        }
      }
      ASSERT_EQ(seen, ids.size());
    }
  }
}

TEST(GraphTest, LookupByLabel) {
  Graph g;
  g.AddThing(MakeThing("pimo:topicML", ThingKind::kTopic, "machine learning"));
  g.AddThing(MakeThing("p:john", ThingKind::kPerson, "John Smith", {"Smith"}));
  g.AddThing(MakeThing("p:anna", ThingKind::kPerson, "Anna Smith", {"Smith"}));
  EXPECT_EQ(g.LookupByLabel("machine learning"), std::vector<EntityId>{Id("pimo:topicML")});
  EXPECT_EQ(g.LookupByLabel("Machine-Learning"), std::vector<EntityId>{Id("pimo:topicML")});
  EXPECT_TRUE(g.LookupByLabel("unknown label").empty());
  EXPECT_EQ(g.LookupByLabel("Smith"),
            (std::vector<EntityId>{Id("p:anna"), Id("p:john")}));
}

TEST(GraphTest, LookupMatchesLabelTableScan) {
  Gen gen(13);
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "Beta"};
  Graph g;
  std::vector<std::pair<std::string, EntityId>> table;
  for (int i = 0; i < 150; ++i) {
    const std::string id = "t" + std::to_string(i);
    std::string label = gen.Pick(words);
    if (gen.Coin(0.5)) label += " " + gen.Pick(words);
    std::vector<std::string> alts;
    if (gen.Coin(0.3)) alts.push_back(gen.Pick(words));
    g.AddThing(MakeThing(id, ThingKind::kTopic, label, alts));
    table.emplace_back(label, Id(id));
    for (const auto &a : alts) table.emplace_back(a, Id(id));
  }
  for (const auto &w : words) {
    for (const auto &w2 : words) {
      const std::string query = w + " " + w2;
      std::vector<EntityId> expected;
      for (const auto &[label, id] : table) {
        if (NormalizedKey(label) == NormalizedKey(query)) expected.push_back(id);
      }
      std::sort(expected.begin(), expected.end());
      expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
      EXPECT_EQ(g.LookupByLabel(query), expected) << query;
      for (const auto &id : g.LookupByLabel(w)) {
        const Thing &t = g.Get(id);
        bool has = NormalizedKey(t.primary_label) == NormalizedKey(w);
        for (const auto &a : t.alt_labels) has = has || NormalizedKey(a) == NormalizedKey(w);
        EXPECT_TRUE(has);
      }
    }
  }
}

TEST(GraphTest, SoftDeleteAndPurge) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kFile, "a"));
  g.AddThing(MakeThing("b", ThingKind::kTopic, "b"));
  g.AddEdge(Id("a"), Predicate::kHasTopic, Id("b"));
  g.MarkDeleted(Id("a"));
  EXPECT_TRUE(g.Get(Id("a")).deleted);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.Purge(), std::vector<EntityId>{Id("a")});
  EXPECT_FALSE(g.Contains(Id("a")));
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(g.purge_epoch(), 1u);
}

}  // namespace
}  // namespace mf
