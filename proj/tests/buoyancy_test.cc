#include "mf/buoyancy.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "mf/evidence.h"
#include "oracles.h"
#include "support.h"

namespace mf {
namespace {

using testing::Gen;
using testing::Id;
using testing::MakeThing;

constexpr double kDay = kSecondsPerDay;
constexpr double kT0 = 1699920000;  // 00:00 UTC

// Makes each of days [first, last] (offsets from kT0) an active day.
void MakeActive(Buoyancy &b, int first, int last) {
  for (int d = first; d <= last; ++d) {
    for (int i = 0; i < 10; ++i) b.clock().Record(kT0 + d * kDay + 60 * i);
  }
}

TEST(SpreadTest, IsolatedNodeKeepsEverything) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kFile, "a"));
  Buoyancy b;
  const auto inc = b.SpreadActivation(g, Id("a"), 0.5);
  EXPECT_EQ(inc, (std::map<EntityId, double>{{Id("a"), 0.5}}));
}

TEST(SpreadTest, SingleContainmentEdge) {
  Graph g;
  g.AddThing(MakeThing("doc", ThingKind::kFile, "doc"));
  g.AddThing(MakeThing("ctx", ThingKind::kContext, "ctx"));
  g.AddEdge(Id("doc"), Predicate::kIsContainedIn, Id("ctx"));
  Buoyancy b;
  const auto inc = b.SpreadActivation(g, Id("doc"), 0.4);
  ASSERT_EQ(inc.size(), 2u);
  EXPECT_DOUBLE_EQ(inc.at(Id("ctx")), 0.4 * 1.0 * 0.5 / 1);
  EXPECT_DOUBLE_EQ(inc.at(Id("doc")), 0.4);
}

TEST(SpreadTest, HopLimitStopsAtTwo) {
  Graph g;
  for (const char *id : {"a", "b", "c", "d"}) g.AddThing(MakeThing(id, ThingKind::kTopic, id));
  g.AddEdge(Id("a"), Predicate::kIsContainedIn, Id("b"));
  g.AddEdge(Id("b"), Predicate::kIsContainedIn, Id("c"));
  g.AddEdge(Id("c"), Predicate::kIsContainedIn, Id("d"));
  Buoyancy b;
  const auto inc = b.SpreadActivation(g, Id("a"), 1.0);
  EXPECT_EQ(inc.count(Id("d")), 0u);
  EXPECT_DOUBLE_EQ(inc.at(Id("b")), 0.5);
  EXPECT_DOUBLE_EQ(inc.at(Id("c")), 0.5 * 0.5 / 2);
}

TEST(SpreadTest, UnknownOriginAndBadStrength) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kTopic, "a"));
  Buoyancy b;
  EXPECT_MF_ERROR(b.SpreadActivation(g, Id("zz"), 0.5), ErrorCode::kUnknownEntity);
  EXPECT_MF_ERROR(b.SpreadActivation(g, Id("a"), 0.0), ErrorCode::kOutOfRange);
  EXPECT_MF_ERROR(b.SpreadActivation(g, Id("a"), 1.5), ErrorCode::kOutOfRange);
}

TEST(SpreadTest, MatchesPathEnumeration) {
  Gen gen(41);
  for (int round = 0; round < 200; ++round) {
    const int nodes = gen.Int(1, 50);
    Graph g = testing::RandomGraph(gen, nodes, gen.Int(0, 150));
    BuoyancyParams params;
    if (round % 4 == 3) {
      params.hop_limit = 3;
      params.cutoff = 0.001;
    }
    Buoyancy b(params);
    const EntityId origin = std::next(g.things().begin(), gen.Int(0, nodes - 1))->first;
    const double s = gen.Real(0.01, 1.0);
    const auto got = b.SpreadActivation(g, origin, s);
    const auto want = oracle::SpreadByPaths(g, params, origin, s);
    ASSERT_EQ(got.size(), want.size()) << "round " << round;
    for (const auto &[id, v] : want) {
      ASSERT_TRUE(got.count(id)) << id.str();
      EXPECT_NEAR(got.at(id), v, 1e-9);
    }
  }
}

TEST(StimulateTest, FreshCreate) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kNote, "a"));
  Buoyancy b;
  const auto updates = b.Stimulate(g, Id("a"), StimulusKind::kCreate, kT0);
  ASSERT_EQ(updates.size(), 1u);
  EXPECT_DOUBLE_EQ(updates[0].second, 0.30);
}

TEST(StimulateTest, FirstAccessCap) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kNote, "a"));
  Buoyancy b;
  b.StimulateWithStrength(g, Id("a"), 0.9, kT0);
  EXPECT_DOUBLE_EQ(b.CurrentMb(g, Id("a"), kT0), 0.5);
}

TEST(StimulateTest, BurstDampening) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kNote, "a"));
  Buoyancy b;
  b.Stimulate(g, Id("a"), StimulusKind::kOpen, kT0);
  b.Stimulate(g, Id("a"), StimulusKind::kOpen, kT0 + 10);
  EXPECT_NEAR(b.CurrentMb(g, Id("a"), kT0 + 10), Oplus(0.10, 0.02), 1e-15);
  EXPECT_NEAR(b.CurrentMb(g, Id("a"), kT0 + 10), 0.118, 1e-15);
  b.Stimulate(g, Id("a"), StimulusKind::kOpen, kT0 + 100);
  EXPECT_NEAR(b.CurrentMb(g, Id("a"), kT0 + 100), Oplus(0.118, 0.10), 1e-15);
}

TEST(StimulateTest, DailySaturation) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kNote, "a"));
  Buoyancy b;
  for (int i = 0; i < 200; ++i) {
    b.Stimulate(g, Id("a"), StimulusKind::kCreate, kT0 + 61.0 * i);
  }
  const MBState &s = b.states().at(Id("a"));
  EXPECT_LE(s.day_accum, 0.8 + 1e-12);
  EXPECT_LT(s.mb, 1.0);
  // A new day opens a fresh allowance.
  EXPECT_FALSE(b.Stimulate(g, Id("a"), StimulusKind::kCreate, kT0 + kDay + 1).empty());
}

TEST(StimulateTest, UnknownNode) {
  Graph g;
  Buoyancy b;
  EXPECT_MF_ERROR(b.Stimulate(g, Id("x"), StimulusKind::kOpen, kT0), ErrorCode::kUnknownEntity);
  EXPECT_MF_ERROR(b.CurrentMb(g, Id("x"), kT0), ErrorCode::kUnknownEntity);
}

TEST(StimulateTest, SameInstantOrderDoesNotMatterOnceWarm) {
  Gen gen(42);
  for (int round = 0; round < 50; ++round) {
    Graph g = testing::RandomGraph(gen, 20, 40);
    std::vector<EntityId> ids;
    for (const auto &[id, t] : g.things()) ids.push_back(id);
    Buoyancy warm;
    for (const auto &id : ids) warm.StimulateWithStrength(g, id, 0.05, kT0);
    // Distinct origins, one instant, later than the burst window.
    std::vector<std::pair<EntityId, double>> stimuli;
    std::vector<EntityId> pool = ids;
    std::shuffle(pool.begin(), pool.end(), gen.rng());
    for (int i = 0; i < 6; ++i) stimuli.emplace_back(pool[i], gen.Real(0.05, 0.3));
    Buoyancy forward = warm, backward = warm;
    for (const auto &[id, s] : stimuli) forward.StimulateWithStrength(g, id, s, kT0 + 500);
    std::reverse(stimuli.begin(), stimuli.end());
    for (const auto &[id, s] : stimuli) backward.StimulateWithStrength(g, id, s, kT0 + 500);
    for (const auto &id : ids) {
      EXPECT_NEAR(forward.CurrentMb(g, id, kT0 + 500), backward.CurrentMb(g, id, kT0 + 500),
                  1e-12);
    }
  }
}

TEST(DecayTest, ClosedFormExamples) {
  BuoyancyParams p;
  EXPECT_EQ(DecayFactor(0, false, p), 1.0);
  EXPECT_NEAR(0.8 * DecayFactor(3, false, p), 0.4, 1e-15);
  EXPECT_NEAR(0.8 * DecayFactor(67, false, p), 0.8 * std::pow(2, -7.0 / 3) * 0.5, 1e-15);
  EXPECT_NEAR(0.8 * DecayFactor(67, false, p), 0.0794, 1e-4);
  EXPECT_NEAR(0.8 * DecayFactor(3, true, p), 0.2, 1e-15);
}

TEST(DecayTest, ActiveDaysOnly) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kNote, "a"));
  Buoyancy b;
  MBState s;
  s.mb = 0.8;
  s.last_stim = kT0 + 3600;
  s.stimulated = true;
  b.RestoreState(Id("a"), s);
  EXPECT_EQ(b.CurrentMb(g, Id("a"), kT0 + 7200), 0.8);
  // Days 1..3 active, days 4..9 quiet (9 events each), then 64 more active.
  MakeActive(b, 1, 3);
  for (int d = 4; d <= 9; ++d) {
    for (int i = 0; i < 9; ++i) b.clock().Record(kT0 + d * kDay + i);
  }
  EXPECT_NEAR(b.CurrentMb(g, Id("a"), kT0 + 3 * kDay + 5), 0.4, 1e-12);
  EXPECT_NEAR(b.CurrentMb(g, Id("a"), kT0 + 9 * kDay + 5), 0.4, 1e-12);
  MakeActive(b, 10, 73);
  EXPECT_NEAR(b.CurrentMb(g, Id("a"), kT0 + 73 * kDay + 5),
              0.8 * std::pow(2, -7.0 / 3) * 0.5, 1e-12);
}

TEST(DecayTest, PropertiesAgainstClosedForm) {
  Gen gen(43);
  BuoyancyParams p;
  for (int i = 0; i < 2000; ++i) {
    const double mb0 = gen.Real(0, 1);
    const double tau = gen.Real(0, 400);
    for (bool finished : {false, true}) {
      EXPECT_NEAR(mb0 * DecayFactor(tau, finished, p),
                  oracle::DecayClosedForm(mb0, tau, finished, p), 1e-12);
    }
    const double later = tau + gen.Real(0, 30);
    EXPECT_LE(DecayFactor(later, false, p), DecayFactor(tau, false, p));
    EXPECT_LE(DecayFactor(tau, true, p), DecayFactor(tau, false, p));
  }
  const double t1 = p.steep_phase_days;
  EXPECT_NEAR(DecayFactor(t1 - 1e-10, false, p), DecayFactor(t1 + 1e-10, false, p), 1e-9);
  EXPECT_NEAR(DecayFactor(t1 - 1e-10, true, p), DecayFactor(t1 + 1e-10, true, p), 1e-9);
}

class CalendarTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Thing ev = MakeThing("ev", ThingKind::kEvent, "review");
    ev.attributes["start"] = std::to_string(kT0 + 2 * kDay);
    ev.attributes["end"] = std::to_string(kT0 + 2 * kDay + 3600);
    g_.AddThing(ev);
    g_.AddThing(MakeThing("anna", ThingKind::kPerson, "Anna"));
    g_.AddThing(MakeThing("prep", ThingKind::kTask, "prepare slides"));
    g_.AddEdge(Id("ev"), Predicate::kAttendedBy, Id("anna"));
    g_.AddEdge(Id("prep"), Predicate::kRelatedTo, Id("ev"));
    MakeActive(b_, 0, 5);
  }
  Graph g_;
  Buoyancy b_;
};

TEST_F(CalendarTest, UpcomingEventStimulatesNeighbours) {
  const auto issued = b_.ApplyCalendarEffects(g_, kT0 + 3600);
  ASSERT_EQ(issued.size(), 1u);
  EXPECT_EQ(issued[0].node, Id("ev"));
  EXPECT_DOUBLE_EQ(issued[0].strength, 0.3);
  const auto spread = Buoyancy().SpreadActivation(g_, Id("ev"), 0.3);
  EXPECT_DOUBLE_EQ(b_.CurrentMb(g_, Id("anna"), kT0 + 3600), spread.at(Id("anna")));
  EXPECT_GT(b_.CurrentMb(g_, Id("prep"), kT0 + 3600), 0.0);
  // Once per active day.
  EXPECT_TRUE(b_.ApplyCalendarEffects(g_, kT0 + 7200).empty());
  EXPECT_EQ(b_.ApplyCalendarEffects(g_, kT0 + kDay + 60).size(), 1u);
}

TEST_F(CalendarTest, PastEventIsFinished) {
  EXPECT_FALSE(b_.IsFinished(Id("ev")));
  b_.ApplyCalendarEffects(g_, kT0 + 3 * kDay);
  EXPECT_TRUE(b_.IsFinished(Id("ev")));
  EXPECT_TRUE(b_.IsFinished(Id("prep")));
  EXPECT_FALSE(b_.IsFinished(Id("anna")));
}

TEST(CalendarEmptyTest, NoEventsNoStimuli) {
  Graph g;
  g.AddThing(MakeThing("a", ThingKind::kNote, "a"));
  Buoyancy b;
  MakeActive(b, 0, 0);
  EXPECT_TRUE(b.ApplyCalendarEffects(g, kT0 + 10).empty());
}

TEST(BuoyancyFuzzTest, BoundsHoldForRandomSequences) {
  Gen gen(44);
  for (int round = 0; round < 300; ++round) {
    Graph g = testing::RandomGraph(gen, gen.Int(1, 25), gen.Int(0, 50));
    std::vector<EntityId> ids;
    for (const auto &[id, t] : g.things()) ids.push_back(id);
    Buoyancy b;
    double t = kT0;
    for (int step = 0; step < 60; ++step) {
      t += gen.Coin(0.3) ? gen.Real(0, 30) : gen.Real(0, 3 * kDay);
      b.clock().Record(t);
      const EntityId &node = gen.Pick(ids);
      const bool fresh = !b.states().count(node) || !b.states().at(node).stimulated;
      const auto kind = static_cast<StimulusKind>(gen.Int(0, kStimulusKindCount - 1));
      for (const auto &[id, mb] : b.Stimulate(g, node, kind, t)) {
        ASSERT_GE(mb, 0.0);
        ASSERT_LE(mb, 1.0);
      }
      if (fresh && b.states().count(node)) {
        ASSERT_LE(b.CurrentMb(g, node, t), 0.5);
      }
    }
  }
}

}  // namespace
}  // namespace mf
