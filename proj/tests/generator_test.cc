#include "mf/generator.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "support.h"

namespace mf {
namespace {

using nlohmann::json;

ActivityProfile Small(int contexts, int events, double noise) {
  ActivityProfile p;
  p.contexts = contexts;
  p.events = events;
  p.noise = noise;
  p.topics_per_context = 1;
  p.items_per_context = 3;
  p.block_min = 3;
  p.block_max = 5;
  return p;
}

TEST(GenerateActivityTest, NoiselessBlocksAlternate) {
  const auto out = GenerateActivity(Small(2, 20, 0.0), 5);
  ASSERT_EQ(out.events.size(), 20u);
  ASSERT_EQ(out.labels.size(), 20u);
  int last_block = -1;
  std::string last_label;
  for (std::size_t i = 0; i < out.events.size(); ++i) {
    const PlantedLabel &l = out.labels[i];
    if (l.block < 0) continue;
    ASSERT_TRUE(out.events[i].descriptor);
    // Without noise every event touches an item of its own context.
    EXPECT_NE(out.events[i].descriptor->uri.find("/" + l.label + "/"), std::string::npos);
    if (l.block != last_block) {
      EXPECT_EQ(l.offset, 0);
      EXPECT_NE(l.label, last_label);
      last_block = l.block;
      last_label = l.label;
    }
  }
  EXPECT_GT(last_block, 1);
}

TEST(GenerateActivityTest, SeedDeterminesTheLog) {
  const ActivityProfile p = Small(3, 200, 0.2);
  auto lines = [&](uint64_t seed) {
    std::vector<std::string> out;
    for (const auto &e : GenerateActivity(p, seed).events) out.push_back(FormatEventLine(e));
    return out;
  };
  EXPECT_EQ(lines(9), lines(9));
  EXPECT_NE(lines(9), lines(10));
  EXPECT_EQ(LabelsCsv(GenerateActivity(p, 9).labels), LabelsCsv(GenerateActivity(p, 9).labels));
}

TEST(GenerateActivityTest, EveryLineParsesAndTimeAdvances) {
  const auto out = GenerateActivity(ActivityProfile{}, 3);
  ASSERT_EQ(out.events.size(), 500u);
  Timestamp last = 0;
  for (const auto &e : out.events) {
    const ActivityEvent back = ParseEventLine(FormatEventLine(e));
    EXPECT_EQ(FormatEventLine(back), FormatEventLine(e));
    EXPECT_GT(e.ts, last);
    last = e.ts;
  }
  const std::string csv = LabelsCsv(out.labels);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 501);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "line,label,nucleus,block,offset");
}

TEST(GenerateActivityTest, ProfileValidation) {
  EXPECT_MF_ERROR(GenerateActivity(Small(0, 20, 0), 1), ErrorCode::kInvalidProfile);
  EXPECT_MF_ERROR(GenerateActivity(Small(2, 3, 0), 1), ErrorCode::kInvalidProfile);
  EXPECT_MF_ERROR(GenerateActivity(Small(2, 20, 1.5), 1), ErrorCode::kInvalidProfile);
  EXPECT_MF_ERROR(ParseActivityProfile(json::parse(R"({"contexts": 2, "colour": 1})")),
                  ErrorCode::kInvalidProfile);
  EXPECT_MF_ERROR(ParseActivityProfile(json::parse(R"({"contexts": "two"})")),
                  ErrorCode::kInvalidProfile);
  const ActivityProfile p = Small(4, 300, 0.3);
  EXPECT_EQ(ProfileToJson(ParseActivityProfile(ProfileToJson(p))), ProfileToJson(p));
}

TEST(GeneratePhotosTest, SmallAlbumLayout) {
  PhotoProfile p;
  p.item_count = 10;
  p.collection_size = Distribution::Constant(5);
  p.important_persons = 1;
  p.other_persons = 0;
  Engine engine;
  GeneratePhotos(p, 1, engine);
  int photos = 0, collections = 0;
  for (const auto &[id, thing] : engine.graph().things()) {
    photos += thing.kind == ThingKind::kPhoto;
    collections += thing.kind == ThingKind::kCollection;
  }
  EXPECT_EQ(photos, 10);
  EXPECT_EQ(collections, 2);
  EXPECT_EQ(engine.graph().Neighbors(EntityId("collection:0002"), PredicateSet{Predicate::kHasPart},
                                     Direction::kOut)
                .size(),
            5u);
  // All-zero usage: no effort, no people, no popularity, no quality.
  const TimeCapsule capsule = engine.Assess(Persona::kSafeCurator, 0.35);
  std::vector<PVAssessment> all = capsule.preserve;
  all.insert(all.end(), capsule.other.begin(), capsule.other.end());
  EXPECT_EQ(all.size(), 10u);
  for (const auto &a : all) {
    EXPECT_EQ(a.dims[Dimension::kInvestment], 0.0);
    EXPECT_EQ(a.dims[Dimension::kSocialGraph], 0.0);
    EXPECT_EQ(a.dims[Dimension::kPopularity], 0.0);
    EXPECT_EQ(a.dims[Dimension::kQuality], 0.0);
  }
}

TEST(GeneratePhotosTest, DrawsStayInsideTheirRanges) {
  PhotoProfile p;
  p.item_count = 10000;
  p.clicks = {Distribution::Shape::kTriangular, 0, 12, 3};
  p.views = {Distribution::Shape::kUniform, 2, 9, 0};
  p.tags = {Distribution::Shape::kTriangular, 0, 4, 0};
  p.quality = {Distribution::Shape::kTriangular, 0.2, 0.9, 0.5};
  p.rating_probability = 0.5;
  Engine engine;
  GeneratePhotos(p, 2, engine);
  int rated = 0;
  for (const auto &[id, stats] : engine.usage()) {
    EXPECT_GE(stats.clicks, 0);
    EXPECT_LE(stats.clicks, 12);
    EXPECT_GE(stats.views, 2);
    EXPECT_LE(stats.views, 9);
    EXPECT_LE(stats.tags, 4);
    if (stats.rating) {
      ++rated;
      EXPECT_GE(*stats.rating, 1);
      EXPECT_LE(*stats.rating, 5);
    }
    const auto q = engine.graph().Get(id).NumericAttribute("quality");
    ASSERT_TRUE(q);
    EXPECT_GE(*q, 0.2);
    EXPECT_LE(*q, 0.9);
  }
  EXPECT_EQ(engine.usage().size(), 10000u);
  EXPECT_NEAR(rated / 10000.0, 0.5, 0.03);
}

TEST(GeneratePhotosTest, ProfileValidation) {
  PhotoProfile p;
  p.quality = {Distribution::Shape::kUniform, 0.5, 1.5, 0};
  Engine engine;
  EXPECT_MF_ERROR(GeneratePhotos(p, 1, engine), ErrorCode::kInvalidProfile);
  p = PhotoProfile{};
  p.clicks = {Distribution::Shape::kTriangular, 0, 5, 9};
  EXPECT_MF_ERROR(ValidateProfile(p), ErrorCode::kInvalidProfile);
  p = PhotoProfile{};
  p.important_persons = 0;
  p.important_fraction = 0.2;
  EXPECT_MF_ERROR(ValidateProfile(p), ErrorCode::kInvalidProfile);
  EXPECT_MF_ERROR(ParsePhotoProfile(json::parse(R"({"item_count": -1})")),
                  ErrorCode::kInvalidProfile);
  EXPECT_MF_ERROR(ParsePhotoProfile(json::parse(R"({"clicks": {"shape": "normal"}})")),
                  ErrorCode::kInvalidProfile);
  for (int i = 0; i < 10; ++i) {
    const PhotoProfile mixed = MixedPhotoProfile(i, 42);
    EXPECT_NO_THROW(ValidateProfile(mixed));
    EXPECT_EQ(ProfileToJson(ParsePhotoProfile(ProfileToJson(mixed))), ProfileToJson(mixed));
  }
}

}  // namespace
}  // namespace mf
