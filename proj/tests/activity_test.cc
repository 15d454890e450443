#include "mf/activity.h"

#include <gtest/gtest.h>

#include "support.h"

namespace mf {
namespace {

using testing::Gen;

TEST(ActivityTest, ParsesIdAndDescriptorItems) {
  auto e = ParseEventLine(R"({"ts": 1700000000, "event_type": "open", "item": "f:1", "app": "editor"})");
  EXPECT_EQ(e.ts, 1700000000);
  EXPECT_EQ(e.type, EventType::kOpen);
  EXPECT_EQ(e.item_id, EntityId("f:1"));
  EXPECT_EQ(e.app, "editor");
  EXPECT_FALSE(e.text);

  e = ParseEventLine(
      R"({"ts": 5.5, "event_type": "calendar_create", "text": "Kickoff",
          "item": {"kind": "event", "uri": "cal:1", "title": "Kickoff", "start": 10, "end": 20},
          "unknown_field": [1, 2]})");
  ASSERT_TRUE(e.descriptor);
  EXPECT_EQ(e.descriptor->kind, ThingKind::kEvent);
  EXPECT_EQ(e.descriptor->uri, "cal:1");
  EXPECT_EQ(e.descriptor->start, 10);
  EXPECT_EQ(e.descriptor->end, 20);
  EXPECT_EQ(e.text, "Kickoff");
}

TEST(ActivityTest, RejectsBadLines) {
  EXPECT_MF_ERROR(ParseEventLine(R"({"event_type": "open"})"), ErrorCode::kMissingField);
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": 1})"), ErrorCode::kMissingField);
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": 1, "event_type": "jump"})"),
                  ErrorCode::kMalformedEvent);
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": "x", "event_type": "open"})"),
                  ErrorCode::kMalformedEvent);
  EXPECT_MF_ERROR(ParseEventLine("not json"), ErrorCode::kMalformedEvent);
  EXPECT_MF_ERROR(ParseEventLine("[1, 2]"), ErrorCode::kMalformedEvent);
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": 1, "event_type": "open", "item": {"uri": "x"}})"),
                  ErrorCode::kMissingField);
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": 1, "event_type": "open", "item": 7})"),
                  ErrorCode::kMalformedEvent);
}

TEST(ActivityTest, StructuralInvariants) {
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": 1, "event_type": "drag_to_context", "item": "f"})"),
                  ErrorCode::kInvariantViolation);
  EXPECT_MF_ERROR(
      ParseEventLine(R"({"ts": 1, "event_type": "drag_to_context", "context_hint": "c"})"),
      ErrorCode::kInvariantViolation);
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": 1, "event_type": "switch_context"})"),
                  ErrorCode::kInvariantViolation);
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": 1, "event_type": "calendar_create",
                                     "item": {"kind": "file", "uri": "f"}})"),
                  ErrorCode::kInvariantViolation);
  EXPECT_MF_ERROR(ParseEventLine(R"({"ts": 1, "event_type": "open",
                                     "item": {"kind": "event", "uri": "e", "start": 9, "end": 3}})"),
                  ErrorCode::kInvariantViolation);
}

TEST(ActivityTest, FormatParseRoundTrip) {
  Gen gen(11);
  const std::vector<std::string> words = {"alpha", "Zürich", "\"quoted\"", "tab\there", ""};
  for (int i = 0; i < 2000; ++i) {
    ActivityEvent e;
    e.ts = gen.Coin(0.5) ? gen.Int(0, 2000000000) : gen.Real(0, 2e9);
    e.type = static_cast<EventType>(gen.Int(0, kEventTypeCount - 1));
    if (gen.Coin(0.5)) {
      e.item_id = EntityId("id:" + std::to_string(gen.Int(0, 99)));
    } else if (gen.Coin(0.7)) {
      ItemDescriptor d;
      d.kind = static_cast<ThingKind>(gen.Int(0, 5));
      d.uri = "uri:" + std::to_string(i);
      d.title = gen.Pick(words);
      if (gen.Coin(0.3)) {
        d.start = gen.Real(0, 100);
        d.end = *d.start + gen.Real(0, 100);
      }
      e.descriptor = d;
    }
    if (gen.Coin(0.5)) e.text = gen.Pick(words) + " " + gen.Pick(words);
    if (gen.Coin(0.3)) e.context_hint = EntityId("ctx:" + std::to_string(gen.Int(0, 9)));
    if (gen.Coin(0.5)) e.app = gen.Pick(words);

    const std::string line = FormatEventLine(e);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    ActivityEvent back;
    try {
      back = ParseEventLine(line);
    } catch (const Error &err) {
      // Only the structural rules may reject a formatted event.
      EXPECT_EQ(err.code(), ErrorCode::kInvariantViolation) << line;
      continue;
    }
    EXPECT_EQ(FormatEventLine(back), line);
    EXPECT_EQ(back.ts, e.ts);
    EXPECT_EQ(back.item_id, e.item_id);
    EXPECT_EQ(back.text, e.text);
    EXPECT_EQ(back.context_hint, e.context_hint);
  }
}

TEST(ActivityTest, EventTypeNames) {
  for (int i = 0; i < kEventTypeCount; ++i) {
    const auto type = static_cast<EventType>(i);
    EXPECT_EQ(ParseEventType(EventTypeName(type)), type);
  }
  EXPECT_FALSE(ParseEventType("Open"));
}

}  // namespace
}  // namespace mf
