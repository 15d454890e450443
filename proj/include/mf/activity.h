#ifndef MF_ACTIVITY_H_
#define MF_ACTIVITY_H_

#include <optional>
#include <string>
#include <string_view>

#include "mf/graph.h"

namespace mf {

enum class EventType {
  kOpen,
  kRead,
  kWrite,
  kClick,
  kTag,
  kDragToContext,
  kCreate,
  kDeleteRequest,
  kSearch,
  kSwitchContext,
  kCalendarCreate,
  kCalendarEnd,
};
inline constexpr int kEventTypeCount = 12;

std::string_view EventTypeName(EventType type);
std::optional<EventType> ParseEventType(std::string_view name);

// An item the plug-out saw but the engine may not know yet. Items are keyed
// by uri. Calendar entries may carry start/end times.
struct ItemDescriptor {
  ThingKind kind = ThingKind::kFile;
  std::string uri;
  std::string title;
  std::optional<Timestamp> start;
  std::optional<Timestamp> end;
};

struct ActivityEvent {
  Timestamp ts = 0;
  EventType type = EventType::kOpen;
  // At most one of item_id / descriptor is set.
  std::optional<EntityId> item_id;
  std::optional<ItemDescriptor> descriptor;
  std::optional<std::string> text;
  std::optional<EntityId> context_hint;
  std::string app;

  bool has_item() const { return item_id || descriptor; }
};

// One JSON-lines record. Throws MalformedEvent, MissingField, or
// InvariantViolation. Unknown fields are ignored.
ActivityEvent ParseEventLine(std::string_view line);

// Canonical single-line JSON, parseable by ParseEventLine.
std::string FormatEventLine(const ActivityEvent &event);

}  // namespace mf

#endif  // MF_ACTIVITY_H_
