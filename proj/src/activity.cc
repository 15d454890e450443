#include "mf/activity.h"

#include <array>
#include <cmath>

#include <nlohmann/json.hpp>

#include "mf/errors.h"

namespace mf {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kEventTypeCount> kEventTypeNames = {
    "open",   "read",           "write",          "click",
    "tag",    "drag_to_context", "create",        "delete_request",
    "search", "switch_context", "calendar_create", "calendar_end"};

Timestamp RequireNumber(const json &value, const char *field) {
  if (!value.is_number()) {
    throw Error(ErrorCode::kMalformedEvent, std::string(field) + " must be numeric");
  }
  const double x = value.get<double>();
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::kMalformedEvent, std::string(field) + " must be finite");
  }
  return x;
}

std::string RequireString(const json &value, const char *field) {
  if (!value.is_string()) {
    throw Error(ErrorCode::kMalformedEvent, std::string(field) + " must be a string");
  }
  return value.get<std::string>();
}

ItemDescriptor ParseDescriptor(const json &object) {
  ItemDescriptor d;
  auto kind_it = object.find("kind");
  auto uri_it = object.find("uri");
  if (kind_it == object.end()) throw Error(ErrorCode::kMissingField, "item.kind");
  if (uri_it == object.end()) throw Error(ErrorCode::kMissingField, "item.uri");
  const std::string kind = RequireString(*kind_it, "item.kind");
  auto parsed = ParseThingKind(kind);
  if (!parsed) throw Error(ErrorCode::kMalformedEvent, "unknown item kind " + kind);
  d.kind = *parsed;
  d.uri = RequireString(*uri_it, "item.uri");
  if (d.uri.empty()) throw Error(ErrorCode::kMalformedEvent, "empty item.uri");
  if (auto it = object.find("title"); it != object.end() && !it->is_null()) {
    d.title = RequireString(*it, "item.title");
  }
  if (auto it = object.find("start"); it != object.end() && !it->is_null()) {
    d.start = RequireNumber(*it, "item.start");
  }
  if (auto it = object.find("end"); it != object.end() && !it->is_null()) {
    d.end = RequireNumber(*it, "item.end");
  }
  if (d.start && d.end && *d.start > *d.end) {
    throw Error(ErrorCode::kInvariantViolation, "item.start after item.end");
  }
  return d;
}

}  // namespace

std::string_view EventTypeName(EventType type) {
  return kEventTypeNames[static_cast<std::size_t>(type)];
}

std::optional<EventType> ParseEventType(std::string_view name) {
  for (std::size_t i = 0; i < kEventTypeNames.size(); ++i) {
    if (kEventTypeNames[i] == name) return static_cast<EventType>(i);
  }
  return std::nullopt;
}

ActivityEvent ParseEventLine(std::string_view line) {
  json record = json::parse(line.begin(), line.end(), nullptr, false);
  if (record.is_discarded()) throw Error(ErrorCode::kMalformedEvent, "invalid JSON");
  if (!record.is_object()) {
    throw Error(ErrorCode::kMalformedEvent, "event must be a JSON object");
  }

  ActivityEvent event;
  auto ts_it = record.find("ts");
  if (ts_it == record.end() || ts_it->is_null()) {
    throw Error(ErrorCode::kMissingField, "ts");
  }
  event.ts = RequireNumber(*ts_it, "ts");

  auto type_it = record.find("event_type");
  if (type_it == record.end() || type_it->is_null()) {
    throw Error(ErrorCode::kMissingField, "event_type");
  }
  const std::string type = RequireString(*type_it, "event_type");
  auto parsed = ParseEventType(type);
  if (!parsed) throw Error(ErrorCode::kMalformedEvent, "unknown event_type " + type);
  event.type = *parsed;

  if (auto it = record.find("item"); it != record.end() && !it->is_null()) {
    if (it->is_string()) {
      event.item_id = EntityId(it->get<std::string>());
      if (event.item_id->empty()) throw Error(ErrorCode::kMalformedEvent, "empty item");
    } else if (it->is_object()) {
      event.descriptor = ParseDescriptor(*it);
    } else {
      throw Error(ErrorCode::kMalformedEvent, "item must be an id or a descriptor");
    }
  }
  if (auto it = record.find("text"); it != record.end() && !it->is_null()) {
    event.text = RequireString(*it, "text");
  }
  if (auto it = record.find("context_hint"); it != record.end() && !it->is_null()) {
    event.context_hint = EntityId(RequireString(*it, "context_hint"));
  }
  if (auto it = record.find("app"); it != record.end() && !it->is_null()) {
    event.app = RequireString(*it, "app");
  }

  switch (event.type) {
    case EventType::kDragToContext:
      if (!event.has_item() || !event.context_hint) {
        throw Error(ErrorCode::kInvariantViolation,
                    "drag_to_context needs item and context_hint");
      }
      break;
    case EventType::kCalendarCreate:
      if (!event.descriptor || event.descriptor->kind != ThingKind::kEvent) {
        throw Error(ErrorCode::kInvariantViolation,
                    "calendar_create needs an item descriptor of kind event");
      }
      break;
    case EventType::kSwitchContext:
      if (!event.context_hint) {
        throw Error(ErrorCode::kInvariantViolation,
                    "switch_context needs context_hint");
      }
      break;
    default:
      break;
  }
  return event;
}

std::string FormatEventLine(const ActivityEvent &event) {
  json record = json::object();
  record["ts"] = event.ts;
  record["event_type"] = std::string(EventTypeName(event.type));
  if (event.item_id) {
    record["item"] = event.item_id->str();
  } else if (event.descriptor) {
    json item = {{"kind", std::string(ThingKindName(event.descriptor->kind))},
                 {"uri", event.descriptor->uri},
                 {"title", event.descriptor->title}};
    if (event.descriptor->start) item["start"] = *event.descriptor->start;
    if (event.descriptor->end) item["end"] = *event.descriptor->end;
    record["item"] = std::move(item);
  }
  if (event.text) record["text"] = *event.text;
  if (event.context_hint) record["context_hint"] = event.context_hint->str();
  if (!event.app.empty()) record["app"] = event.app;
  return record.dump();
}

}  // namespace mf
