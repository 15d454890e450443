#ifndef MF_ENGINE_H_
#define MF_ENGINE_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mf/activity.h"
#include "mf/buoyancy.h"
#include "mf/config.h"
#include "mf/context.h"
#include "mf/extraction.h"
#include "mf/graph.h"
#include "mf/preservation.h"
#include "mf/search.h"

namespace mf {

inline constexpr int kSnapshotFormatVersion = 1;

struct EffectSummary {
  int64_t event_seq = 0;
  std::vector<EntityId> new_things;
  int64_t mentions_found = 0;
  // "same", "switch", "propose_new", "spawn", "explicit", or "none" when the
  // event type bypasses elicitation.
  std::string context_decision = "none";
  std::optional<EntityId> context;
  // Buoyancy of every node touched by the event, by id, after the event.
  std::vector<std::pair<EntityId, double>> mb_updates;
};

// The whole engine behind one serial ingest entry point.
class Engine {
 public:
  explicit Engine(EngineConfig config = {});

  // Throws OutOfOrder, UnknownEntity, and the errors of the modules involved.
  EffectSummary Ingest(const ActivityEvent &event);

  SearchResult Query(SearchQuery query) const;
  // Assesses every live resource at the engine clock.
  TimeCapsule Assess(Persona persona, double threshold) const;
  std::vector<PVAssessment> AssessItems(const std::vector<EntityId> &items,
                                        Persona persona, double threshold) const;
  InjectionViews Injections(const EntityId &ctx) const;

  double CurrentMb(const EntityId &node) const;

  // The latest ingested timestamp, 0 before the first event.
  Timestamp now() const { return now_; }
  int64_t event_count() const { return seq_; }

  const EngineConfig &config() const { return config_; }
  Graph &graph() { return graph_; }
  const Graph &graph() const { return graph_; }
  const LabelDictionary &dictionary() const { return dictionary_; }
  const SearchIndex &index() const { return index_; }
  const Buoyancy &buoyancy() const { return buoyancy_; }
  const ContextManager &contexts() const { return contexts_; }
  ContextManager &contexts() { return contexts_; }
  ContextEnv env();
  const std::map<EntityId, UsageStats> &usage() const { return usage_; }

  // Adds things outside the event stream (generated datasets).
  void SetUsage(const EntityId &item, UsageStats stats);
  // Brings the dictionary and index up to date with direct graph edits.
  void Refresh();

  // Canonical JSON (sorted keys) followed by a checksum line.
  std::string SaveSnapshot() const;
  // Throws VersionMismatch / CorruptSnapshot.
  static Engine LoadSnapshot(std::string_view text);

  nlohmann::json StateJson() const;

 private:
  std::optional<EntityId> ResolveItem(const ActivityEvent &event, EffectSummary &summary);
  std::optional<EntityId> ResolveContext(const EntityId &hint) const;
  void Reindex(const EntityId &item, const std::string *extra_text);
  void RecordUsage(const ActivityEvent &event, const EntityId &item);

  EngineConfig config_;
  Graph graph_;
  LabelDictionary dictionary_;
  SearchIndex index_;
  Buoyancy buoyancy_;
  ContextManager contexts_;
  std::map<EntityId, UsageStats> usage_;
  int64_t seq_ = 0;
  Timestamp now_ = 0;
};

// Reads a JSON-lines log. Blank lines are skipped. Errors carry the 1-based
// line number. Throws OutOfOrder for events earlier than the running maximum
// minus the reorder window; the result is stably sorted by timestamp.
std::vector<ActivityEvent> ReadEventLog(std::istream &in, double reorder_window_s);

// CRC-32 of `data` as eight lowercase hex digits.
std::string Checksum(std::string_view data);

}  // namespace mf

#endif  // MF_ENGINE_H_
