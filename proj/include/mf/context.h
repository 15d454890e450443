#ifndef MF_CONTEXT_H_
#define MF_CONTEXT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mf/buoyancy.h"
#include "mf/extraction.h"
#include "mf/graph.h"
#include "mf/search.h"

namespace mf {

enum class ContextState { kActive, kHidden, kArchived, kDeleted };

std::string_view ContextStateName(ContextState s);
std::optional<ContextState> ParseContextState(std::string_view name);
// active <-> hidden -> archived -> deleted. Staying put is legal.
bool IsLegalTransition(ContextState from, ContextState to);

enum class Aspect {
  kOrganizational,
  kHistorical,
  kCausal,
  kInformational,
  kOperational,
  kBehavioral,
  kEnvironmental,
  kAttentional,
  kHierarchy,
  kForgetting,
  kFocal,
};
inline constexpr int kAspectCount = 11;

std::string_view AspectName(Aspect a);
std::optional<Aspect> ParseAspect(std::string_view name);

enum class AddedBy { kUser, kSystem };

struct Membership {
  Timestamp added_at = 0;
  AddedBy added_by = AddedBy::kUser;
};

struct AspectEntry {
  Timestamp t = 0;
  std::string note;
};

struct ContextSpace {
  EntityId id;
  std::optional<EntityId> nucleus;
  std::map<EntityId, Membership> members;
  std::set<EntityId> is_about;
  ContextState state = ContextState::kActive;
  // Most recent first, at most ContextParams::focus_size, always members.
  std::vector<EntityId> last_focus;
  std::map<Aspect, std::vector<AspectEntry>> aspects;
  Timestamp created_at = 0;
  Timestamp last_touched = 0;
  // Members at the time of deletion.
  std::vector<EntityId> tombstone_members;
  // Summed term counts of member texts; the unnormalized centroid.
  std::map<std::string, int64_t> term_profile;
};

struct ContextParams {
  double jaccard_weight = 0.5;
  double cosine_weight = 0.3;
  double recency_weight = 0.2;
  double recency_scale_days = 7.0;
  double switch_threshold = 0.35;
  double new_threshold = 0.15;
  double margin = 0.1;
  double forgotten_threshold = 0.1;
  int focus_size = 5;
  double hot_mb = 0.7;
};

enum class ElicitationDecision { kSame, kSwitch, kProposeNew };

std::string_view ElicitationDecisionName(ElicitationDecision d);

struct ElicitationResult {
  ElicitationDecision decision = ElicitationDecision::kSame;
  // Set for kSwitch.
  std::optional<EntityId> target;
  std::map<EntityId, double> scores;
  double margin = 0;
};

struct ScoredItem {
  EntityId item;
  double mb = 0;
};

struct InjectionViews {
  EntityId context;
  // Both by descending mb, then id.
  std::vector<ScoredItem> current;
  std::vector<ScoredItem> forgotten;
  std::vector<EntityId> last_focus;
  std::vector<EntityId> cross_context_hot;
};

struct TimelineRecord {
  Timestamp t = 0;
  std::string kind;  // spawn, switch, split, merge, state
  EntityId context;
  std::string detail;
  std::optional<ContextState> from;
  std::optional<ContextState> to;
};

struct OverviewEntry {
  EntityId context;
  double mb = 0;
  Timestamp last_touched = 0;
  // False for contexts beyond the budget (hidden from the default view).
  bool shown = true;
};

struct FlatViewEntry {
  EntityId item;
  double mb = 0;
  // Root context first, originating sub-context last.
  std::vector<EntityId> path;
};

enum class SplitSide { kLeft, kRight };
enum class MembershipAction { kAdd, kRemove };

// Everything the context operations read or write besides their own state.
struct ContextEnv {
  Graph &graph;
  Buoyancy &buoyancy;
  const LabelDictionary &dictionary;
  const SearchIndex &index;
};

// Term-count cosine similarity; 0 if either side is empty.
double Cosine(const std::map<std::string, int64_t> &a,
              const std::map<std::string, int64_t> &b);

// Context spaces through their lifecycle: spawning, membership, elicitation,
// switching, split/merge, escalating state changes, and the derived views.
class ContextManager {
 public:
  explicit ContextManager(ContextParams params = {}) : params_(params) {}

  const ContextParams &params() const { return params_; }

  // Returns the existing context if the nucleus already anchors one.
  const ContextSpace &Spawn(ContextEnv env, const EntityId &nucleus, Timestamp t);

  const ContextSpace &ModifyMembership(ContextEnv env, const EntityId &ctx,
                                       const EntityId &item,
                                       MembershipAction action, Timestamp t,
                                       AddedBy by = AddedBy::kUser);

  // System-side membership (the item was worked on inside the context). No
  // stimulation; the caller accounts for the interaction itself.
  void Attach(ContextEnv env, const EntityId &ctx, const EntityId &item, Timestamp t);

  ElicitationResult Elicit(const Graph &graph, const Buoyancy &buoyancy,
                           const std::vector<EntityId> &mentions,
                           std::string_view snippet, Timestamp t) const;

  InjectionViews Switch(ContextEnv env, const EntityId &ctx, Timestamp t);

  std::pair<EntityId, EntityId> Split(
      ContextEnv env, const EntityId &ctx,
      const std::map<EntityId, SplitSide> &assignment, Timestamp t);

  EntityId Merge(ContextEnv env, const EntityId &a, const EntityId &b, Timestamp t);

  const ContextSpace &SetState(ContextEnv env, const EntityId &ctx,
                               ContextState to, Timestamp t);

  InjectionViews ComputeInjections(const Graph &graph, const Buoyancy &buoyancy,
                                   const EntityId &ctx, double forgotten_threshold,
                                   Timestamp t) const;

  std::vector<OverviewEntry> Overview(const Graph &graph, const Buoyancy &buoyancy,
                                      Timestamp t, std::size_t budget) const;

  std::vector<FlatViewEntry> FlatView(const Graph &graph, const Buoyancy &buoyancy,
                                      const EntityId &ctx, std::size_t budget,
                                      Timestamp t) const;

  // Records an interaction with `item` inside `ctx` (focus list, recency).
  void Touch(const EntityId &ctx, const EntityId &item, Timestamp t);
  // Adds a per-item term-count change to every context holding the item.
  void ApplyTermDelta(const EntityId &item,
                      const std::map<std::string, int64_t> &delta);
  void AddAspect(const EntityId &ctx, Aspect aspect, Timestamp t, std::string note);

  const ContextSpace &Get(const EntityId &ctx) const;
  const ContextSpace *Find(const EntityId &ctx) const;
  std::optional<EntityId> ContextOfNucleus(const EntityId &nucleus) const;
  const std::map<EntityId, ContextSpace> &contexts() const { return contexts_; }
  const std::optional<EntityId> &current() const { return current_; }
  const std::vector<TimelineRecord> &timeline() const { return timeline_; }
  uint64_t next_serial() const { return next_serial_; }

  // Snapshot restore.
  void Restore(std::map<EntityId, ContextSpace> contexts,
               std::optional<EntityId> current,
               std::vector<TimelineRecord> timeline, uint64_t next_serial);

 private:
  ContextSpace &Mutable(const EntityId &ctx);
  ContextSpace &Create(ContextEnv env, std::string label, Timestamp t);
  void AddMember(ContextEnv env, ContextSpace &ctx, const EntityId &item,
                 Membership membership);
  // Archives via hidden so the transition log stays legal.
  void Retire(ContextEnv env, const EntityId &ctx, Timestamp t);
  std::set<EntityId> ConceptsOf(const Graph &graph, const ContextSpace &ctx) const;
  std::vector<EntityId> Parents(const Graph &graph, const EntityId &ctx) const;
  void Record(TimelineRecord record) { timeline_.push_back(std::move(record)); }
  void AddAbout(ContextSpace &ctx, const EntityId &concept_id);

  ContextParams params_;
  std::map<EntityId, ContextSpace> contexts_;
  std::map<EntityId, EntityId> by_nucleus_;
  // concept -> contexts that are about it
  std::map<EntityId, std::set<EntityId>> about_index_;
  std::optional<EntityId> current_;
  std::vector<TimelineRecord> timeline_;
  uint64_t next_serial_ = 1;
};

}  // namespace mf

#endif  // MF_CONTEXT_H_
