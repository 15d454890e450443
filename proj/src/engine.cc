#include "mf/engine.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include <zlib.h>

#include "mf/errors.h"
#include "mf/normalize.h"

namespace mf {
namespace {

const PredicateSet kConceptLinks = {Predicate::kHasTopic, Predicate::kHasSuggestedTopic};

std::optional<StimulusKind> StimulusFor(EventType type) {
  switch (type) {
    case EventType::kOpen:
      return StimulusKind::kOpen;
    case EventType::kRead:
      return StimulusKind::kRead;
    case EventType::kWrite:
      return StimulusKind::kWrite;
    case EventType::kClick:
      return StimulusKind::kClick;
    case EventType::kTag:
      return StimulusKind::kTag;
    case EventType::kDragToContext:
      return StimulusKind::kDragToContext;
    case EventType::kCreate:
    case EventType::kCalendarCreate:
      return StimulusKind::kCreate;
    default:
      return std::nullopt;
  }
}

std::string FormatNumber(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

bool CanNucleate(const Thing &thing) {
  return !thing.deleted && (IsResource(thing.kind) || thing.kind == ThingKind::kEvent ||
                            thing.kind == ThingKind::kTask);
}

std::set<EntityId> ConceptNeighbors(const Graph &graph, const EntityId &item) {
  std::set<EntityId> concepts;
  for (const Neighbor &n : graph.Neighbors(item, kConceptLinks, Direction::kOut)) {
    concepts.insert(n.thing->id);
  }
  return concepts;
}

}  // namespace

Engine::Engine(EngineConfig config)
    : config_(config),
      dictionary_(config.extraction),
      buoyancy_(config.buoyancy),
      contexts_(config.context) {
  ValidateConfig(config_);
}

ContextEnv Engine::env() { return ContextEnv{graph_, buoyancy_, dictionary_, index_}; }

double Engine::CurrentMb(const EntityId &node) const {
  return buoyancy_.CurrentMb(graph_, node, now_);
}

std::optional<EntityId> Engine::ResolveItem(const ActivityEvent &event,
                                            EffectSummary &summary) {
  if (event.item_id) {
    graph_.Get(*event.item_id);
    return event.item_id;
  }
  if (!event.descriptor) return std::nullopt;
  const ItemDescriptor &d = *event.descriptor;
  if (d.kind == ThingKind::kContext) {
    throw Error(ErrorCode::kInvalidThing, "contexts are created by the engine: " + d.uri);
  }
  EntityId id(d.uri);
  if (!graph_.Contains(id)) {
    Thing thing;
    thing.id = id;
    thing.kind = d.kind;
    thing.primary_label = d.title.empty() ? d.uri : d.title;
    thing.created_at = event.ts;
    if (d.start) thing.attributes["start"] = FormatNumber(*d.start);
    if (d.end) thing.attributes["end"] = FormatNumber(*d.end);
    graph_.AddThing(std::move(thing));
    summary.new_things.push_back(id);
  } else {
    if (d.start) graph_.SetAttribute(id, "start", FormatNumber(*d.start));
    if (d.end) graph_.SetAttribute(id, "end", FormatNumber(*d.end));
  }
  if (d.kind == ThingKind::kEvent && event.text) {
    graph_.SetAttribute(id, "description", *event.text);
  }
  return id;
}

std::optional<EntityId> Engine::ResolveContext(const EntityId &hint) const {
  if (contexts_.Find(hint)) return hint;
  return contexts_.ContextOfNucleus(hint);
}

void Engine::Reindex(const EntityId &item, const std::string *extra_text) {
  if (!index_.Find(item)) {
    const Thing &thing = graph_.Get(item);
    std::string text = thing.primary_label;
    for (const auto &alt : thing.alt_labels) text += "\n" + alt;
    index_.IndexItem(graph_, item, std::move(text), {});
  }
  if (extra_text && !extra_text->empty()) {
    const std::string &existing = index_.Find(item)->text;
    if (existing.find(*extra_text) == std::string::npos) {
      contexts_.ApplyTermDelta(item, index_.AppendText(graph_, item, *extra_text));
    }
  }
  index_.SetConcepts(item, ConceptNeighbors(graph_, item));
}

void Engine::RecordUsage(const ActivityEvent &event, const EntityId &item) {
  UsageStats &stats = usage_[item];
  switch (event.type) {
    case EventType::kOpen:
    case EventType::kRead:
      ++stats.views;
      break;
    case EventType::kClick:
      ++stats.clicks;
      break;
    case EventType::kTag:
      ++stats.tags;
      break;
    default:
      break;
  }
  if ((event.type == EventType::kWrite || event.type == EventType::kTag) && event.text) {
    stats.comment_chars += static_cast<int64_t>(CodePointCount(*event.text));
  }
  const int64_t day = ActiveDayClock::DayOf(event.ts);
  if (stats.last_access_day != day) {
    ++stats.revisit_days;
    stats.last_access_day = day;
  }
}

EffectSummary Engine::Ingest(const ActivityEvent &event) {
  if (seq_ > 0 && event.ts < now_ - config_.reorder_window_s) {
    throw Error(ErrorCode::kOutOfOrder,
                "event at " + FormatNumber(event.ts) + " is older than " +
                    FormatNumber(now_) + " minus the reorder window");
  }
  if (event.context_hint && !ResolveContext(*event.context_hint)) {
    throw Error(ErrorCode::kUnknownEntity, "no context " + event.context_hint->str());
  }
  if (event.item_id) graph_.Get(*event.item_id);

  EffectSummary summary;
  const std::optional<EntityId> item = ResolveItem(event, summary);
  summary.event_seq = ++seq_;
  now_ = seq_ == 1 ? event.ts : std::max(now_, event.ts);
  const Timestamp t = event.ts;
  buoyancy_.clock().Record(t);
  dictionary_.Update(graph_);

  // Extraction.
  std::vector<Mention> mentions;
  if (event.text) mentions = Annotate(*event.text, dictionary_, graph_);
  summary.mentions_found = static_cast<int64_t>(mentions.size());
  std::vector<EntityId> evidence;
  for (const Mention &m : mentions) {
    const Thing &thing = graph_.Get(m.entity);
    if (thing.deleted || thing.kind == ThingKind::kContext) continue;
    evidence.push_back(m.entity);
    if (item && m.entity != *item) {
      graph_.AddEdge(*item, Predicate::kHasSuggestedTopic, m.entity, t, m.score);
    }
  }
  if (item) {
    Reindex(*item, event.text ? &*event.text : nullptr);
    for (const auto &c : ConceptNeighbors(graph_, *item)) evidence.push_back(c);
  }

  // Context.
  ContextEnv context_env = env();
  const Thing *item_thing = item ? &graph_.Get(*item) : nullptr;
  const bool attachable = item_thing && IsResource(item_thing->kind) && !item_thing->deleted;
  auto usable = [&](const EntityId &ctx) {
    const ContextState s = contexts_.Get(ctx).state;
    return s == ContextState::kActive || s == ContextState::kHidden;
  };
  if (event.type == EventType::kCalendarCreate) {
    const EntityId ctx = contexts_.Spawn(context_env, *item, t).id;
    if (usable(ctx)) contexts_.Switch(context_env, ctx, t);
    summary.context_decision = "spawn";
  } else if (event.type == EventType::kDeleteRequest) {
    if (item) {
      if (const ContextSpace *ctx = contexts_.Find(*item)) {
        // Each request escalates one step further down the lifecycle.
        static constexpr ContextState kNext[] = {ContextState::kHidden,
                                                 ContextState::kArchived,
                                                 ContextState::kDeleted,
                                                 ContextState::kDeleted};
        contexts_.SetState(context_env, ctx->id, kNext[static_cast<int>(ctx->state)], t);
      } else {
        graph_.MarkDeleted(*item);
      }
    }
  } else if (event.type == EventType::kCalendarEnd) {
    if (item) buoyancy_.SetFinished(*item, true);
  } else if (event.context_hint) {
    const EntityId ctx = *ResolveContext(*event.context_hint);
    if (!usable(ctx)) {
      throw Error(ErrorCode::kContextImmutable,
                  ctx.str() + " is " +
                      std::string(ContextStateName(contexts_.Get(ctx).state)));
    }
    if (contexts_.current() != ctx) contexts_.Switch(context_env, ctx, t);
    if (event.type == EventType::kDragToContext) {
      contexts_.ModifyMembership(context_env, ctx, *item, MembershipAction::kAdd, t);
    } else if (attachable) {
      contexts_.Attach(context_env, ctx, *item, t);
      contexts_.Touch(ctx, *item, t);
    }
    summary.context_decision = "explicit";
  } else {
    const std::string snippet =
        event.text ? *event.text : (item_thing ? item_thing->primary_label : "");
    const ElicitationResult result = contexts_.Elicit(graph_, buoyancy_, evidence, snippet, t);
    summary.context_decision = std::string(ElicitationDecisionName(result.decision));
    if (result.decision == ElicitationDecision::kSwitch) {
      contexts_.Switch(context_env, *result.target, t);
    } else if (result.decision == ElicitationDecision::kProposeNew && item_thing &&
               CanNucleate(*item_thing)) {
      const EntityId ctx = contexts_.Spawn(context_env, *item, t).id;
      if (usable(ctx)) contexts_.Switch(context_env, ctx, t);
    }
    if (contexts_.current() && attachable) {
      contexts_.Attach(context_env, *contexts_.current(), *item, t);
      contexts_.Touch(*contexts_.current(), *item, t);
    }
  }
  summary.context = contexts_.current();

  // Buoyancy.
  std::set<EntityId> touched;
  auto note = [&](const MbUpdates &updates) {
    for (const auto &[id, mb] : updates) touched.insert(id);
  };
  const std::optional<StimulusKind> kind = StimulusFor(event.type);
  const bool item_live = item && !graph_.Get(*item).deleted;
  if (event.type == EventType::kDragToContext) {
    touched.insert(*item);
    touched.insert(*summary.context);
  } else if (item_live && kind) {
    note(buoyancy_.Stimulate(graph_, *item, *kind, t));
  }
  const double mention_base = buoyancy_.params().base(kind.value_or(StimulusKind::kClick));
  for (const Mention &m : mentions) {
    if ((item && m.entity == *item) || graph_.Get(m.entity).deleted) continue;
    note(buoyancy_.StimulateWithStrength(graph_, m.entity, mention_base * m.score, t));
  }
  if (summary.context && event.type != EventType::kDragToContext &&
      !graph_.Get(*summary.context).deleted) {
    const StimulusKind ctx_kind = event.type == EventType::kSwitchContext
                                      ? StimulusKind::kOpen
                                      : StimulusKind::kClick;
    note(buoyancy_.Stimulate(graph_, *summary.context, ctx_kind, t));
  }
  for (const Stimulus &s : buoyancy_.ApplyCalendarEffects(graph_, t)) touched.insert(s.node);
  for (const auto &id : touched) {
    summary.mb_updates.emplace_back(id, buoyancy_.CurrentMb(graph_, id, t));
  }

  // Usage statistics for preservation.
  if (item && event.type != EventType::kDeleteRequest) RecordUsage(event, *item);
  return summary;
}

SearchResult Engine::Query(SearchQuery query) const {
  return index_.Query(query, [this](const EntityId &id) { return CurrentMb(id); });
}

std::vector<PVAssessment> Engine::AssessItems(const std::vector<EntityId> &items,
                                              Persona persona, double threshold) const {
  const PersonaStrategy &strategy = config_.preservation.strategy(persona);
  const MbLookup mb = [this](const EntityId &id) { return CurrentMb(id); };
  std::vector<PVAssessment> out;
  out.reserve(items.size());
  static const UsageStats kNoUsage;
  for (const auto &id : items) {
    auto it = usage_.find(id);
    const UsageStats &stats = it == usage_.end() ? kNoUsage : it->second;
    const DimensionScores dims =
        ComputeDimensionScores(graph_, id, stats, mb, config_.preservation);
    PVAssessment a = ComputePv(id, dims, strategy, threshold);
    a.persona = persona;
    out.push_back(std::move(a));
  }
  return out;
}

TimeCapsule Engine::Assess(Persona persona, double threshold) const {
  std::vector<EntityId> items;
  for (const auto &[id, thing] : graph_.things()) {
    if (!thing.deleted && IsResource(thing.kind)) items.push_back(id);
  }
  return PartitionTimeCapsule(graph_, AssessItems(items, persona, threshold),
                              config_.preservation.strategy(persona), threshold);
}

InjectionViews Engine::Injections(const EntityId &ctx) const {
  return contexts_.ComputeInjections(graph_, buoyancy_, ctx,
                                     config_.context.forgotten_threshold, now_);
}

void Engine::SetUsage(const EntityId &item, UsageStats stats) {
  graph_.Get(item);
  usage_[item] = std::move(stats);
}

void Engine::Refresh() {
  dictionary_.Update(graph_);
  for (const auto &[id, thing] : graph_.things()) {
    if (IsResource(thing.kind)) Reindex(id, nullptr);
  }
}

std::vector<ActivityEvent> ReadEventLog(std::istream &in, double reorder_window_s) {
  std::vector<ActivityEvent> events;
  std::string line;
  int64_t line_no = 0;
  std::optional<Timestamp> max_ts;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      ActivityEvent event = ParseEventLine(line);
      if (max_ts && event.ts < *max_ts - reorder_window_s) {
        throw Error(ErrorCode::kOutOfOrder,
                    "timestamp " + FormatNumber(event.ts) + " outside the reorder window");
      }
      max_ts = std::max(max_ts.value_or(event.ts), event.ts);
      events.push_back(std::move(event));
    } catch (const Error &e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.message());
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const ActivityEvent &a, const ActivityEvent &b) { return a.ts < b.ts; });
  return events;
}

std::string Checksum(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef *>(data.data()),
              static_cast<uInt>(data.size()));
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%08lx", static_cast<unsigned long>(crc));
  return buffer;
}

}  // namespace mf
