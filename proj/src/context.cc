#include "mf/context.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "mf/errors.h"
#include "mf/normalize.h"

namespace mf {
namespace {

constexpr std::array<std::string_view, 4> kStateNames = {"active", "hidden",
                                                         "archived", "deleted"};

constexpr std::array<std::string_view, kAspectCount> kAspectNames = {
    "organizational", "historical",  "causal",    "informational",
    "operational",    "behavioral",  "environmental", "attentional",
    "hierarchy",      "forgetting",  "focal"};

const PredicateSet kConceptLinks = {Predicate::kHasTopic, Predicate::kHasSuggestedTopic};

void SortByMb(std::vector<ScoredItem> &items) {
  std::sort(items.begin(), items.end(), [](const ScoredItem &a, const ScoredItem &b) {
    if (a.mb != b.mb) return a.mb > b.mb;
    return a.item < b.item;
  });
}

void AddCounts(std::map<std::string, int64_t> &into,
               const std::map<std::string, int64_t> &counts, int64_t sign) {
  for (const auto &[term, count] : counts) {
    auto &slot = into[term];
    slot += sign * count;
    if (slot == 0) into.erase(term);
  }
}

}  // namespace

std::string_view ContextStateName(ContextState s) {
  return kStateNames[static_cast<std::size_t>(s)];
}

std::optional<ContextState> ParseContextState(std::string_view name) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == name) return static_cast<ContextState>(i);
  }
  return std::nullopt;
}

bool IsLegalTransition(ContextState from, ContextState to) {
  if (from == to) return true;
  switch (from) {
    case ContextState::kActive:
      return to == ContextState::kHidden;
    case ContextState::kHidden:
      return to == ContextState::kActive || to == ContextState::kArchived;
    case ContextState::kArchived:
      return to == ContextState::kDeleted;
    case ContextState::kDeleted:
      return false;
  }
  return false;
}

std::string_view AspectName(Aspect a) {
  return kAspectNames[static_cast<std::size_t>(a)];
}

std::optional<Aspect> ParseAspect(std::string_view name) {
  for (std::size_t i = 0; i < kAspectNames.size(); ++i) {
    if (kAspectNames[i] == name) return static_cast<Aspect>(i);
  }
  return std::nullopt;
}

std::string_view ElicitationDecisionName(ElicitationDecision d) {
  switch (d) {
    case ElicitationDecision::kSame:
      return "same";
    case ElicitationDecision::kSwitch:
      return "switch";
    case ElicitationDecision::kProposeNew:
      return "propose_new";
  }
  return "same";
}

double Cosine(const std::map<std::string, int64_t> &a,
              const std::map<std::string, int64_t> &b) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0, na = 0, nb = 0;
  for (const auto &[term, count] : a) {
    na += static_cast<double>(count) * count;
    if (auto it = b.find(term); it != b.end()) {
      dot += static_cast<double>(count) * it->second;
    }
  }
  for (const auto &[term, count] : b) nb += static_cast<double>(count) * count;
  if (na <= 0 || nb <= 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

const ContextSpace *ContextManager::Find(const EntityId &ctx) const {
  auto it = contexts_.find(ctx);
  return it == contexts_.end() ? nullptr : &it->second;
}

std::optional<EntityId> ContextManager::ContextOfNucleus(const EntityId &nucleus) const {
  auto it = by_nucleus_.find(nucleus);
  if (it == by_nucleus_.end()) return std::nullopt;
  return it->second;
}

const ContextSpace &ContextManager::Get(const EntityId &ctx) const {
  const ContextSpace *space = Find(ctx);
  if (!space) throw Error(ErrorCode::kUnknownEntity, "no context " + ctx.str());
  return *space;
}

ContextSpace &ContextManager::Mutable(const EntityId &ctx) {
  auto it = contexts_.find(ctx);
  if (it == contexts_.end()) {
    throw Error(ErrorCode::kUnknownEntity, "no context " + ctx.str());
  }
  return it->second;
}

void ContextManager::AddAspect(const EntityId &ctx, Aspect aspect, Timestamp t,
                               std::string note) {
  Mutable(ctx).aspects[aspect].push_back({t, std::move(note)});
}

ContextSpace &ContextManager::Create(ContextEnv env, std::string label, Timestamp t) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "mf:context/%06llu",
                static_cast<unsigned long long>(next_serial_++));
  Thing thing;
  thing.id = EntityId(buffer);
  thing.kind = ThingKind::kContext;
  thing.primary_label = std::move(label);
  thing.created_at = t;
  env.graph.AddThing(thing);
  ContextSpace space;
  space.id = thing.id;
  space.created_at = t;
  space.last_touched = t;
  return contexts_.emplace(thing.id, std::move(space)).first->second;
}

void ContextManager::AddMember(ContextEnv env, ContextSpace &ctx,
                               const EntityId &item, Membership membership) {
  if (!ctx.members.emplace(item, membership).second) return;
  env.graph.AddEdge(item, Predicate::kIsContainedIn, ctx.id, membership.added_at);
  if (const auto *indexed = env.index.Find(item)) {
    AddCounts(ctx.term_profile, indexed->term_counts, +1);
  }
}

const ContextSpace &ContextManager::Spawn(ContextEnv env, const EntityId &nucleus,
                                          Timestamp t) {
  const Thing &anchor = env.graph.Get(nucleus);
  if (auto it = by_nucleus_.find(nucleus); it != by_nucleus_.end()) {
    return Get(it->second);
  }
  std::string text;
  for (const char *key : {"description", "text"}) {
    if (auto it = anchor.attributes.find(key); it != anchor.attributes.end()) {
      if (!text.empty()) text += "\n";
      text += it->second;
    }
  }
  // Annotate before the context thing exists; the dictionary would be stale.
  std::vector<Mention> mentions;
  if (!text.empty()) mentions = Annotate(text, env.dictionary, env.graph);

  ContextSpace &ctx = Create(env, "Context: " + anchor.primary_label, t);
  ctx.nucleus = nucleus;
  by_nucleus_[nucleus] = ctx.id;
  env.graph.AddEdge(nucleus, Predicate::kNucleusOf, ctx.id, t);
  for (const Mention &m : mentions) {
    if (m.entity == nucleus) continue;
    const Thing &thing = env.graph.Get(m.entity);
    if (thing.deleted || thing.kind == ThingKind::kContext) continue;
    if (IsResource(thing.kind)) {
      AddMember(env, ctx, m.entity, {t, AddedBy::kSystem});
    } else if (thing.kind != ThingKind::kCollection) {
      AddAbout(ctx, m.entity);
    }
  }
  ctx.aspects[Aspect::kHistorical].push_back({t, "spawned from " + nucleus.str()});
  Record({t, "spawn", ctx.id, nucleus.str(), std::nullopt, ContextState::kActive});
  return ctx;
}

const ContextSpace &ContextManager::ModifyMembership(ContextEnv env,
                                                     const EntityId &ctx_id,
                                                     const EntityId &item,
                                                     MembershipAction action,
                                                     Timestamp t, AddedBy by) {
  ContextSpace &ctx = Mutable(ctx_id);
  if (ctx.state == ContextState::kArchived || ctx.state == ContextState::kDeleted) {
    throw Error(ErrorCode::kContextImmutable,
                ctx_id.str() + " is " + std::string(ContextStateName(ctx.state)));
  }
  env.graph.Get(item);
  if (item == ctx_id) {
    throw Error(ErrorCode::kInvariantViolation, "a context cannot contain itself");
  }
  if (action == MembershipAction::kAdd) {
    const bool fresh = !ctx.members.count(item);
    AddMember(env, ctx, item, {t, by});
    env.buoyancy.Stimulate(env.graph, item, StimulusKind::kDragToContext, t);
    env.buoyancy.Stimulate(env.graph, ctx_id, StimulusKind::kDragToContext, t);
    if (fresh) {
      ctx.aspects[Aspect::kOrganizational].push_back({t, "added " + item.str()});
    }
    Touch(ctx_id, item, t);
  } else {
    auto it = ctx.members.find(item);
    if (it == ctx.members.end()) return ctx;
    ctx.members.erase(it);
    env.graph.RemoveEdge(item, Predicate::kIsContainedIn, ctx_id);
    std::erase(ctx.last_focus, item);
    if (const auto *indexed = env.index.Find(item)) {
      AddCounts(ctx.term_profile, indexed->term_counts, -1);
    }
    ctx.aspects[Aspect::kOrganizational].push_back({t, "removed " + item.str()});
  }
  return ctx;
}

void ContextManager::Attach(ContextEnv env, const EntityId &ctx_id,
                            const EntityId &item, Timestamp t) {
  ContextSpace &ctx = Mutable(ctx_id);
  if (ctx.state == ContextState::kArchived || ctx.state == ContextState::kDeleted) {
    throw Error(ErrorCode::kContextImmutable, ctx_id.str());
  }
  if (item == ctx_id || ctx.members.count(item)) return;
  AddMember(env, ctx, item, {t, AddedBy::kSystem});
  ctx.aspects[Aspect::kOrganizational].push_back({t, "attached " + item.str()});
}

std::set<EntityId> ContextManager::ConceptsOf(const Graph &graph,
                                              const ContextSpace &ctx) const {
  std::set<EntityId> concepts = ctx.is_about;
  for (const auto &[member, membership] : ctx.members) {
    for (const Neighbor &n : graph.Neighbors(member, kConceptLinks, Direction::kOut)) {
      concepts.insert(n.thing->id);
    }
  }
  return concepts;
}

ElicitationResult ContextManager::Elicit(const Graph &graph, const Buoyancy &buoyancy,
                                         const std::vector<EntityId> &mentions,
                                         std::string_view snippet,
                                         Timestamp t) const {
  const std::set<EntityId> mentioned(mentions.begin(), mentions.end());
  std::map<std::string, int64_t> terms;
  for (auto &token : Normalize(snippet)) ++terms[std::move(token)];

  ElicitationResult result;
  const ContextSpace *top = nullptr;
  double top_score = -1;
  for (const auto &[id, ctx] : contexts_) {
    if (ctx.state != ContextState::kActive && ctx.state != ContextState::kHidden) {
      continue;
    }
    double jaccard = 0;
    if (!mentioned.empty()) {
      const std::set<EntityId> concepts = ConceptsOf(graph, ctx);
      std::size_t overlap = 0;
      for (const auto &m : mentioned) overlap += concepts.count(m);
      jaccard = static_cast<double>(overlap) / (mentioned.size() + concepts.size() - overlap);
    }
    const double cosine = Cosine(terms, ctx.term_profile);
    const double idle = static_cast<double>(
        buoyancy.clock().ActiveDaysBetween(ctx.last_touched, t));
    const double recency = std::exp(-idle / params_.recency_scale_days);
    const double score = params_.jaccard_weight * jaccard +
                         params_.cosine_weight * cosine +
                         params_.recency_weight * recency;
    result.scores[id] = score;
    if (!top || score > top_score ||
        (score == top_score && ctx.last_touched > top->last_touched)) {
      top = &ctx;
      top_score = score;
    }
  }
  if (!top) {
    result.decision = ElicitationDecision::kProposeNew;
    return result;
  }
  std::optional<double> current_score;
  if (current_) {
    if (auto it = result.scores.find(*current_); it != result.scores.end()) {
      current_score = it->second;
    }
  }
  result.margin = top_score - current_score.value_or(0.0);
  if (current_score && result.margin <= params_.margin) {
    result.decision = ElicitationDecision::kSame;
  } else if (top_score >= params_.switch_threshold && result.margin >= params_.margin) {
    result.decision = ElicitationDecision::kSwitch;
    result.target = top->id;
  } else if (top_score < params_.new_threshold) {
    result.decision = ElicitationDecision::kProposeNew;
  } else {
    result.decision = ElicitationDecision::kSame;
  }
  return result;
}

InjectionViews ContextManager::Switch(ContextEnv env, const EntityId &ctx_id,
                                      Timestamp t) {
  env.graph.Get(ctx_id);
  ContextSpace &ctx = Mutable(ctx_id);
  if (ctx.state == ContextState::kArchived || ctx.state == ContextState::kDeleted) {
    throw Error(ErrorCode::kContextImmutable,
                ctx_id.str() + " is " + std::string(ContextStateName(ctx.state)));
  }
  if (ctx.state == ContextState::kHidden) SetState(env, ctx_id, ContextState::kActive, t);
  const std::string from = current_ ? current_->str() : "";
  current_ = ctx_id;
  ctx.last_touched = std::max(ctx.last_touched, t);
  ctx.aspects[Aspect::kHistorical].push_back({t, "switched from " + from});
  Record({t, "switch", ctx_id, from, std::nullopt, std::nullopt});
  return ComputeInjections(env.graph, env.buoyancy, ctx_id,
                           params_.forgotten_threshold, t);
}

std::vector<EntityId> ContextManager::Parents(const Graph &graph,
                                              const EntityId &ctx) const {
  std::vector<EntityId> parents;
  for (const Neighbor &n : graph.Neighbors(ctx, PredicateSet{Predicate::kSubContextOf},
                                           Direction::kOut)) {
    parents.push_back(n.thing->id);
  }
  return parents;
}

void ContextManager::Retire(ContextEnv env, const EntityId &ctx, Timestamp t) {
  if (Get(ctx).state == ContextState::kActive) {
    SetState(env, ctx, ContextState::kHidden, t);
  }
  if (Get(ctx).state == ContextState::kHidden) {
    SetState(env, ctx, ContextState::kArchived, t);
  }
}

std::pair<EntityId, EntityId> ContextManager::Split(
    ContextEnv env, const EntityId &ctx_id,
    const std::map<EntityId, SplitSide> &assignment, Timestamp t) {
  const ContextSpace &original = Get(ctx_id);
  if (original.state == ContextState::kArchived ||
      original.state == ContextState::kDeleted) {
    throw Error(ErrorCode::kContextImmutable, ctx_id.str());
  }
  for (const auto &[member, membership] : original.members) {
    if (!assignment.count(member)) {
      throw Error(ErrorCode::kIncompleteAssignment,
                  "no side for member " + member.str());
    }
  }
  const std::string label = env.graph.Get(ctx_id).primary_label;
  const std::vector<EntityId> parents = Parents(env.graph, ctx_id);
  const std::map<EntityId, Membership> members = original.members;
  const std::set<EntityId> about = original.is_about;

  EntityId side_ids[2];
  for (int side = 0; side < 2; ++side) {
    ContextSpace &part =
        Create(env, label + (side == 0 ? " (left)" : " (right)"), t);
    side_ids[side] = part.id;
    const SplitSide wanted = side == 0 ? SplitSide::kLeft : SplitSide::kRight;
    for (const auto &[member, membership] : members) {
      if (assignment.at(member) == wanted) AddMember(env, part, member, membership);
    }
    for (const auto &concept_id : about) {
      bool linked = false;
      for (const Neighbor &n : env.graph.Neighbors(concept_id)) {
        if (part.members.count(n.thing->id)) {
          linked = true;
          break;
        }
      }
      if (linked) AddAbout(part, concept_id);
    }
    for (const auto &parent : parents) {
      env.graph.AddEdge(part.id, Predicate::kSubContextOf, parent, t);
    }
    part.aspects[Aspect::kHierarchy].push_back({t, "split from " + ctx_id.str()});
  }
  AddAspect(ctx_id, Aspect::kHierarchy, t,
            "split into " + side_ids[0].str() + " and " + side_ids[1].str());
  Record({t, "split", ctx_id, side_ids[0].str() + " " + side_ids[1].str(),
          std::nullopt, std::nullopt});
  Retire(env, ctx_id, t);
  return {side_ids[0], side_ids[1]};
}

EntityId ContextManager::Merge(ContextEnv env, const EntityId &a_id,
                               const EntityId &b_id, Timestamp t) {
  if (a_id == b_id) throw Error(ErrorCode::kSameContext, a_id.str());
  const ContextSpace &a = Get(a_id);
  const ContextSpace &b = Get(b_id);
  for (const ContextSpace *c : {&a, &b}) {
    if (c->state == ContextState::kDeleted) {
      throw Error(ErrorCode::kContextImmutable, c->id.str() + " is deleted");
    }
  }
  const bool a_older =
      a.created_at < b.created_at || (a.created_at == b.created_at && a.id < b.id);
  const ContextSpace &older = a_older ? a : b;
  const std::optional<EntityId> nucleus = older.nucleus;

  std::map<EntityId, Membership> members = a.members;
  for (const auto &[item, m] : b.members) {
    auto [it, inserted] = members.emplace(item, m);
    if (!inserted) {
      it->second.added_at = std::min(it->second.added_at, m.added_at);
      if (m.added_by == AddedBy::kUser) it->second.added_by = AddedBy::kUser;
    }
  }
  std::set<EntityId> about = a.is_about;
  about.insert(b.is_about.begin(), b.is_about.end());
  std::vector<EntityId> focus;
  for (const auto *list : {&a.last_focus, &b.last_focus}) {
    for (const auto &item : *list) {
      if (std::find(focus.begin(), focus.end(), item) == focus.end()) {
        focus.push_back(item);
      }
    }
  }
  std::set<EntityId> parents;
  for (const auto &p : Parents(env.graph, a_id)) parents.insert(p);
  for (const auto &p : Parents(env.graph, b_id)) parents.insert(p);
  parents.erase(a_id);
  parents.erase(b_id);
  const std::string label = env.graph.Get(older.id).primary_label;
  const EntityId older_id = older.id;

  ContextSpace &merged = Create(env, label + " (merged)", t);
  const EntityId merged_id = merged.id;
  for (const auto &[item, m] : members) AddMember(env, merged, item, m);
  for (const auto &concept_id : about) AddAbout(merged, concept_id);
  if (static_cast<int>(focus.size()) > params_.focus_size) focus.resize(params_.focus_size);
  merged.last_focus = std::move(focus);
  for (const auto &parent : parents) {
    env.graph.AddEdge(merged_id, Predicate::kSubContextOf, parent, t);
  }
  if (nucleus) {
    env.graph.RemoveEdge(*nucleus, Predicate::kNucleusOf, older_id);
    env.graph.AddEdge(*nucleus, Predicate::kNucleusOf, merged_id, t);
    merged.nucleus = nucleus;
    Mutable(older_id).nucleus.reset();
    by_nucleus_[*nucleus] = merged_id;
  }
  merged.aspects[Aspect::kHierarchy].push_back(
      {t, "merged from " + a_id.str() + " and " + b_id.str()});
  for (const EntityId &source : {a_id, b_id}) {
    AddAspect(source, Aspect::kHierarchy, t, "merged into " + merged_id.str());
  }
  Record({t, "merge", merged_id, a_id.str() + " " + b_id.str(), std::nullopt,
          std::nullopt});
  const bool was_current = current_ && (*current_ == a_id || *current_ == b_id);
  Retire(env, a_id, t);
  Retire(env, b_id, t);
  if (was_current) current_ = merged_id;
  return merged_id;
}

const ContextSpace &ContextManager::SetState(ContextEnv env, const EntityId &ctx_id,
                                             ContextState to, Timestamp t) {
  ContextSpace &ctx = Mutable(ctx_id);
  const ContextState from = ctx.state;
  if (!IsLegalTransition(from, to)) {
    throw Error(ErrorCode::kIllegalTransition,
                ctx_id.str() + ": " + std::string(ContextStateName(from)) + " -> " +
                    std::string(ContextStateName(to)));
  }
  if (from == to) return ctx;
  ctx.state = to;
  if (to == ContextState::kDeleted) {
    for (const auto &[item, m] : ctx.members) {
      env.graph.RemoveEdge(item, Predicate::kIsContainedIn, ctx_id);
      ctx.tombstone_members.push_back(item);
    }
    ctx.members.clear();
    ctx.last_focus.clear();
    ctx.term_profile.clear();
    env.graph.MarkDeleted(ctx_id);
  }
  if (to != ContextState::kActive && current_ == ctx_id) current_.reset();
  ctx.aspects[Aspect::kForgetting].push_back(
      {t, std::string(ContextStateName(from)) + " -> " +
              std::string(ContextStateName(to))});
  Record({t, "state", ctx_id, "", from, to});
  return ctx;
}

InjectionViews ContextManager::ComputeInjections(const Graph &graph,
                                                 const Buoyancy &buoyancy,
                                                 const EntityId &ctx_id,
                                                 double forgotten_threshold,
                                                 Timestamp t) const {
  graph.Get(ctx_id);
  const ContextSpace &ctx = Get(ctx_id);
  InjectionViews views;
  views.context = ctx_id;
  views.last_focus = ctx.last_focus;
  for (const auto &[item, m] : ctx.members) {
    const double mb = buoyancy.CurrentMb(graph, item, t);
    (mb >= forgotten_threshold ? views.current : views.forgotten).push_back({item, mb});
  }
  SortByMb(views.current);
  SortByMb(views.forgotten);

  // A forgotten item is cross-context hot when one of its concepts is a hot
  // is-about concept of another active context.
  std::map<EntityId, bool> hot;
  auto is_hot = [&](const EntityId &c) {
    auto [it, fresh] = hot.try_emplace(c, false);
    if (!fresh) return it->second;
    auto about = about_index_.find(c);
    if (about == about_index_.end()) return false;
    if (buoyancy.CurrentMb(graph, c, t) < params_.hot_mb) return false;
    for (const auto &id : about->second) {
      if (id != ctx_id && Get(id).state == ContextState::kActive) return it->second = true;
    }
    return false;
  };
  for (const auto &entry : views.forgotten) {
    for (const Neighbor &n : graph.Neighbors(entry.item, kConceptLinks, Direction::kOut)) {
      if (is_hot(n.thing->id)) {
        views.cross_context_hot.push_back(entry.item);
        break;
      }
    }
  }
  return views;
}

std::vector<OverviewEntry> ContextManager::Overview(const Graph &graph,
                                                    const Buoyancy &buoyancy,
                                                    Timestamp t,
                                                    std::size_t budget) const {
  std::vector<OverviewEntry> entries;
  for (const auto &[id, ctx] : contexts_) {
    if (ctx.state != ContextState::kActive) continue;
    entries.push_back({id, buoyancy.CurrentMb(graph, id, t), ctx.last_touched, true});
  }
  std::sort(entries.begin(), entries.end(),
            [](const OverviewEntry &a, const OverviewEntry &b) {
              if (a.mb != b.mb) return a.mb > b.mb;
              if (a.last_touched != b.last_touched) return a.last_touched > b.last_touched;
              return a.context < b.context;
            });
  for (std::size_t i = budget; i < entries.size(); ++i) entries[i].shown = false;
  return entries;
}

std::vector<FlatViewEntry> ContextManager::FlatView(const Graph &graph,
                                                    const Buoyancy &buoyancy,
                                                    const EntityId &ctx_id,
                                                    std::size_t budget,
                                                    Timestamp t) const {
  graph.Get(ctx_id);
  Get(ctx_id);
  std::vector<FlatViewEntry> collected;
  std::set<EntityId> seen_items;
  std::set<EntityId> visited;
  std::vector<EntityId> path;
  auto visit = [&](auto &&self, const EntityId &id) -> void {
    if (!visited.insert(id).second) return;
    const ContextSpace *ctx = Find(id);
    if (!ctx || ctx->state == ContextState::kDeleted) return;
    path.push_back(id);
    for (const auto &[item, m] : ctx->members) {
      if (seen_items.insert(item).second) {
        collected.push_back({item, buoyancy.CurrentMb(graph, item, t), path});
      }
    }
    for (const Neighbor &n : graph.Neighbors(id, PredicateSet{Predicate::kSubContextOf},
                                             Direction::kIn)) {
      self(self, n.thing->id);
    }
    path.pop_back();
  };
  visit(visit, ctx_id);
  std::sort(collected.begin(), collected.end(),
            [](const FlatViewEntry &a, const FlatViewEntry &b) {
              if (a.mb != b.mb) return a.mb > b.mb;
              return a.item < b.item;
            });
  if (collected.size() > budget) collected.resize(budget);
  return collected;
}

void ContextManager::Touch(const EntityId &ctx_id, const EntityId &item, Timestamp t) {
  ContextSpace &ctx = Mutable(ctx_id);
  ctx.last_touched = std::max(ctx.last_touched, t);
  if (!ctx.members.count(item)) return;
  std::erase(ctx.last_focus, item);
  ctx.last_focus.insert(ctx.last_focus.begin(), item);
  if (static_cast<int>(ctx.last_focus.size()) > params_.focus_size) {
    ctx.last_focus.resize(params_.focus_size);
  }
}

void ContextManager::ApplyTermDelta(const EntityId &item,
                                    const std::map<std::string, int64_t> &delta) {
  for (auto &[id, ctx] : contexts_) {
    if (ctx.members.count(item)) AddCounts(ctx.term_profile, delta, +1);
  }
}

void ContextManager::Restore(std::map<EntityId, ContextSpace> contexts,
                             std::optional<EntityId> current,
                             std::vector<TimelineRecord> timeline,
                             uint64_t next_serial) {
  contexts_ = std::move(contexts);
  current_ = std::move(current);
  timeline_ = std::move(timeline);
  next_serial_ = next_serial;
  by_nucleus_.clear();
  about_index_.clear();
  for (const auto &[id, ctx] : contexts_) {
    if (ctx.nucleus) by_nucleus_[*ctx.nucleus] = id;
    for (const auto &c : ctx.is_about) about_index_[c].insert(id);
  }
}

void ContextManager::AddAbout(ContextSpace &ctx, const EntityId &concept_id) {
  ctx.is_about.insert(concept_id);
  about_index_[concept_id].insert(ctx.id);
}

}  // namespace mf
