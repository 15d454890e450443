#include <string>

#include <nlohmann/json.hpp>

#include "mf/engine.h"
#include "mf/errors.h"

namespace mf {
namespace {

using nlohmann::json;

constexpr std::string_view kChecksumPrefix = "checksum crc32 ";

json OptionalJson(const std::optional<EntityId> &id) {
  return id ? json(id->str()) : json(nullptr);
}

template <typename T>
json OptionalJson(const std::optional<T> &value) {
  return value ? json(*value) : json(nullptr);
}

std::optional<EntityId> OptionalId(const json &j) {
  if (j.is_null()) return std::nullopt;
  return EntityId(j.get<std::string>());
}

template <typename T>
std::optional<T> OptionalValue(const json &j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

json IdList(const std::vector<EntityId> &ids) {
  json out = json::array();
  for (const auto &id : ids) out.push_back(id.str());
  return out;
}

std::vector<EntityId> ParseIdList(const json &j) {
  std::vector<EntityId> out;
  for (const auto &v : j) out.emplace_back(v.get<std::string>());
  return out;
}

json GraphJson(const Graph &graph) {
  json things = json::array();
  for (const auto &id : graph.insertion_order()) {
    const Thing &t = graph.Get(id);
    things.push_back({{"id", t.id.str()},
                      {"kind", std::string(ThingKindName(t.kind))},
                      {"label", t.primary_label},
                      {"alt_labels", t.alt_labels},
                      {"created_at", t.created_at},
                      {"attributes", t.attributes},
                      {"deleted", t.deleted}});
  }
  json edges = json::array();
  for (const Edge &e : graph.Edges()) {
    edges.push_back({{"s", e.subject.str()},
                     {"p", std::string(PredicateName(e.predicate))},
                     {"o", e.object.str()},
                     {"created_at", e.created_at},
                     {"weight", e.weight}});
  }
  return {{"things", things},
          {"edges", edges},
          {"version", graph.version()},
          {"purge_epoch", graph.purge_epoch()}};
}

void RestoreGraph(const json &j, Graph &graph) {
  std::vector<EntityId> deleted;
  for (const auto &tj : j.at("things")) {
    Thing t;
    t.id = EntityId(tj.at("id").get<std::string>());
    auto kind = ParseThingKind(tj.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::kCorruptSnapshot, "bad thing kind");
    t.kind = *kind;
    t.primary_label = tj.at("label").get<std::string>();
    t.alt_labels = tj.at("alt_labels").get<std::vector<std::string>>();
    t.created_at = tj.at("created_at").get<double>();
    t.attributes = tj.at("attributes").get<std::map<std::string, std::string>>();
    if (tj.at("deleted").get<bool>()) deleted.push_back(t.id);
    graph.AddThing(std::move(t));
  }
  for (const auto &id : deleted) graph.MarkDeleted(id);
  for (const auto &ej : j.at("edges")) {
    auto p = ParsePredicate(ej.at("p").get<std::string>());
    if (!p) throw Error(ErrorCode::kCorruptSnapshot, "bad predicate");
    graph.AddEdge(EntityId(ej.at("s").get<std::string>()), *p,
                  EntityId(ej.at("o").get<std::string>()),
                  ej.at("created_at").get<double>(), ej.at("weight").get<double>());
  }
  graph.RestoreCounters(j.at("version").get<uint64_t>(),
                        j.at("purge_epoch").get<uint64_t>());
}

json BuoyancyJson(const Buoyancy &buoyancy) {
  json clock = json::array();
  for (const auto &[day, count] : buoyancy.clock().counts()) clock.push_back({day, count});
  json states = json::object();
  for (const auto &[id, s] : buoyancy.states()) {
    states[id.str()] = {{"mb", s.mb},
                        {"last_stim", s.last_stim},
                        {"day", s.day},
                        {"day_accum", s.day_accum},
                        {"burst_last", OptionalJson(s.burst_last)},
                        {"finished", s.finished},
                        {"stimulated", s.stimulated},
                        {"anticipated_day", OptionalJson(s.anticipated_day)}};
  }
  return {{"clock", clock}, {"states", states}};
}

void RestoreBuoyancy(const json &j, Buoyancy &buoyancy) {
  std::map<int64_t, int64_t> counts;
  for (const auto &entry : j.at("clock")) {
    counts[entry.at(0).get<int64_t>()] = entry.at(1).get<int64_t>();
  }
  buoyancy.clock().Restore(std::move(counts));
  for (const auto &[id, sj] : j.at("states").items()) {
    MBState s;
    s.mb = sj.at("mb").get<double>();
    s.last_stim = sj.at("last_stim").get<double>();
    s.day = sj.at("day").get<int64_t>();
    s.day_accum = sj.at("day_accum").get<double>();
    s.burst_last = OptionalValue<double>(sj.at("burst_last"));
    s.finished = sj.at("finished").get<bool>();
    s.stimulated = sj.at("stimulated").get<bool>();
    s.anticipated_day = OptionalValue<int64_t>(sj.at("anticipated_day"));
    buoyancy.RestoreState(EntityId(id), s);
  }
}

json ContextsJson(const ContextManager &contexts) {
  json spaces = json::object();
  for (const auto &[id, c] : contexts.contexts()) {
    json members = json::object();
    for (const auto &[item, m] : c.members) {
      members[item.str()] = {{"added_at", m.added_at},
                             {"added_by", m.added_by == AddedBy::kUser ? "user" : "system"}};
    }
    json about = json::array();
    for (const auto &a : c.is_about) about.push_back(a.str());
    json aspects = json::object();
    for (const auto &[aspect, entries] : c.aspects) {
      json list = json::array();
      for (const auto &e : entries) list.push_back({{"t", e.t}, {"note", e.note}});
      aspects[std::string(AspectName(aspect))] = list;
    }
    spaces[id.str()] = {{"nucleus", OptionalJson(c.nucleus)},
                        {"members", members},
                        {"is_about", about},
                        {"state", std::string(ContextStateName(c.state))},
                        {"last_focus", IdList(c.last_focus)},
                        {"aspects", aspects},
                        {"created_at", c.created_at},
                        {"last_touched", c.last_touched},
                        {"tombstone_members", IdList(c.tombstone_members)},
                        {"term_profile", c.term_profile}};
  }
  json timeline = json::array();
  for (const auto &r : contexts.timeline()) {
    timeline.push_back(
        {{"t", r.t},
         {"kind", r.kind},
         {"context", r.context.str()},
         {"detail", r.detail},
         {"from", r.from ? json(std::string(ContextStateName(*r.from))) : json(nullptr)},
         {"to", r.to ? json(std::string(ContextStateName(*r.to))) : json(nullptr)}});
  }
  return {{"spaces", spaces},
          {"current", OptionalJson(contexts.current())},
          {"timeline", timeline},
          {"next_serial", contexts.next_serial()}};
}

ContextState ParseState(const json &j) {
  auto s = ParseContextState(j.get<std::string>());
  if (!s) throw Error(ErrorCode::kCorruptSnapshot, "bad context state");
  return *s;
}

void RestoreContexts(const json &j, ContextManager &contexts) {
  std::map<EntityId, ContextSpace> spaces;
  for (const auto &[id, cj] : j.at("spaces").items()) {
    ContextSpace c;
    c.id = EntityId(id);
    c.nucleus = OptionalId(cj.at("nucleus"));
    for (const auto &[item, mj] : cj.at("members").items()) {
      c.members[EntityId(item)] = {mj.at("added_at").get<double>(),
                                   mj.at("added_by").get<std::string>() == "user"
                                       ? AddedBy::kUser
                                       : AddedBy::kSystem};
    }
    for (const auto &a : cj.at("is_about")) c.is_about.emplace(a.get<std::string>());
    c.state = ParseState(cj.at("state"));
    c.last_focus = ParseIdList(cj.at("last_focus"));
    for (const auto &[name, list] : cj.at("aspects").items()) {
      auto aspect = ParseAspect(name);
      if (!aspect) throw Error(ErrorCode::kCorruptSnapshot, "bad aspect " + name);
      for (const auto &e : list) {
        c.aspects[*aspect].push_back({e.at("t").get<double>(), e.at("note").get<std::string>()});
      }
    }
    c.created_at = cj.at("created_at").get<double>();
    c.last_touched = cj.at("last_touched").get<double>();
    c.tombstone_members = ParseIdList(cj.at("tombstone_members"));
    c.term_profile = cj.at("term_profile").get<std::map<std::string, int64_t>>();
    spaces.emplace(c.id, std::move(c));
  }
  std::vector<TimelineRecord> timeline;
  for (const auto &rj : j.at("timeline")) {
    TimelineRecord r;
    r.t = rj.at("t").get<double>();
    r.kind = rj.at("kind").get<std::string>();
    r.context = EntityId(rj.at("context").get<std::string>());
    r.detail = rj.at("detail").get<std::string>();
    if (!rj.at("from").is_null()) r.from = ParseState(rj.at("from"));
    if (!rj.at("to").is_null()) r.to = ParseState(rj.at("to"));
    timeline.push_back(std::move(r));
  }
  contexts.Restore(std::move(spaces), OptionalId(j.at("current")), std::move(timeline),
                   j.at("next_serial").get<uint64_t>());
}

json UsageJson(const std::map<EntityId, UsageStats> &usage) {
  json out = json::object();
  for (const auto &[id, u] : usage) {
    out[id.str()] = {{"clicks", u.clicks},
                     {"views", u.views},
                     {"comment_chars", u.comment_chars},
                     {"tags", u.tags},
                     {"rating", OptionalJson(u.rating)},
                     {"revisit_days", u.revisit_days},
                     {"last_access_day", OptionalJson(u.last_access_day)}};
  }
  return out;
}

UsageStats ParseUsage(const json &u) {
  UsageStats s;
  s.clicks = u.at("clicks").get<int64_t>();
  s.views = u.at("views").get<int64_t>();
  s.comment_chars = u.at("comment_chars").get<int64_t>();
  s.tags = u.at("tags").get<int64_t>();
  s.rating = OptionalValue<int>(u.at("rating"));
  s.revisit_days = u.at("revisit_days").get<int64_t>();
  s.last_access_day = OptionalValue<int64_t>(u.at("last_access_day"));
  return s;
}

}  // namespace

json Engine::StateJson() const {
  json index = json::object();
  for (const auto &[id, entry] : index_.items()) {
    json concepts = json::array();
    for (const auto &c : entry.concepts) concepts.push_back(c.str());
    index[id.str()] = {{"text", entry.text}, {"concepts", concepts}};
  }
  return {{"format_version", kSnapshotFormatVersion},
          {"config", ConfigToJson(config_)},
          {"event_seq", seq_},
          {"now", now_},
          {"graph", GraphJson(graph_)},
          {"buoyancy", BuoyancyJson(buoyancy_)},
          {"contexts", ContextsJson(contexts_)},
          {"index", index},
          {"usage", UsageJson(usage_)}};
}

std::string Engine::SaveSnapshot() const {
  std::string body = StateJson().dump(1);
  body += '\n';
  std::string out = body;
  out += kChecksumPrefix;
  out += Checksum(body);
  out += '\n';
  return out;
}

Engine Engine::LoadSnapshot(std::string_view text) {
  while (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  const std::size_t cut = text.rfind('\n');
  if (cut == std::string_view::npos) {
    throw Error(ErrorCode::kCorruptSnapshot, "missing checksum line");
  }
  const std::string_view body = text.substr(0, cut + 1);
  const std::string_view trailer = text.substr(cut + 1);
  if (trailer.substr(0, kChecksumPrefix.size()) != kChecksumPrefix) {
    throw Error(ErrorCode::kCorruptSnapshot, "missing checksum line");
  }
  if (trailer.substr(kChecksumPrefix.size()) != Checksum(body)) {
    throw Error(ErrorCode::kCorruptSnapshot, "checksum mismatch");
  }
  json state = json::parse(body.begin(), body.end(), nullptr, false);
  if (state.is_discarded() || !state.is_object()) {
    throw Error(ErrorCode::kCorruptSnapshot, "body is not a JSON object");
  }
  auto version = state.find("format_version");
  if (version == state.end() || !version->is_number_integer()) {
    throw Error(ErrorCode::kCorruptSnapshot, "missing format_version");
  }
  if (version->get<int64_t>() != kSnapshotFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "snapshot format " + std::to_string(version->get<int64_t>()) +
                    ", expected " + std::to_string(kSnapshotFormatVersion));
  }
  try {
    Engine engine(ConfigFromJson(state.at("config")));
    RestoreGraph(state.at("graph"), engine.graph_);
    RestoreBuoyancy(state.at("buoyancy"), engine.buoyancy_);
    RestoreContexts(state.at("contexts"), engine.contexts_);
    for (const auto &[id, entry] : state.at("index").items()) {
      std::set<EntityId> concepts;
      for (const auto &c : entry.at("concepts")) concepts.emplace(c.get<std::string>());
      engine.index_.IndexItem(engine.graph_, EntityId(id), entry.at("text").get<std::string>(),
                              std::move(concepts));
    }
    for (const auto &[id, u] : state.at("usage").items()) {
      engine.usage_[EntityId(id)] = ParseUsage(u);
    }
    engine.seq_ = state.at("event_seq").get<int64_t>();
    engine.now_ = state.at("now").get<double>();
    engine.dictionary_.Update(engine.graph_);
    return engine;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptSnapshot, e.what());
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kCorruptSnapshot) throw;
    throw Error(ErrorCode::kCorruptSnapshot, e.what());
  }
}

}  // namespace mf
