#include "mf/graph.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>

#include "mf/errors.h"
#include "mf/normalize.h"

namespace mf {
namespace {

constexpr std::array<std::string_view, 15> kKindNames = {
    "person",  "organization", "location", "topic",   "project",
    "event",   "task",         "file",     "email",   "bookmark",
    "webpage", "photo",        "note",     "collection", "context"};

constexpr std::array<std::string_view, kPredicateCount> kPredicateNames = {
    "isContainedIn", "hasSuggestedTopic", "hasTopic",
    "subContextOf",  "relatedTo",         "attendedBy",
    "locatedAt",     "hasPart",           "nucleusOf"};

}  // namespace

std::string_view ThingKindName(ThingKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ThingKind> ParseThingKind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ThingKind>(i);
  }
  return std::nullopt;
}

bool IsConcept(ThingKind kind) {
  switch (kind) {
    case ThingKind::kPerson:
    case ThingKind::kOrganization:
    case ThingKind::kLocation:
    case ThingKind::kTopic:
    case ThingKind::kProject:
    case ThingKind::kEvent:
    case ThingKind::kTask:
      return true;
    default:
      return false;
  }
}

bool IsResource(ThingKind kind) {
  switch (kind) {
    case ThingKind::kFile:
    case ThingKind::kEmail:
    case ThingKind::kBookmark:
    case ThingKind::kWebpage:
    case ThingKind::kPhoto:
    case ThingKind::kNote:
      return true;
    default:
      return false;
  }
}

std::string_view PredicateName(Predicate p) {
  return kPredicateNames[static_cast<std::size_t>(p)];
}

std::optional<Predicate> ParsePredicate(std::string_view name) {
  for (std::size_t i = 0; i < kPredicateNames.size(); ++i) {
    if (kPredicateNames[i] == name) return static_cast<Predicate>(i);
  }
  return std::nullopt;
}

std::optional<double> Thing::NumericAttribute(const std::string &key) const {
  auto it = attributes.find(key);
  if (it == attributes.end()) return std::nullopt;
  char *end = nullptr;
  double value = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str()) return std::nullopt;
  return value;
}

const EntityId &Graph::AddThing(Thing thing) {
  if (thing.id.empty()) throw Error(ErrorCode::kInvalidThing, "empty id");
  if (thing.primary_label.empty()) {
    throw Error(ErrorCode::kInvalidThing,
                "empty primary label for " + thing.id.str());
  }
  if (thing.kind == ThingKind::kEvent) {
    auto start = thing.NumericAttribute("start");
    auto end = thing.NumericAttribute("end");
    if (start && end && *start > *end) {
      throw Error(ErrorCode::kInvalidThing,
                  "event ends before it starts: " + thing.id.str());
    }
  }
  if (things_.count(thing.id)) {
    throw Error(ErrorCode::kDuplicateId, thing.id.str());
  }
  EntityId id = thing.id;
  IndexLabel(thing.primary_label, id);
  for (const auto &alt : thing.alt_labels) IndexLabel(alt, id);
  auto [it, inserted] = things_.emplace(id, std::move(thing));
  insertion_order_.push_back(id);
  ++version_;
  return it->first;
}

void Graph::IndexLabel(const std::string &label, const EntityId &id) {
  std::string key = NormalizedKey(label);
  if (!key.empty()) labels_[key].insert(id);
}

Graph::Graph(const Graph &other)
    : things_(other.things_),
      edges_(other.edges_),
      labels_(other.labels_),
      insertion_order_(other.insertion_order_),
      version_(other.version_),
      purge_epoch_(other.purge_epoch_) {
  RebuildAdjacency();
}

Graph &Graph::operator=(const Graph &other) {
  if (this != &other) {
    Graph copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void Graph::IndexEdge(const Edge &edge) {
  const Thing *subject = &things_.at(edge.subject);
  const Thing *object = &things_.at(edge.object);
  out_[edge.subject][{edge.predicate, edge.object}] = Neighbor{&edge, object};
  in_[edge.object][{edge.predicate, edge.subject}] = Neighbor{&edge, subject};
}

void Graph::RebuildAdjacency() {
  out_.clear();
  in_.clear();
  for (const auto &[key, edge] : edges_) IndexEdge(edge);
}

bool Graph::ReachableViaSubContext(const EntityId &from,
                                   const EntityId &to) const {
  std::set<EntityId> seen{from};
  std::deque<EntityId> queue{from};
  while (!queue.empty()) {
    EntityId node = queue.front();
    queue.pop_front();
    if (node == to) return true;
    auto it = out_.find(node);
    if (it == out_.end()) continue;
    for (const auto &[key, n] : it->second) {
      if (key.first != Predicate::kSubContextOf) continue;
      if (seen.insert(key.second).second) queue.push_back(key.second);
    }
  }
  return false;
}

const Edge &Graph::AddEdge(const EntityId &subject, Predicate predicate,
                           const EntityId &object, Timestamp created_at,
                           double weight) {
  if (!Contains(subject)) throw Error(ErrorCode::kUnknownEntity, subject.str());
  if (!Contains(object)) throw Error(ErrorCode::kUnknownEntity, object.str());
  if (!(weight > 0.0 && weight <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "edge weight must lie in (0,1]");
  }
  EdgeKey key{subject, predicate, object};
  if (auto it = edges_.find(key); it != edges_.end()) return it->second;
  if (predicate == Predicate::kSubContextOf &&
      ReachableViaSubContext(object, subject)) {
    throw Error(ErrorCode::kCycleRejected,
                subject.str() + " subContextOf " + object.str());
  }
  auto [it, inserted] =
      edges_.emplace(key, Edge{subject, predicate, object, created_at, weight});
  IndexEdge(it->second);
  return it->second;
}

bool Graph::RemoveEdge(const EntityId &subject, Predicate predicate,
                       const EntityId &object) {
  EdgeKey key{subject, predicate, object};
  if (edges_.erase(key) == 0) return false;
  out_[subject].erase({predicate, object});
  in_[object].erase({predicate, subject});
  return true;
}

const Thing *Graph::Find(const EntityId &id) const {
  auto it = things_.find(id);
  return it == things_.end() ? nullptr : &it->second;
}

const Thing &Graph::Get(const EntityId &id) const {
  const Thing *thing = Find(id);
  if (!thing) throw Error(ErrorCode::kUnknownEntity, id.str());
  return *thing;
}

void Graph::SetAttribute(const EntityId &id, const std::string &key,
                         std::string value) {
  auto it = things_.find(id);
  if (it == things_.end()) throw Error(ErrorCode::kUnknownEntity, id.str());
  it->second.attributes[key] = std::move(value);
}

void Graph::MarkDeleted(const EntityId &id) {
  auto it = things_.find(id);
  if (it == things_.end()) throw Error(ErrorCode::kUnknownEntity, id.str());
  it->second.deleted = true;
}

std::vector<EntityId> Graph::Purge() {
  std::vector<EntityId> purged;
  for (const auto &[id, thing] : things_) {
    if (thing.deleted) purged.push_back(id);
  }
  for (const auto &id : purged) {
    std::vector<EdgeKey> incident;
    for (const auto *index : {&out_, &in_}) {
      if (auto it = index->find(id); it != index->end()) {
        for (const auto &[key, n] : it->second) {
          incident.emplace_back(n.edge->subject, n.edge->predicate, n.edge->object);
        }
      }
    }
    for (const auto &key : incident) {
      RemoveEdge(std::get<0>(key), std::get<1>(key), std::get<2>(key));
    }
    out_.erase(id);
    in_.erase(id);
    const Thing &thing = things_.at(id);
    auto unindex = [&](const std::string &label) {
      auto it = labels_.find(NormalizedKey(label));
      if (it == labels_.end()) return;
      it->second.erase(id);
      if (it->second.empty()) labels_.erase(it);
    };
    unindex(thing.primary_label);
    for (const auto &alt : thing.alt_labels) unindex(alt);
    things_.erase(id);
    std::erase(insertion_order_, id);
  }
  if (!purged.empty()) {
    ++version_;
    ++purge_epoch_;
  }
  return purged;
}

const Edge *Graph::FindEdge(const EntityId &subject, Predicate predicate,
                            const EntityId &object) const {
  auto it = edges_.find(EdgeKey{subject, predicate, object});
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<Neighbor> Graph::Neighbors(
    const EntityId &id, const std::optional<PredicateSet> &predicates,
    Direction direction) const {
  if (!Contains(id)) throw Error(ErrorCode::kUnknownEntity, id.str());
  static const Adjacency kEmpty;
  auto side = [&](const std::map<EntityId, Adjacency> &index, bool wanted) -> const Adjacency & {
    if (!wanted) return kEmpty;
    auto it = index.find(id);
    return it == index.end() ? kEmpty : it->second;
  };
  const Adjacency &out = side(out_, direction != Direction::kIn);
  const Adjacency &in = side(in_, direction != Direction::kOut);
  std::vector<Neighbor> result;
  result.reserve(out.size() + in.size());
  auto keep = [&](Predicate p) { return !predicates || predicates->count(p) > 0; };
  // Both sides are ordered by (predicate, far id); merge with out first on ties.
  auto o = out.begin();
  auto i = in.begin();
  while (o != out.end() || i != in.end()) {
    const bool take_out = i == in.end() || (o != out.end() && !(i->first < o->first));
    auto &it = take_out ? o : i;
    if (keep(it->first.first)) result.push_back(it->second);
    ++it;
  }
  return result;
}

std::size_t Graph::Degree(const EntityId &id) const {
  std::size_t degree = 0;
  if (auto it = out_.find(id); it != out_.end()) degree += it->second.size();
  if (auto it = in_.find(id); it != in_.end()) degree += it->second.size();
  return degree;
}

std::vector<EntityId> Graph::LookupByLabel(std::string_view label) const {
  auto it = labels_.find(NormalizedKey(label));
  if (it == labels_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::vector<Edge> Graph::Edges() const {
  std::vector<Edge> result;
  result.reserve(edges_.size());
  for (const auto &[key, edge] : edges_) result.push_back(edge);
  return result;
}

}  // namespace mf
