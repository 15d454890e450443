#ifndef MF_GRAPH_H_
#define MF_GRAPH_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace mf {

// Seconds since the Unix epoch, UTC. Fractions allowed.
using Timestamp = double;

class EntityId {
 public:
  EntityId() = default;
  explicit EntityId(std::string value) : value_(std::move(value)) {}

  const std::string &str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const EntityId &, const EntityId &) = default;

 private:
  std::string value_;
};

enum class ThingKind {
  kPerson,
  kOrganization,
  kLocation,
  kTopic,
  kProject,
  kEvent,
  kTask,
  kFile,
  kEmail,
  kBookmark,
  kWebpage,
  kPhoto,
  kNote,
  kCollection,
  kContext,
};

std::string_view ThingKindName(ThingKind kind);
std::optional<ThingKind> ParseThingKind(std::string_view name);

// Concepts are the things a context can be "about"; resources are the
// information items users open, tag and file.
bool IsConcept(ThingKind kind);
bool IsResource(ThingKind kind);

enum class Predicate {
  kIsContainedIn,
  kHasSuggestedTopic,
  kHasTopic,
  kSubContextOf,
  kRelatedTo,
  kAttendedBy,
  kLocatedAt,
  kHasPart,
  kNucleusOf,
};

inline constexpr int kPredicateCount = 9;

std::string_view PredicateName(Predicate p);
std::optional<Predicate> ParsePredicate(std::string_view name);

struct Thing {
  EntityId id;
  ThingKind kind = ThingKind::kNote;
  std::string primary_label;
  std::vector<std::string> alt_labels;
  Timestamp created_at = 0;
  std::map<std::string, std::string> attributes;
  // Tombstone. Soft-deleted things stay resolvable until Purge().
  bool deleted = false;

  std::optional<double> NumericAttribute(const std::string &key) const;
};

struct Edge {
  EntityId subject;
  Predicate predicate = Predicate::kRelatedTo;
  EntityId object;
  Timestamp created_at = 0;
  double weight = 1.0;
};

enum class Direction { kOut, kIn, kBoth };

// One incident edge with its far endpoint. Pointers stay valid until the next
// mutation of the graph.
struct Neighbor {
  const Edge *edge = nullptr;
  const Thing *thing = nullptr;
};

using PredicateSet = std::set<Predicate>;

// Typed property graph of things and labeled directed edges. Iteration is
// ordered by id everywhere so replays are reproducible.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph &other);
  Graph &operator=(const Graph &other);
  Graph(Graph &&) = default;
  Graph &operator=(Graph &&) = default;

  // Throws DuplicateId / InvalidThing.
  const EntityId &AddThing(Thing thing);

  // Idempotent on the (subject, predicate, object) triple. Throws
  // UnknownEntity, or CycleRejected when a subContextOf edge would close a
  // cycle.
  const Edge &AddEdge(const EntityId &subject, Predicate predicate,
                      const EntityId &object, Timestamp created_at = 0,
                      double weight = 1.0);

  // Returns false if the edge did not exist.
  bool RemoveEdge(const EntityId &subject, Predicate predicate,
                  const EntityId &object);

  bool Contains(const EntityId &id) const { return things_.count(id) > 0; }
  const Thing *Find(const EntityId &id) const;
  // Throws UnknownEntity.
  const Thing &Get(const EntityId &id) const;

  void SetAttribute(const EntityId &id, const std::string &key,
                    std::string value);
  void MarkDeleted(const EntityId &id);
  // Drops tombstoned things together with their edges. Returns the purged ids.
  std::vector<EntityId> Purge();

  const Edge *FindEdge(const EntityId &subject, Predicate predicate,
                       const EntityId &object) const;

  // Sorted by predicate, then far-endpoint id, then direction (out first).
  std::vector<Neighbor> Neighbors(
      const EntityId &id, const std::optional<PredicateSet> &predicates = {},
      Direction direction = Direction::kBoth) const;

  std::size_t Degree(const EntityId &id) const;

  // Things whose primary or alternate label normalizes to the same key as
  // `label`, sorted by id.
  std::vector<EntityId> LookupByLabel(std::string_view label) const;

  const std::map<EntityId, Thing> &things() const { return things_; }
  std::vector<Edge> Edges() const;
  std::size_t edge_count() const { return edges_.size(); }

  // Bumped by every thing insertion; label dictionaries compare against it.
  uint64_t version() const { return version_; }
  // Live things in insertion order.
  const std::vector<EntityId> &insertion_order() const { return insertion_order_; }
  // Bumped by every Purge() that removed something.
  uint64_t purge_epoch() const { return purge_epoch_; }
  // Used when restoring a snapshot after re-inserting things and edges.
  void RestoreCounters(uint64_t version, uint64_t purge_epoch) {
    version_ = version;
    purge_epoch_ = purge_epoch;
  }

 private:
  using EdgeKey = std::tuple<EntityId, Predicate, EntityId>;
  // Incident edges of one node keyed by (predicate, far endpoint).
  using Adjacency = std::map<std::pair<Predicate, EntityId>, Neighbor>;

  bool ReachableViaSubContext(const EntityId &from, const EntityId &to) const;
  void IndexLabel(const std::string &label, const EntityId &id);
  void IndexEdge(const Edge &edge);
  void RebuildAdjacency();

  std::map<EntityId, Thing> things_;
  std::map<EdgeKey, Edge> edges_;
  std::map<EntityId, Adjacency> out_;
  std::map<EntityId, Adjacency> in_;
  std::map<std::string, std::set<EntityId>> labels_;
  std::vector<EntityId> insertion_order_;
  uint64_t version_ = 0;
  uint64_t purge_epoch_ = 0;
};

}  // namespace mf

template <>
struct std::hash<mf::EntityId> {
  std::size_t operator()(const mf::EntityId &id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

#endif  // MF_GRAPH_H_
