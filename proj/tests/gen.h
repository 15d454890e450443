#ifndef MF_TESTS_GEN_H_
#define MF_TESTS_GEN_H_

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mf/errors.h"
#include "mf/graph.h"

namespace mf::testing {

// Small wrapper so generators read like the properties they feed.
class Gen {
 public:
  explicit Gen(uint64_t seed) : rng_(seed) {}

  int Int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double Real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool Coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T &Pick(const std::vector<T> &v) {
    return v[static_cast<std::size_t>(Int(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937_64 &rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Thing MakeThing(const std::string &id, ThingKind kind, const std::string &label,
                       std::vector<std::string> alt = {}) {
  Thing t;
  t.id = EntityId(id);
  t.kind = kind;
  t.primary_label = label;
  t.alt_labels = std::move(alt);
  return t;
}

inline EntityId Id(const std::string &s) { return EntityId(s); }

// Ids n000..n<count-1>, mixed kinds.
inline std::vector<EntityId> AddNodes(Graph &graph, int count) {
  static const ThingKind kKinds[] = {ThingKind::kTopic, ThingKind::kFile,
                                     ThingKind::kPerson, ThingKind::kNote,
                                     ThingKind::kProject};
  std::vector<EntityId> ids;
  for (int i = 0; i < count; ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "n%03d", i);
    graph.AddThing(MakeThing(name, kKinds[i % 5], std::string("node ") + name));
    ids.emplace_back(name);
  }
  return ids;
}

// Random multigraph without self-loops. Edge weights drawn from (0,1].
// subContextOf edges that would close a cycle are skipped.
inline Graph RandomGraph(Gen &gen, int nodes, int edges) {
  Graph graph;
  const std::vector<EntityId> ids = AddNodes(graph, nodes);
  if (nodes < 2) return graph;
  for (int e = 0; e < edges; ++e) {
    const int a = gen.Int(0, nodes - 1);
    int b = gen.Int(0, nodes - 2);
    if (b >= a) ++b;
    const auto p = static_cast<Predicate>(gen.Int(0, kPredicateCount - 1));
    const double w = gen.Coin(0.5) ? 1.0 : gen.Real(0.05, 1.0);
    try {
      graph.AddEdge(ids[a], p, ids[b], 0, w);
    } catch (const Error &err) {
      if (err.code() != ErrorCode::kCycleRejected) throw;
    }
  }
  return graph;
}

}  // namespace mf::testing

#endif  // MF_TESTS_GEN_H_
