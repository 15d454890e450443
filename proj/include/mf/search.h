#ifndef MF_SEARCH_H_
#define MF_SEARCH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mf/graph.h"
#include "mf/preservation.h"  // MbLookup

namespace mf {

enum class SearchPartition { kActive, kForgotten };

std::string_view SearchPartitionName(SearchPartition p);

struct SearchHit {
  EntityId item;
  double score = 0;
  SearchPartition partition = SearchPartition::kActive;
  double mb = 0;
};

// A concept cluster; no concept means the "other" bucket.
struct HitCluster {
  std::optional<EntityId> concept_id;
  std::vector<EntityId> hits;
};

struct SearchResult {
  // Visible hits (mb >= min_mb), by descending score then id.
  std::vector<SearchHit> hits;
  // Counted over all matches, before the min_mb filter.
  int64_t active_count = 0;
  int64_t forgotten_count = 0;
  std::vector<HitCluster> active_clusters;
  std::vector<HitCluster> forgotten_clusters;
};

struct SearchQuery {
  std::string terms;
  std::set<EntityId> concept_filter;
  double min_mb = 0.0;
  double forgotten_threshold = 0.1;
};

inline constexpr int kMaxClusterRounds = 5;

// Incremental inverted index over item text plus attached concepts.
class SearchIndex {
 public:
  struct IndexedItem {
    std::string text;
    std::map<std::string, int64_t> term_counts;
    std::set<EntityId> concepts;
  };

  // Replaces any previous postings for the item. Throws UnknownEntity.
  void IndexItem(const Graph &graph, const EntityId &item, std::string text,
                 std::set<EntityId> concepts);
  // Appends to the indexed text (indexing the item first if needed) and
  // returns the term-count change.
  std::map<std::string, int64_t> AppendText(const Graph &graph, const EntityId &item,
                                            std::string_view text);
  void SetConcepts(const EntityId &item, std::set<EntityId> concepts);
  void Remove(const EntityId &item);

  // Conjunctive token match plus concept filter. Throws EmptyQuery.
  SearchResult Query(const SearchQuery &query, const MbLookup &mb) const;

  const IndexedItem *Find(const EntityId &item) const;
  const std::map<EntityId, IndexedItem> &items() const { return items_; }

 private:
  std::map<EntityId, IndexedItem> items_;
  std::map<std::string, std::map<EntityId, int64_t>> postings_;
};

// Greedy max-cover clustering of hits by concept, at most kMaxClusterRounds
// concept clusters, leftovers in one "other" cluster.
std::vector<HitCluster> ClusterHits(
    const std::vector<EntityId> &hits,
    const std::map<EntityId, std::set<EntityId>> &concepts_of);

}  // namespace mf

#endif  // MF_SEARCH_H_
