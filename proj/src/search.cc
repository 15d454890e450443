#include "mf/search.h"

#include <algorithm>

#include "mf/errors.h"
#include "mf/normalize.h"

namespace mf {

std::string_view SearchPartitionName(SearchPartition p) {
  return p == SearchPartition::kActive ? "active" : "forgotten";
}

void SearchIndex::IndexItem(const Graph &graph, const EntityId &item,
                            std::string text, std::set<EntityId> concepts) {
  graph.Get(item);
  Remove(item);
  IndexedItem entry;
  for (auto &token : Normalize(text)) ++entry.term_counts[std::move(token)];
  entry.text = std::move(text);
  entry.concepts = std::move(concepts);
  for (const auto &[term, count] : entry.term_counts) postings_[term][item] = count;
  items_.emplace(item, std::move(entry));
}

std::map<std::string, int64_t> SearchIndex::AppendText(const Graph &graph,
                                                      const EntityId &item,
                                                      std::string_view text) {
  graph.Get(item);
  std::map<std::string, int64_t> delta;
  for (auto &token : Normalize(text)) ++delta[std::move(token)];
  auto it = items_.find(item);
  if (it == items_.end()) {
    IndexItem(graph, item, std::string(text), {});
    return delta;
  }
  IndexedItem &entry = it->second;
  if (!entry.text.empty()) entry.text += '\n';
  entry.text += text;
  for (const auto &[term, count] : delta) {
    entry.term_counts[term] += count;
    postings_[term][item] += count;
  }
  return delta;
}

void SearchIndex::SetConcepts(const EntityId &item, std::set<EntityId> concepts) {
  auto it = items_.find(item);
  if (it == items_.end()) throw Error(ErrorCode::kUnknownEntity, "not indexed: " + item.str());
  it->second.concepts = std::move(concepts);
}

void SearchIndex::Remove(const EntityId &item) {
  auto it = items_.find(item);
  if (it == items_.end()) return;
  for (const auto &[term, count] : it->second.term_counts) {
    auto posting = postings_.find(term);
    posting->second.erase(item);
    if (posting->second.empty()) postings_.erase(posting);
  }
  items_.erase(it);
}

const SearchIndex::IndexedItem *SearchIndex::Find(const EntityId &item) const {
  auto it = items_.find(item);
  return it == items_.end() ? nullptr : &it->second;
}

SearchResult SearchIndex::Query(const SearchQuery &query, const MbLookup &mb) const {
  std::vector<std::string> tokens = Normalize(query.terms);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  if (tokens.empty() && query.concept_filter.empty()) {
    throw Error(ErrorCode::kEmptyQuery, "no query terms and no concept filter");
  }

  auto carries_filter = [&](const IndexedItem &entry) {
    return std::includes(entry.concepts.begin(), entry.concepts.end(),
                         query.concept_filter.begin(), query.concept_filter.end());
  };

  std::vector<SearchHit> matches;
  if (tokens.empty()) {
    for (const auto &[id, entry] : items_) {
      if (carries_filter(entry)) matches.push_back({id, 0.0});
    }
  } else {
    // Intersect starting from the rarest term.
    std::vector<const std::map<EntityId, int64_t> *> lists;
    for (const auto &token : tokens) {
      auto it = postings_.find(token);
      if (it == postings_.end()) {
        lists.clear();
        break;
      }
      lists.push_back(&it->second);
    }
    if (!lists.empty()) {
      std::sort(lists.begin(), lists.end(),
                [](auto *a, auto *b) { return a->size() < b->size(); });
      for (const auto &[id, count] : *lists.front()) {
        double score = static_cast<double>(count);
        bool all = true;
        for (std::size_t i = 1; i < lists.size() && all; ++i) {
          auto it = lists[i]->find(id);
          if (it == lists[i]->end()) {
            all = false;
          } else {
            score += static_cast<double>(it->second);
          }
        }
        if (all && carries_filter(items_.at(id))) matches.push_back({id, score});
      }
    }
  }

  SearchResult result;
  for (auto &hit : matches) {
    hit.mb = mb ? mb(hit.item) : 0.0;
    hit.partition = hit.mb >= query.forgotten_threshold ? SearchPartition::kActive
                                                        : SearchPartition::kForgotten;
    if (hit.partition == SearchPartition::kActive) {
      ++result.active_count;
    } else {
      ++result.forgotten_count;
    }
  }
  std::erase_if(matches, [&](const SearchHit &h) { return h.mb < query.min_mb; });
  std::sort(matches.begin(), matches.end(), [](const SearchHit &a, const SearchHit &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  });

  std::vector<EntityId> active, forgotten;
  std::map<EntityId, std::set<EntityId>> concepts_of;
  for (const auto &hit : matches) {
    (hit.partition == SearchPartition::kActive ? active : forgotten).push_back(hit.item);
    concepts_of[hit.item] = items_.at(hit.item).concepts;
  }
  result.active_clusters = ClusterHits(active, concepts_of);
  result.forgotten_clusters = ClusterHits(forgotten, concepts_of);
  result.hits = std::move(matches);
  return result;
}

std::vector<HitCluster> ClusterHits(
    const std::vector<EntityId> &hits,
    const std::map<EntityId, std::set<EntityId>> &concepts_of) {
  std::vector<HitCluster> clusters;
  std::vector<EntityId> remaining = hits;
  for (int round = 0; round < kMaxClusterRounds && !remaining.empty(); ++round) {
    std::map<EntityId, int> cover;
    for (const auto &hit : remaining) {
      auto it = concepts_of.find(hit);
      if (it == concepts_of.end()) continue;
      for (const auto &c : it->second) ++cover[c];
    }
    const EntityId *best = nullptr;
    int best_count = 0;
    for (const auto &[c, count] : cover) {
      if (count > best_count) {
        best = &c;
        best_count = count;
      }
    }
    if (!best) break;
    HitCluster cluster{*best, {}};
    std::vector<EntityId> rest;
    for (const auto &hit : remaining) {
      auto it = concepts_of.find(hit);
      if (it != concepts_of.end() && it->second.count(*best)) {
        cluster.hits.push_back(hit);
      } else {
        rest.push_back(hit);
      }
    }
    clusters.push_back(std::move(cluster));
    remaining = std::move(rest);
  }
  if (!remaining.empty()) clusters.push_back(HitCluster{std::nullopt, remaining});
  return clusters;
}

}  // namespace mf
