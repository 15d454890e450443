#ifndef MF_EXTRACTION_H_
#define MF_EXTRACTION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mf/graph.h"
#include "mf/normalize.h"

namespace mf {

enum class MatchKind { kExact, kInflected };

std::string_view MatchKindName(MatchKind kind);

struct Mention {
  EntityId entity;
  // Byte range in the snippet.
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string surface;
  MatchKind match_kind = MatchKind::kExact;
  double score = 1.0;
};

// Suffix-stripping inflection tolerance. Two tokens match as inflected when
// the shorter one equals the longer one with 1..max_strip trailing code points
// removed and is at least min_stem code points long.
struct InflectionRule {
  int max_strip = 3;
  int min_stem = 4;
  double inflected_score = 0.8;
};

// Whether a dictionary token and a snippet token match, and how.
std::optional<MatchKind> MatchTokens(std::string_view dictionary_token,
                                     std::string_view snippet_token,
                                     const InflectionRule &rule);

// Normalized label token sequences mapped to the things carrying them,
// stored as a token trie so annotation is linear in the snippet length.
class LabelDictionary {
 public:
  using Entry = std::pair<std::vector<std::string>, std::vector<EntityId>>;

  explicit LabelDictionary(InflectionRule rule = {}) : rule_(rule) {}

  // Every non-context thing's primary and alternate labels.
  static LabelDictionary Build(const Graph &graph, InflectionRule rule = {});

  // Picks up things inserted since the last build. Rebuilds from scratch
  // after a purge.
  void Update(const Graph &graph);

  void AddLabel(const std::vector<std::string> &tokens, const EntityId &id);

  uint64_t graph_version() const { return graph_version_; }
  // Number of distinct normalized labels.
  std::size_t size() const { return entry_count_; }
  const InflectionRule &rule() const { return rule_; }

  // All entries as (token sequence, sorted ids), sorted by token sequence.
  std::vector<Entry> Entries() const;

  // Leftmost-longest, non-overlapping matches. Does not check staleness.
  std::vector<Mention> Annotate(std::string_view snippet) const;

 private:
  struct Node {
    // Sorted, unique.
    std::vector<EntityId> entities;
  };
  struct Candidate {
    uint32_t token;
    MatchKind kind;
  };

  uint32_t InternToken(const std::string &token);
  std::vector<Candidate> CandidatesFor(const std::string &snippet_token) const;
  void AddThing(const Thing &thing);

  InflectionRule rule_;
  std::unordered_map<std::string, uint32_t> token_ids_;
  std::vector<std::string> tokens_;
  // Token with 1..max_strip trailing code points removed -> full tokens.
  std::unordered_map<std::string, std::vector<uint32_t>> truncations_;
  std::vector<Node> nodes_{Node{}};
  std::unordered_map<uint64_t, uint32_t> children_;
  std::size_t entry_count_ = 0;
  uint64_t graph_version_ = 0;
  uint64_t purge_epoch_ = 0;
  std::size_t things_seen_ = 0;
};

// Checked variant: throws StaleDictionary when the graph has moved on.
std::vector<Mention> Annotate(std::string_view snippet,
                              const LabelDictionary &dictionary,
                              const Graph &graph);

}  // namespace mf

#endif  // MF_EXTRACTION_H_
