#include "mf/extraction.h"

#include <algorithm>
#include <map>

#include "mf/errors.h"

namespace mf {
namespace {

// Byte length of the first `n` code points of `s`.
std::size_t PrefixBytes(std::string_view s, std::size_t n) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (seen == n) return i;
      ++seen;
    }
  }
  return s.size();
}

uint64_t ChildKey(uint32_t node, uint32_t token) {
  return (static_cast<uint64_t>(node) << 32) | token;
}

void InsertSorted(std::vector<EntityId> &ids, const EntityId &id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) ids.insert(it, id);
}

}  // namespace

std::string_view MatchKindName(MatchKind kind) {
  return kind == MatchKind::kExact ? "exact" : "inflected";
}

std::optional<MatchKind> MatchTokens(std::string_view dictionary_token,
                                     std::string_view snippet_token,
                                     const InflectionRule &rule) {
  if (dictionary_token == snippet_token) return MatchKind::kExact;
  std::string_view shorter = dictionary_token;
  std::string_view longer = snippet_token;
  if (CodePointCount(shorter) > CodePointCount(longer)) std::swap(shorter, longer);
  const std::size_t short_len = CodePointCount(shorter);
  const std::size_t long_len = CodePointCount(longer);
  if (long_len - short_len > static_cast<std::size_t>(rule.max_strip)) {
    return std::nullopt;
  }
  if (short_len < static_cast<std::size_t>(rule.min_stem)) return std::nullopt;
  if (longer.substr(0, PrefixBytes(longer, short_len)) != shorter) {
    return std::nullopt;
  }
  return MatchKind::kInflected;
}

LabelDictionary LabelDictionary::Build(const Graph &graph, InflectionRule rule) {
  LabelDictionary dictionary(rule);
  dictionary.Update(graph);
  return dictionary;
}

void LabelDictionary::Update(const Graph &graph) {
  if (graph.purge_epoch() != purge_epoch_) {
    *this = LabelDictionary(rule_);
    purge_epoch_ = graph.purge_epoch();
  }
  const auto &order = graph.insertion_order();
  for (; things_seen_ < order.size(); ++things_seen_) {
    AddThing(graph.Get(order[things_seen_]));
  }
  graph_version_ = graph.version();
}

void LabelDictionary::AddThing(const Thing &thing) {
  if (thing.kind == ThingKind::kContext) return;
  AddLabel(Normalize(thing.primary_label), thing.id);
  for (const auto &alt : thing.alt_labels) AddLabel(Normalize(alt), thing.id);
}

uint32_t LabelDictionary::InternToken(const std::string &token) {
  auto [it, inserted] =
      token_ids_.emplace(token, static_cast<uint32_t>(tokens_.size()));
  if (!inserted) return it->second;
  tokens_.push_back(token);
  const std::size_t len = CodePointCount(token);
  for (int k = 1; k <= rule_.max_strip; ++k) {
    if (len < static_cast<std::size_t>(k)) break;
    if (len - k < static_cast<std::size_t>(rule_.min_stem)) break;
    truncations_[token.substr(0, PrefixBytes(token, len - k))].push_back(
        it->second);
  }
  return it->second;
}

void LabelDictionary::AddLabel(const std::vector<std::string> &tokens,
                               const EntityId &id) {
  if (tokens.empty()) return;
  uint32_t node = 0;
  for (const auto &token : tokens) {
    const uint32_t token_id = InternToken(token);
    auto [it, inserted] = children_.emplace(
        ChildKey(node, token_id), static_cast<uint32_t>(nodes_.size()));
    if (inserted) nodes_.push_back(Node{});
    node = it->second;
  }
  if (nodes_[node].entities.empty()) ++entry_count_;
  InsertSorted(nodes_[node].entities, id);
}

std::vector<LabelDictionary::Candidate> LabelDictionary::CandidatesFor(
    const std::string &snippet_token) const {
  std::vector<Candidate> out;
  if (auto it = token_ids_.find(snippet_token); it != token_ids_.end()) {
    out.push_back({it->second, MatchKind::kExact});
  }
  const std::size_t len = CodePointCount(snippet_token);
  // Dictionary tokens that are a strict prefix of the snippet token.
  for (int k = 1; k <= rule_.max_strip; ++k) {
    if (len < static_cast<std::size_t>(k)) break;
    if (len - k < static_cast<std::size_t>(rule_.min_stem)) break;
    auto it = token_ids_.find(snippet_token.substr(0, PrefixBytes(snippet_token, len - k)));
    if (it != token_ids_.end()) out.push_back({it->second, MatchKind::kInflected});
  }
  // Dictionary tokens the snippet token is a strict prefix of.
  if (len >= static_cast<std::size_t>(rule_.min_stem)) {
    if (auto it = truncations_.find(snippet_token); it != truncations_.end()) {
      for (uint32_t token : it->second) {
        out.push_back({token, MatchKind::kInflected});
      }
    }
  }
  return out;
}

std::vector<LabelDictionary::Entry> LabelDictionary::Entries() const {
  // Walk the trie; children_ is unordered so collect parent links first.
  std::vector<std::pair<uint32_t, uint32_t>> parent(nodes_.size(), {0, 0});
  for (const auto &[key, child] : children_) {
    parent[child] = {static_cast<uint32_t>(key >> 32),
                     static_cast<uint32_t>(key & 0xffffffffu)};
  }
  std::vector<Entry> entries;
  for (uint32_t node = 1; node < nodes_.size(); ++node) {
    if (nodes_[node].entities.empty()) continue;
    std::vector<std::string> tokens;
    for (uint32_t n = node; n != 0; n = parent[n].first) {
      tokens.push_back(tokens_[parent[n].second]);
    }
    std::reverse(tokens.begin(), tokens.end());
    entries.emplace_back(std::move(tokens), nodes_[node].entities);
  }
  std::sort(entries.begin(), entries.end());
  return entries;
}

std::vector<Mention> LabelDictionary::Annotate(std::string_view snippet) const {
  const std::vector<Token> tokens = Tokenize(snippet);
  std::vector<std::vector<Candidate>> candidates;
  candidates.reserve(tokens.size());
  for (const auto &token : tokens) candidates.push_back(CandidatesFor(token.text));

  struct State {
    uint32_t node;
    bool exact;
  };
  std::vector<Mention> mentions;
  std::vector<State> frontier;
  std::vector<State> next;
  std::size_t i = 0;
  while (i < tokens.size()) {
    frontier.assign(1, State{0, true});
    std::size_t best_end = 0;
    std::vector<State> best_states;
    for (std::size_t j = i; j < tokens.size() && !frontier.empty(); ++j) {
      next.clear();
      for (const State &state : frontier) {
        for (const Candidate &c : candidates[j]) {
          auto it = children_.find(ChildKey(state.node, c.token));
          if (it == children_.end()) continue;
          next.push_back(
              State{it->second, state.exact && c.kind == MatchKind::kExact});
        }
      }
      std::swap(frontier, next);
      bool terminal = false;
      for (const State &state : frontier) {
        if (!nodes_[state.node].entities.empty()) terminal = true;
      }
      if (terminal) {
        best_end = j + 1;
        best_states.clear();
        for (const State &state : frontier) {
          if (!nodes_[state.node].entities.empty()) best_states.push_back(state);
        }
      }
    }
    if (best_end == 0) {
      ++i;
      continue;
    }
    std::map<EntityId, MatchKind> kinds;
    for (const State &state : best_states) {
      for (const auto &id : nodes_[state.node].entities) {
        auto kind = state.exact ? MatchKind::kExact : MatchKind::kInflected;
        auto [it, inserted] = kinds.emplace(id, kind);
        if (!inserted && kind == MatchKind::kExact) it->second = kind;
      }
    }
    const std::size_t begin = tokens[i].begin;
    const std::size_t end = tokens[best_end - 1].end;
    for (const auto &[id, kind] : kinds) {
      Mention m;
      m.entity = id;
      m.begin = begin;
      m.end = end;
      m.surface = std::string(snippet.substr(begin, end - begin));
      m.match_kind = kind;
      m.score = kind == MatchKind::kExact ? 1.0 : rule_.inflected_score;
      mentions.push_back(std::move(m));
    }
    i = best_end;
  }
  return mentions;
}

std::vector<Mention> Annotate(std::string_view snippet,
                              const LabelDictionary &dictionary,
                              const Graph &graph) {
  if (dictionary.graph_version() < graph.version()) {
    throw Error(ErrorCode::kStaleDictionary,
                "dictionary built at graph version " +
                    std::to_string(dictionary.graph_version()) +
                    ", graph is at " + std::to_string(graph.version()));
  }
  return dictionary.Annotate(snippet);
}

}  // namespace mf
