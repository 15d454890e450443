#include "mf/extraction.h"

#include <gtest/gtest.h>

#include "mf/normalize.h"
#include "oracles.h"
#include "support.h"

namespace mf {
namespace {

using testing::Gen;
using testing::Id;
using testing::MakeThing;

using Tokens = std::vector<std::string>;

TEST(NormalizeTest, Examples) {
  EXPECT_EQ(Normalize("Käufer-Liste"), (Tokens{"kaufer", "liste"}));
  EXPECT_EQ(Normalize(""), Tokens{});
  EXPECT_EQ(Normalize("DFKI  website"), (Tokens{"dfki", "website"}));
  EXPECT_EQ(Normalize("  --  "), Tokens{});
  EXPECT_EQ(Normalize("Ünïcödé 42x"), (Tokens{"unicode", "42x"}));
}

TEST(NormalizeTest, TokenOffsetsPointIntoTheInput) {
  const std::string text = "the Käufer, list";
  const auto tokens = Tokenize(text);
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(text.substr(tokens[1].begin, tokens[1].end - tokens[1].begin), "Käufer");
  EXPECT_EQ(text.substr(tokens[2].begin, tokens[2].end - tokens[2].begin), "list");
}

TEST(NormalizeTest, InvalidUtf8Separates) {
  EXPECT_EQ(Normalize(std::string("ab\xff" "cd")), (Tokens{"ab", "cd"}));
}

TEST(MatchTokensTest, SuffixRule) {
  const InflectionRule rule;
  EXPECT_EQ(MatchTokens("projekt", "projekten", rule), MatchKind::kInflected);
  EXPECT_EQ(MatchTokens("projekten", "projekt", rule), MatchKind::kInflected);
  EXPECT_EQ(MatchTokens("projekt", "projekt", rule), MatchKind::kExact);
  EXPECT_EQ(MatchTokens("mlops", "ml", rule), std::nullopt);
  EXPECT_EQ(MatchTokens("work", "working", rule), MatchKind::kInflected);
  EXPECT_EQ(MatchTokens("work", "workings", rule), std::nullopt);  // 4 chars to strip
  EXPECT_EQ(MatchTokens("cat", "cats", rule), std::nullopt);       // stem of 3
  EXPECT_EQ(MatchTokens("haus", "hause", rule), MatchKind::kInflected);
  EXPECT_EQ(MatchTokens("house", "horse", rule), std::nullopt);
}

TEST(MatchTokensTest, AgreesWithLonghandRule) {
  Gen gen(21);
  const std::string alphabet = "abcé";
  for (int i = 0; i < 20000; ++i) {
    auto word = [&] {
      std::string w;
      const int n = gen.Int(1, 9);
      for (int k = 0; k < n; ++k) {
        const int c = gen.Int(0, 3);
        w += c == 3 ? std::string("é") : std::string(1, alphabet[c]);
      }
      return w;
    };
    std::string a = word();
    std::string b = gen.Coin(0.5) ? a.substr(0, a.size()) + word().substr(0, gen.Int(0, 4)) : word();
    if (gen.Coin(0.5)) std::swap(a, b);
    EXPECT_EQ(MatchTokens(a, b, {}), oracle::TokenMatch(a, b, {})) << a << " / " << b;
  }
}

TEST(DictionaryTest, BuildExamples) {
  Graph g;
  EXPECT_EQ(LabelDictionary::Build(g).size(), 0u);
  g.AddThing(MakeThing("topicML", ThingKind::kTopic, "Machine Learning"));
  auto d = LabelDictionary::Build(g);
  ASSERT_EQ(d.Entries().size(), 1u);
  EXPECT_EQ(d.Entries()[0].first, (Tokens{"machine", "learning"}));
  EXPECT_EQ(d.Entries()[0].second, std::vector<EntityId>{Id("topicML")});

  g.AddThing(MakeThing("p:1", ThingKind::kPerson, "John Smith", {"Smith"}));
  g.AddThing(MakeThing("p:2", ThingKind::kPerson, "Jane Smith", {"Smith"}));
  d.Update(g);
  std::vector<EntityId> smith;
  for (const auto &[tokens, ids] : d.Entries()) {
    if (tokens == Tokens{"smith"}) smith = ids;
  }
  EXPECT_EQ(smith, (std::vector<EntityId>{Id("p:1"), Id("p:2")}));
  EXPECT_EQ(d.size(), 4u);
  EXPECT_EQ(d.graph_version(), g.version());
}

TEST(DictionaryTest, EntriesMatchLabelTableScan) {
  Gen gen(22);
  const Tokens words = {"alpha", "beta", "gamma", "Beta", "delta"};
  Graph g;
  std::map<Tokens, std::set<EntityId>> expected;
  for (int i = 0; i < 200; ++i) {
    std::string label = gen.Pick(words);
    while (gen.Coin(0.4)) label += " " + gen.Pick(words);
    std::vector<std::string> alts;
    if (gen.Coin(0.3)) alts.push_back(gen.Pick(words));
    const std::string id = "t" + std::to_string(i);
    g.AddThing(MakeThing(id, ThingKind::kTopic, label, alts));
    expected[Normalize(label)].insert(Id(id));
    for (const auto &a : alts) expected[Normalize(a)].insert(Id(id));
    if (i % 50 == 49) {
      // Incremental update must equal a fresh build.
      LabelDictionary d = LabelDictionary::Build(g);
      std::map<Tokens, std::set<EntityId>> got;
      for (const auto &[tokens, ids] : d.Entries()) got[tokens] = {ids.begin(), ids.end()};
      EXPECT_EQ(got, expected);
    }
  }
}

TEST(DictionaryTest, ContextsAreNotLabels) {
  Graph g;
  g.AddThing(MakeThing("c", ThingKind::kContext, "Context: budget"));
  EXPECT_EQ(LabelDictionary::Build(g).size(), 0u);
}

class AnnotateTest : public ::testing::Test {
 protected:
  void Add(const std::string &id, const std::string &label, ThingKind kind = ThingKind::kTopic) {
    graph_.AddThing(MakeThing(id, kind, label));
    dict_.Update(graph_);
  }
  std::vector<Mention> Run(const std::string &snippet) {
    return Annotate(snippet, dict_, graph_);
  }

  Graph graph_;
  LabelDictionary dict_;
};

TEST_F(AnnotateTest, ExactMention) {
  Add("dfki", "DFKI", ThingKind::kOrganization);
  const auto m = Run("the DFKI website");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].entity, Id("dfki"));
  EXPECT_EQ(m[0].surface, "DFKI");
  EXPECT_EQ(m[0].begin, 4u);
  EXPECT_EQ(m[0].end, 8u);
  EXPECT_EQ(m[0].match_kind, MatchKind::kExact);
  EXPECT_DOUBLE_EQ(m[0].score, 1.0);
}

TEST_F(AnnotateTest, InflectedMention) {
  Add("proj", "Projekt", ThingKind::kProject);
  const auto m = Run("Stand der Projekten");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].match_kind, MatchKind::kInflected);
  EXPECT_DOUBLE_EQ(m[0].score, 0.8);
  EXPECT_EQ(m[0].surface, "Projekten");
}

TEST_F(AnnotateTest, LongestMatchWins) {
  Add("ml", "machine learning");
  Add("machine", "machine");
  const auto m = Run("machine learning");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].entity, Id("ml"));
  EXPECT_EQ(m[0].surface, "machine learning");
}

TEST_F(AnnotateTest, ShortStemDoesNotMatch) {
  Add("mlops", "mlops");
  EXPECT_TRUE(Run("ml").empty());
}

TEST_F(AnnotateTest, AmbiguousSurfaceYieldsOneMentionPerEntity) {
  graph_.AddThing(MakeThing("p:1", ThingKind::kPerson, "John Smith", {"Smith"}));
  graph_.AddThing(MakeThing("p:2", ThingKind::kPerson, "Jane Smith", {"Smith"}));
  dict_.Update(graph_);
  const auto m = Run("ask Smith today");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].entity, Id("p:1"));
  EXPECT_EQ(m[1].entity, Id("p:2"));
  EXPECT_EQ(m[0].begin, m[1].begin);
}

TEST_F(AnnotateTest, StaleDictionaryRejected) {
  Add("a", "alpha");
  graph_.AddThing(MakeThing("b", ThingKind::kTopic, "beta"));
  EXPECT_MF_ERROR(Run("alpha"), ErrorCode::kStaleDictionary);
}

// Random dictionaries of up to 1,000 labels against snippets of up to 500
// tokens; the vocabulary is small so multi-token and inflected matches are
// frequent.
TEST(AnnotateOracleTest, MatchesEnumerationOracle) {
  Gen gen(23);
  const Tokens stems = {"haus", "hausen", "garten", "gartens", "wald", "walder",
                        "stadt", "städte", "fluss", "berg", "see", "bergen", "ab"};
  for (int round = 0; round < 40; ++round) {
    Graph g;
    std::vector<oracle::LabelRow> labels;
    const int count = gen.Int(1, round < 5 ? 1000 : 200);
    for (int i = 0; i < count; ++i) {
      std::string label = gen.Pick(stems);
      while (gen.Coin(0.35)) label += " " + gen.Pick(stems);
      const std::string id = "e" + std::to_string(gen.Int(0, count));
      if (!g.Contains(Id(id))) {
        g.AddThing(MakeThing(id, ThingKind::kTopic, label));
        labels.push_back({label, Id(id)});
      }
    }
    InflectionRule rule;
    if (round % 3 == 1) rule.max_strip = 1;
    if (round % 3 == 2) rule.min_stem = 3;
    const LabelDictionary dict = LabelDictionary::Build(g, rule);
    for (int s = 0; s < 5; ++s) {
      std::string snippet;
      const int n = gen.Int(0, 500);
      for (int k = 0; k < n; ++k) {
        snippet += gen.Pick(stems) + (gen.Coin(0.2) ? "en" : "") + (gen.Coin(0.1) ? ", " : " ");
      }
      const auto got = dict.Annotate(snippet);
      const auto want = oracle::AnnotateByEnumeration(labels, rule, snippet);
      ASSERT_EQ(got.size(), want.size()) << "round " << round;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].entity, want[i].entity);
        EXPECT_EQ(got[i].begin, want[i].begin);
        EXPECT_EQ(got[i].end, want[i].end);
        EXPECT_EQ(got[i].match_kind, want[i].match_kind);
        EXPECT_EQ(got[i].score, want[i].score);
      }
      // Spans lie inside the snippet and never overlap.
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_LT(got[i].begin, got[i].end);
        EXPECT_LE(got[i].end, snippet.size());
        if (i > 0 && got[i].begin != got[i - 1].begin) {
          EXPECT_GE(got[i].begin, got[i - 1].end);
        }
      }
    }
  }
}

}  // namespace
}  // namespace mf
