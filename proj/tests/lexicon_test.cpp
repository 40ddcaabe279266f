#include "bulletsum/lexicon.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bulletsum/embedding.hpp"

using namespace bulletsum;

namespace {

std::vector<double> axis(std::size_t dim, std::size_t i, double scale = 1.0) {
  std::vector<double> v(dim, 0.0);
  v[i] = scale;
  return v;
}

TEST(ExpandLexicon, AdmitsOnMemberFraction) {
  // 17 members on separate axes; the candidate is close to exactly one, so
  // its agreement ratio is 1/17 ~ 0.0588, just over the 0.05 bar.
  const std::size_t dim = 18;
  EmbeddingStore store;
  SeedSet seeds;
  for (int i = 0; i < 17; ++i) {
    const std::string w = (i < 10 ? "s0" : "s") + std::to_string(i);
    store.insert(w, axis(dim, static_cast<std::size_t>(i)), 10);
    seeds["joy"].insert(w);
  }
  auto cand_vec = axis(dim, 0);
  cand_vec[17] = 0.1;
  store.insert("cand", cand_vec, 10);

  const EmotionLexicon lex = expand_lexicon(seeds, store, 0.05, 0.6);
  ASSERT_TRUE(lex.contains("cand"));
  EXPECT_EQ(*lex.label_of("cand"), "joy");
  EXPECT_EQ(lex.size(), 18u);

  // At a higher bar the same candidate stays out: 1/17 < 0.1.
  const EmotionLexicon strict = expand_lexicon(seeds, store, 0.1, 0.6);
  EXPECT_FALSE(strict.contains("cand"));
}

TEST(ExpandLexicon, RejectsCandidatesWithNoAgreement) {
  EmbeddingStore store;
  store.insert("seed", {1.0, 0.0}, 10);
  store.insert("far", {0.3, 1.0}, 10);  // cosine ~0.29, below sim_min
  SeedSet seeds{{"joy", {"seed"}}};
  const EmotionLexicon lex = expand_lexicon(seeds, store, 0.05, 0.6);
  EXPECT_FALSE(lex.contains("far"));
  EXPECT_EQ(lex.size(), 1u);
}

TEST(ExpandLexicon, ExactCrossEmotionTieIsRejected) {
  EmbeddingStore store;
  store.insert("up_seed", {1.0, 0.0}, 10);
  store.insert("down_seed", {0.0, 1.0}, 10);
  store.insert("both", {1.0, 1.0}, 10);  // cosine 0.707 to each seed
  SeedSet seeds{{"up", {"up_seed"}}, {"down", {"down_seed"}}};
  const EmotionLexicon lex = expand_lexicon(seeds, store, 0.05, 0.6);
  EXPECT_FALSE(lex.contains("both"));
}

TEST(ExpandLexicon, HighestRatioWinsAcrossEmotions) {
  EmbeddingStore store;
  store.insert("a1", {1.0, 0.0, 0.0, 0.0}, 10);
  store.insert("a2", {0.9, 0.1, 0.0, 0.0}, 10);
  store.insert("b1", {0.8, 0.2, 0.0, 0.0}, 10);
  store.insert("b2", {0.0, 0.0, 1.0, 0.0}, 10);
  store.insert("cand", {1.0, 0.05, 0.0, 0.0}, 10);
  SeedSet seeds{{"alpha", {"a1", "a2"}}, {"beta", {"b1", "b2"}}};
  // Ratios: alpha 2/2, beta 1/2; both qualify, alpha is larger.
  const EmotionLexicon lex = expand_lexicon(seeds, store, 0.05, 0.6);
  ASSERT_TRUE(lex.contains("cand"));
  EXPECT_EQ(*lex.label_of("cand"), "alpha");
}

TEST(ExpandLexicon, LaterRoundsOnlyGrowTheLexicon) {
  // c2 agrees only with c1, which itself joins in round one, so c2 needs a
  // second pass: membership is frozen while a pass runs.
  EmbeddingStore store;
  store.insert("seed", {1.0, 0.0}, 10);
  store.insert("c1", {1.0, 0.3}, 10);    // cosine to seed ~0.958
  store.insert("c2", {0.45, 1.0}, 10);   // cosine to seed ~0.41, to c1 ~0.65
  SeedSet seeds{{"joy", {"seed"}}};

  const EmotionLexicon one = expand_lexicon(seeds, store, 0.05, 0.6, 15, 1);
  EXPECT_TRUE(one.contains("c1"));
  EXPECT_FALSE(one.contains("c2"));

  const EmotionLexicon two = expand_lexicon(seeds, store, 0.05, 0.6, 15, 2);
  EXPECT_TRUE(two.contains("c1"));
  EXPECT_TRUE(two.contains("c2"));
  for (const auto& [word, emotion] : one.mapping()) {
    ASSERT_TRUE(two.contains(word));
    EXPECT_EQ(*two.label_of(word), emotion);
  }
}

TEST(ExpandLexicon, StopListBlocksAdmission) {
  EmbeddingStore store;
  store.insert("seed", {1.0, 0.0}, 10);
  store.insert("c1", {1.0, 0.3}, 10);
  store.insert("c2", {0.45, 1.0}, 10);
  SeedSet seeds{{"joy", {"seed"}}};
  const EmotionLexicon lex = expand_lexicon(seeds, store, 0.05, 0.6, 15, 3, {"c1"});
  EXPECT_FALSE(lex.contains("c1"));
  EXPECT_FALSE(lex.contains("c2"));  // its only supporter was blocked
  EXPECT_EQ(lex.size(), 1u);
}

TEST(ExpandLexicon, GammaOneRequiresFullAgreement) {
  EmbeddingStore store;
  store.insert("s1", {1.0, 0.0, 0.0}, 10);
  store.insert("s2", {0.5, 0.866, 0.0}, 10);           // 60 degrees from s1
  store.insert("near_both", {0.966, 0.259, 0.0}, 10);  // ~15 degrees: close to both
  store.insert("near_one", {0.766, -0.643, 0.0}, 10);  // ~-40 degrees: close to s1 only
  SeedSet seeds{{"joy", {"s1", "s2"}}};
  const EmotionLexicon lex = expand_lexicon(seeds, store, 1.0, 0.6);
  EXPECT_TRUE(lex.contains("near_both"));
  EXPECT_FALSE(lex.contains("near_one"));
}

TEST(ExpandLexicon, ValidatesInputs) {
  EmbeddingStore store;
  store.insert("seed", {1.0, 0.0}, 10);
  SeedSet seeds{{"joy", {"seed"}}};
  EXPECT_THROW(expand_lexicon(seeds, store, 0.0, 0.6), ConfigError);
  EXPECT_THROW(expand_lexicon(seeds, store, 1.5, 0.6), ConfigError);
  EXPECT_THROW(expand_lexicon(seeds, store, 0.05, 2.0), ConfigError);
  EXPECT_THROW(expand_lexicon(seeds, store, 0.05, 0.6, 0), ConfigError);
  EXPECT_THROW(expand_lexicon(seeds, store, 0.05, 0.6, 15, 0), ConfigError);
  EXPECT_THROW(expand_lexicon(SeedSet{}, store, 0.05, 0.6), DataError);
  EXPECT_THROW(expand_lexicon(SeedSet{{"joy", {}}}, store, 0.05, 0.6), DataError);
  EXPECT_THROW(expand_lexicon(seeds, store, 0.05, 0.6, 15, 1, {"seed"}), DataError);

  SeedSet missing{{"joy", {"seed", "ghost"}}};
  try {
    expand_lexicon(missing, store, 0.05, 0.6);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
  }
}

TEST(ExpandLexicon, IsDeterministic) {
  EmbeddingStore store;
  store.insert("seed", {1.0, 0.0}, 10);
  store.insert("c1", {1.0, 0.3}, 10);
  store.insert("c2", {0.45, 1.0}, 10);
  store.insert("c3", {0.9, 0.2}, 10);
  SeedSet seeds{{"joy", {"seed"}}};
  const EmotionLexicon a = expand_lexicon(seeds, store, 0.05, 0.6, 15, 2);
  const EmotionLexicon b = expand_lexicon(seeds, store, 0.05, 0.6, 15, 2);
  EXPECT_EQ(a.mapping(), b.mapping());
}

TEST(LexiconFile, RoundTripsAndSkipsComments) {
  EmotionLexicon lex;
  lex.add("great", "happy");
  lex.add("awful", "sad");
  const std::string path = testing::TempDir() + "lexicon_roundtrip.tsv";
  lex.save(path, "# config: test");
  const EmotionLexicon back = EmotionLexicon::load(path);
  EXPECT_EQ(back.mapping(), lex.mapping());
  EXPECT_EQ(back.emotions(), (std::set<std::string>{"happy", "sad"}));
  std::remove(path.c_str());

  const std::string bad_path = testing::TempDir() + "lexicon_bad.tsv";
  std::ofstream(bad_path) << "no_tab_here\n";
  EXPECT_THROW(EmotionLexicon::load(bad_path), DataError);
  std::remove(bad_path.c_str());
}

}  // namespace
