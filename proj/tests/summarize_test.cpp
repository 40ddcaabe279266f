#include "bulletsum/summarize.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bulletsum/concept_map.hpp"
#include "bulletsum/corpus.hpp"
#include "bulletsum/lexicon.hpp"

using namespace bulletsum;

namespace {

Comment make_comment(int id, double t, std::vector<std::string> tokens) {
  Comment c;
  c.id = id;
  c.video_id = "v";
  c.time_s = t;
  c.calibrated_time_s = t;
  c.tokens = std::move(tokens);
  return c;
}

Shot make_shot(std::vector<Comment> comments) {
  Shot s;
  s.index = 0;
  s.interval = {0.0, 15.0};
  s.comments = std::move(comments);
  return s;
}

std::vector<std::string> shot_vocab(const Shot& shot) {
  std::vector<std::string> vocab;
  for (const auto& c : shot.comments) vocab.insert(vocab.end(), c.tokens.begin(), c.tokens.end());
  return vocab;
}

// Independent reference implementation: classic frequency summarization on
// two tracks with comment-level counts and a squared-twice update, applied
// straight from its textbook loop shape. Kept deliberately separate from
// the library code paths.
std::vector<int> oracle_summary(const Shot& shot, const ConceptMap& cmap,
                                const EmotionLexicon& lexicon, double tau, double b) {
  std::map<std::string, double> pw, pc;
  double total = 0.0;
  for (const auto& c : shot.comments) {
    std::set<std::string> seen(c.tokens.begin(), c.tokens.end());
    for (const auto& w : seen) pw[w] += 1.0;
  }
  for (auto& [w, v] : pw) {
    if (lexicon.contains(w)) v *= 1.0 + b;
    total += v;
  }
  for (auto& [w, v] : pw) v /= total;
  for (const auto& [w, v] : pw) pc[cmap.concept_of(w)] += v;

  const std::size_t budget = std::min<std::size_t>(
      static_cast<std::size_t>(std::ceil(tau * static_cast<double>(shot.comments.size()))),
      shot.comments.size());
  std::set<int> taken;
  std::vector<int> picks;
  while (picks.size() < budget) {
    std::string kstar;
    for (const auto& [k, p] : pc)
      if (kstar.empty() || p > pc.at(kstar)) kstar = k;

    const Comment* best = nullptr;
    double best_score = 0.0;
    auto consider = [&](const Comment& c, bool need_kstar) {
      if (taken.count(c.id)) return;
      if (need_kstar) {
        bool has = false;
        for (const auto& w : c.tokens) has = has || cmap.concept_of(w) == kstar;
        if (!has) return;
      }
      double s = 0.0;
      for (const auto& w : c.tokens) s += 0.5 * (pw.at(w) + pc.at(cmap.concept_of(w)));
      s /= static_cast<double>(c.tokens.size());
      const bool wins =
          best == nullptr || s > best_score ||
          (s == best_score && (c.calibrated_time_s < best->calibrated_time_s ||
                               (c.calibrated_time_s == best->calibrated_time_s &&
                                c.id < best->id)));
      if (wins) {
        best = &c;
        best_score = s;
      }
    };
    for (const auto& c : shot.comments) consider(c, true);
    if (best == nullptr)
      for (const auto& c : shot.comments) consider(c, false);

    taken.insert(best->id);
    picks.push_back(best->id);
    std::set<std::string> words(best->tokens.begin(), best->tokens.end());
    std::set<std::string> concepts;
    for (const auto& w : words) concepts.insert(cmap.concept_of(w));
    for (const auto& w : words) pw[w] = std::pow(pw[w], 4.0);
    for (const auto& k : concepts) pc[k] = std::pow(pc[k], 4.0);
  }
  return picks;
}

TEST(SummarizeShot, DownweightsCoveredContentHard) {
  // Two duplicates and a singleton: after "A A" is picked, p(A) drops from
  // 2/3 to (2/3)^4 ~ 0.198 < 1/3, so the second pick is "B" and not the
  // duplicate.
  const Shot shot = make_shot({
      make_comment(0, 1.0, {"a", "a"}),
      make_comment(1, 2.0, {"a", "a"}),
      make_comment(2, 3.0, {"b"}),
  });
  const ConceptMap cmap = ConceptMap::identity({"a", "b"});
  const EmotionLexicon empty_lexicon;
  SummaryConfig cfg;
  cfg.tau_summary = 2.0 / 3.0;
  cfg.b_emotion = 0.0;
  const Summary summary = summarize_shot(shot, cmap, empty_lexicon, cfg);
  EXPECT_EQ(summary.selected, (std::vector<int>{0, 2}));
}

TEST(SummarizeShot, SingleCommentShot) {
  const Shot shot = make_shot({make_comment(4, 1.0, {"hi"})});
  const ConceptMap cmap = ConceptMap::identity({"hi"});
  SummaryConfig cfg;
  cfg.tau_summary = 0.5;
  const Summary summary = summarize_shot(shot, cmap, EmotionLexicon{}, cfg);
  EXPECT_EQ(summary.selected, (std::vector<int>{4}));
}

TEST(SummarizeShot, BudgetIsCeilingCappedAndDuplicateFree) {
  std::mt19937 gen(31);
  const char* words[] = {"u", "v", "w", "x", "y", "z"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Comment> comments;
    const int n = 1 + static_cast<int>(gen() % 8);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> tokens;
      const int len = 1 + static_cast<int>(gen() % 4);
      for (int j = 0; j < len; ++j) tokens.push_back(words[gen() % 6]);
      comments.push_back(make_comment(i, static_cast<double>(i), tokens));
    }
    const Shot shot = make_shot(comments);
    const ConceptMap cmap = ConceptMap::identity(shot_vocab(shot));
    SummaryConfig cfg;
    cfg.tau_summary = (1 + gen() % 10) / 10.0;
    cfg.b_emotion = 0.3;
    const Summary summary = summarize_shot(shot, cmap, EmotionLexicon{}, cfg);

    const auto expect_budget = std::min<std::size_t>(
        static_cast<std::size_t>(std::ceil(cfg.tau_summary * n)), static_cast<std::size_t>(n));
    EXPECT_EQ(summary.selected.size(), expect_budget);
    const std::set<int> unique(summary.selected.begin(), summary.selected.end());
    EXPECT_EQ(unique.size(), summary.selected.size());
  }
}

TEST(SummarizeShot, FullBudgetSelectsEveryCommentOnce) {
  const Shot shot = make_shot({
      make_comment(0, 1.0, {"a"}),
      make_comment(1, 2.0, {"a"}),
      make_comment(2, 3.0, {"b"}),
  });
  const ConceptMap cmap = ConceptMap::identity({"a", "b"});
  SummaryConfig cfg;
  cfg.tau_summary = 1.0;
  const Summary summary = summarize_shot(shot, cmap, EmotionLexicon{}, cfg);
  EXPECT_EQ(std::set<int>(summary.selected.begin(), summary.selected.end()),
            (std::set<int>{0, 1, 2}));
}

TEST(SummarizeShot, EmotionBiasCanFlipTheFirstPick) {
  // "meh meh" dominates on raw counts; with a strong emotion boost the
  // labeled word overtakes it.
  const Shot shot = make_shot({
      make_comment(0, 1.0, {"meh", "meh"}),
      make_comment(1, 2.0, {"meh", "meh"}),
      make_comment(2, 3.0, {"wow"}),
      make_comment(3, 4.0, {"wow"}),
      make_comment(4, 5.0, {"meh"}),
  });
  const ConceptMap cmap = ConceptMap::identity({"meh", "wow"});
  EmotionLexicon lexicon;
  lexicon.add("wow", "surprise");

  SummaryConfig plain;
  plain.tau_summary = 0.2;
  plain.b_emotion = 0.0;
  EXPECT_EQ(summarize_shot(shot, cmap, lexicon, plain).selected, (std::vector<int>{0}));

  SummaryConfig boosted = plain;
  boosted.b_emotion = 2.0;
  EXPECT_EQ(summarize_shot(shot, cmap, lexicon, boosted).selected, (std::vector<int>{2}));
}

TEST(SummaryDistributions, BiasNeverLowersLexiconWordsRelatively) {
  const Shot shot = make_shot({
      make_comment(0, 1.0, {"plain", "nice"}),
      make_comment(1, 2.0, {"plain"}),
      make_comment(2, 3.0, {"nice"}),
  });
  const ConceptMap cmap = ConceptMap::identity({"plain", "nice"});
  EmotionLexicon lexicon;
  lexicon.add("nice", "happy");
  double prev_ratio = 0.0;
  for (double b : {0.0, 0.3, 1.0, 4.0}) {
    const auto [pw, pc] = summary_distributions(shot, cmap, lexicon, b);
    const double ratio = pw.at("nice") / pw.at("plain");
    EXPECT_GE(ratio, prev_ratio);
    prev_ratio = ratio;
    // Both tables stay normalized.
    double ws = 0.0, cs = 0.0;
    for (const auto& [w, p] : pw) ws += p;
    for (const auto& [k, p] : pc) cs += p;
    EXPECT_NEAR(ws, 1.0, 1e-12);
    EXPECT_NEAR(cs, 1.0, 1e-12);
  }
}

TEST(SummarizeShot, MatchesIndependentOracle) {
  std::mt19937 gen(37);
  const char* words[] = {"u", "v", "w", "x", "y", "z"};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Comment> comments;
    const int n = 1 + static_cast<int>(gen() % 5);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> tokens;
      const int len = 1 + static_cast<int>(gen() % 4);
      for (int j = 0; j < len; ++j) tokens.push_back(words[gen() % 6]);
      comments.push_back(make_comment(i, static_cast<double>(gen() % 10), tokens));
    }
    const Shot shot = make_shot(comments);
    // Group u,v into one concept to exercise the concept track.
    ConceptMap cmap = ConceptMap::identity(shot_vocab(shot));
    cmap.assign("u", "uv");
    cmap.assign("v", "uv");
    EmotionLexicon lexicon;
    lexicon.add("z", "happy");
    const double tau = (1 + gen() % 10) / 10.0;
    const double b = (gen() % 2 == 0) ? 0.0 : 0.3;

    SummaryConfig cfg;
    cfg.tau_summary = tau;
    cfg.b_emotion = b;
    const Summary summary = summarize_shot(shot, cmap, lexicon, cfg);
    EXPECT_EQ(summary.selected, oracle_summary(shot, cmap, lexicon, tau, b))
        << "trial " << trial;
  }
}

TEST(SummarizeShot, ValidatesInputs) {
  const Shot shot = make_shot({make_comment(0, 1.0, {"a"})});
  const ConceptMap cmap = ConceptMap::identity({"a"});
  SummaryConfig cfg;
  cfg.tau_summary = 0.0;
  EXPECT_THROW(summarize_shot(shot, cmap, EmotionLexicon{}, cfg), ConfigError);
  cfg.tau_summary = 0.5;
  cfg.b_emotion = -0.1;
  EXPECT_THROW(summarize_shot(shot, cmap, EmotionLexicon{}, cfg), ConfigError);
  cfg.b_emotion = 0.3;
  EXPECT_THROW(summarize_shot(make_shot({}), cmap, EmotionLexicon{}, cfg), DataError);
}

}  // namespace
