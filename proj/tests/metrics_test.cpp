#include "bulletsum/metrics.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

using namespace bulletsum;

namespace {

TEST(HitEps, RelaxedOverlapOnOpenIntervals) {
  const std::vector<Interval> refs{{10.0, 26.0}};
  EXPECT_EQ(hit_eps({30.0, 45.0}, refs, 5.0), 1);  // 30 < 26 + 5
  EXPECT_EQ(hit_eps({31.0, 45.0}, refs, 5.0), 0);  // touching 31 = 26 + 5 is not overlap
  EXPECT_EQ(hit_eps({40.0, 55.0}, refs, 5.0), 0);
  EXPECT_EQ(hit_eps({0.0, 6.0}, refs, 5.0), 1);    // 10 - 5 < 6
  EXPECT_EQ(hit_eps({10.0, 26.0}, refs, 0.0), 1);  // exact match needs no slack
  EXPECT_EQ(hit_eps({0.0, 10.0}, refs, 0.0), 0);   // adjacency is not overlap
  EXPECT_EQ(hit_eps({0.0, 5.0}, {}, 5.0), 0);
  EXPECT_THROW(hit_eps({0.0, 5.0}, refs, -1.0), ConfigError);
}

TEST(HitEps, MonotoneInEps) {
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> point(0.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = point(gen), b = a + 1.0 + point(gen) / 10.0;
    std::vector<Interval> refs;
    for (int i = 0; i < 3; ++i) {
      const double s = point(gen);
      refs.push_back({s, s + 5.0});
    }
    int prev = 0;
    for (double eps : {0.0, 2.0, 5.0, 20.0, 200.0}) {
      const int hit = hit_eps({a, b}, refs, eps);
      EXPECT_GE(hit, prev);  // widening never turns a hit into a miss
      prev = hit;
    }
    EXPECT_EQ(prev, 1);  // an absurdly wide relaxation always hits
  }
}

TEST(HighlightPrf, CountsHitsOnBothSides) {
  const std::vector<Interval> cands{{0.0, 10.0}, {50.0, 60.0}};
  const std::vector<Interval> refs{{2.0, 8.0}};
  const Prf prf = highlight_prf(cands, refs, 5.0);
  EXPECT_NEAR(prf.precision, 0.5, 1e-12);
  EXPECT_NEAR(prf.recall, 1.0, 1e-12);
  EXPECT_NEAR(prf.f1, 2.0 * 0.5 / 1.5, 1e-12);

  // Identical sets score perfectly even with zero relaxation.
  const Prf perfect = highlight_prf(refs, refs, 0.0);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);

  const Prf empty = highlight_prf({}, refs, 5.0);
  EXPECT_EQ(empty.precision, 0.0);
  EXPECT_EQ(empty.recall, 0.0);
  EXPECT_EQ(empty.f1, 0.0);
}

TEST(HighlightPrf, SwappingSidesSwapsPrecisionAndRecall) {
  std::mt19937 gen(43);
  std::uniform_real_distribution<double> point(0.0, 200.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Interval> a, b;
    for (int i = 0; i < 1 + static_cast<int>(gen() % 5); ++i) {
      const double s = point(gen);
      a.push_back({s, s + 1.0 + point(gen) / 20.0});
    }
    for (int i = 0; i < 1 + static_cast<int>(gen() % 5); ++i) {
      const double s = point(gen);
      b.push_back({s, s + 1.0 + point(gen) / 20.0});
    }
    const Prf ab = highlight_prf(a, b, 5.0);
    const Prf ba = highlight_prf(b, a, 5.0);
    EXPECT_NEAR(ab.precision, ba.recall, 1e-12);
    EXPECT_NEAR(ab.recall, ba.precision, 1e-12);
    EXPECT_NEAR(ab.f1, ba.f1, 1e-12);
  }
}

std::vector<TokenSeq> seqs(std::initializer_list<const char*> sentences) {
  std::vector<TokenSeq> out;
  for (const char* s : sentences) {
    TokenSeq seq;
    std::string cur;
    for (const char* p = s;; ++p) {
      if (*p == ' ' || *p == '\0') {
        if (!cur.empty()) seq.push_back(cur);
        cur.clear();
        if (*p == '\0') break;
      } else {
        cur.push_back(*p);
      }
    }
    out.push_back(seq);
  }
  return out;
}

TEST(RougeN, ClippedCooccurrenceOverReferenceTotal) {
  EXPECT_NEAR(rouge_n(seqs({"a b c"}), seqs({"a b d"}), 1), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(rouge_n(seqs({"a a a"}), seqs({"a b"}), 1), 0.5, 1e-12);  // clipped at ref count
  EXPECT_NEAR(rouge_n(seqs({"a b c"}), seqs({"a b c"}), 2), 1.0, 1e-12);
  EXPECT_NEAR(rouge_n(seqs({"x y"}), seqs({"a b"}), 1), 0.0, 1e-12);
  EXPECT_EQ(rouge_n(seqs({"a"}), seqs({}), 1), 0.0);
  EXPECT_EQ(rouge_n(seqs({"a"}), seqs({"b"}), 2), 0.0);  // no reference bigrams
  EXPECT_THROW(rouge_n(seqs({"a"}), seqs({"a"}), 0), ConfigError);
}

TEST(RougeN, NgramsDoNotCrossSequenceBoundaries) {
  // Pooled as two sequences there is no "b a" bigram on the candidate side.
  EXPECT_NEAR(rouge_n(seqs({"a b", "a b"}), seqs({"b a"}), 2), 0.0, 1e-12);
  EXPECT_NEAR(rouge_n(seqs({"a b a b"}), seqs({"a b a b"}), 2), 1.0, 1e-12);
}

TEST(BleuN, ClippedPrecisionWithBrevityPenalty) {
  EXPECT_NEAR(bleu_n(seqs({"a a a"}), seqs({"a b"}), 1), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(bleu_n(seqs({"a"}), seqs({"a b"}), 1), std::exp(-1.0), 1e-9);
  EXPECT_NEAR(bleu_n(seqs({"a b c"}), seqs({"a b"}), 1), 2.0 / 3.0, 1e-12);  // longer: no penalty
  EXPECT_NEAR(bleu_n(seqs({"a b"}), seqs({"a b"}), 2), 1.0, 1e-12);
  EXPECT_EQ(bleu_n(seqs({}), seqs({"a"}), 1), 0.0);
  EXPECT_EQ(bleu_n(seqs({"a"}), seqs({"a b"}), 2), 0.0);  // no candidate bigrams
  EXPECT_THROW(bleu_n(seqs({"a"}), seqs({"a"}), 0), ConfigError);
}

TEST(F1N, HarmonicMeanWithZeroGuard) {
  EXPECT_EQ(f1_n(1.0, 1.0), 1.0);
  EXPECT_EQ(f1_n(0.0, 0.0), 0.0);
  EXPECT_EQ(f1_n(0.0, 0.7), 0.0);
  EXPECT_NEAR(f1_n(0.25, 0.75), 0.375, 1e-12);
}

TEST(F1N, ReproducesPublishedOperatingPoints) {
  // Known precision/recall pairs and their harmonic means.
  EXPECT_NEAR(f1_n(0.3333, 0.6006), 0.4287, 5e-4);
  EXPECT_NEAR(f1_n(0.1508, 0.3909), 0.2176, 5e-4);
}

// Naive multiset oracle: count every candidate n-gram's matches against a
// mutable copy of the reference bag.
double oracle_overlap(const std::vector<TokenSeq>& cand, const std::vector<TokenSeq>& ref,
                      int n, bool per_reference) {
  std::vector<std::vector<std::string>> cgrams, rgrams;
  const auto collect = [&](const std::vector<TokenSeq>& side,
                           std::vector<std::vector<std::string>>& out) {
    for (const auto& s : side)
      for (std::size_t i = 0; i + n <= s.size(); ++i)
        out.emplace_back(s.begin() + i, s.begin() + i + n);
  };
  collect(cand, cgrams);
  collect(ref, rgrams);
  std::vector<bool> used(rgrams.size(), false);
  long long matches = 0;
  for (const auto& g : cgrams) {
    for (std::size_t j = 0; j < rgrams.size(); ++j) {
      if (!used[j] && rgrams[j] == g) {
        used[j] = true;
        ++matches;
        break;
      }
    }
  }
  const double denom = static_cast<double>(per_reference ? rgrams.size() : cgrams.size());
  return denom == 0.0 ? 0.0 : static_cast<double>(matches) / denom;
}

TEST(RougeAndBleu, MatchNaiveMultisetOracle) {
  std::mt19937 gen(47);
  const char* words[] = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 40; ++trial) {
    const auto random_side = [&]() {
      std::vector<TokenSeq> side;
      const int seqs_n = 1 + static_cast<int>(gen() % 3);
      for (int i = 0; i < seqs_n; ++i) {
        TokenSeq s;
        const int len = static_cast<int>(gen() % 13);
        for (int j = 0; j < len; ++j) s.push_back(words[gen() % 4]);
        side.push_back(s);
      }
      return side;
    };
    const auto cand = random_side();
    const auto ref = random_side();
    for (int n : {1, 2}) {
      EXPECT_DOUBLE_EQ(rouge_n(cand, ref, n), oracle_overlap(cand, ref, n, true));
      long long ref_tokens = 0, cand_tokens = 0;
      for (const auto& s : ref) ref_tokens += static_cast<long long>(s.size());
      for (const auto& s : cand) cand_tokens += static_cast<long long>(s.size());
      double bp = 1.0;
      if (cand_tokens > 0 && cand_tokens <= ref_tokens)
        bp = std::exp(1.0 - static_cast<double>(ref_tokens) / static_cast<double>(cand_tokens));
      EXPECT_DOUBLE_EQ(bleu_n(cand, ref, n), bp * oracle_overlap(cand, ref, n, false));
    }
  }
}

TEST(EvalReport, RendersStableKeyValueAndJson) {
  EvalReport report;
  report.precision = 0.5;
  report.rouge1 = 1.0 / 3.0;
  const std::string kv = report.to_kv_block();
  EXPECT_NE(kv.find("precision=0.500000\n"), std::string::npos);
  EXPECT_NE(kv.find("rouge1=0.333333\n"), std::string::npos);
  EXPECT_NE(kv.find("f1_2=0.000000\n"), std::string::npos);
  const std::string json = report.to_json_record();
  EXPECT_EQ(json.find("{\"bleu1\":"), 0u);  // alphabetical key order
  EXPECT_NE(json.find("\"precision\":\"0.500000\""), std::string::npos);
}

}  // namespace
