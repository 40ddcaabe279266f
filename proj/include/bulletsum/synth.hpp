#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bulletsum/common.hpp"
#include "bulletsum/corpus.hpp"
#include "bulletsum/embedding.hpp"
#include "bulletsum/lexicon.hpp"
#include "bulletsum/rng.hpp"

namespace bulletsum {

// Controls for the synthetic stream generator. Highlights are planted as
// whole shot slots of the default scene length; a fraction of each burst is
// displaced past the slot end to imitate commenting lag.
struct SynthParams {
  double video_length_s = 600.0;
  int n_highlights = 4;
  int burst_size = 20;            // comments per planted highlight
  double background_rate = 0.8;   // comments per second of chatter
  double lag_tail_fraction = 0.0; // share of each burst displaced past the slot
  double lag_spread_s = 10.0;     // displacement drawn from (0, lag_spread_s]
  double emotion_purity = 1.0;    // probability a burst token is an emotion word
  std::uint64_t seed = 1;
};

struct SynthData {
  CommentStream stream;
  std::vector<Interval> reference;  // planted slots, sorted, pairwise disjoint
  EmbeddingStore store;
  EmotionLexicon lexicon;
  SeedSet seeds;  // a strict subset of the lexicon, for expansion runs
};

namespace detail {

constexpr double kSynthSceneLen = 15.0;
constexpr int kEmotionCount = 5;
constexpr int kClusterWords = 6;
constexpr int kNeutralWords = 30;
constexpr int kBurstTokens = 3;
constexpr int kBackgroundTokens = 2;

inline const char* synth_emotion(int i) {
  static const char* names[kEmotionCount] = {"anger", "fear", "happy", "sad", "surprise"};
  return names[i % kEmotionCount];
}

}  // namespace detail

// Builds a stream with known highlight slots, a toy embedding whose clusters
// mirror the planted vocabularies, and a matching emotion lexicon. The same
// seed always yields the same data, byte for byte.
inline SynthData generate_synthetic(const SynthParams& p) {
  if (p.video_length_s <= 0.0) throw ConfigError("video_length_s must be positive");
  if (p.n_highlights < 1) throw ConfigError("n_highlights must be at least 1");
  if (p.burst_size < 1) throw ConfigError("burst_size must be at least 1");
  if (p.background_rate < 0.0) throw ConfigError("background_rate must be non-negative");
  if (p.lag_tail_fraction < 0.0 || p.lag_tail_fraction >= 1.0)
    throw ConfigError("lag_tail_fraction must lie in [0, 1)");
  if (p.lag_spread_s <= 0.0) throw ConfigError("lag_spread_s must be positive");
  if (p.emotion_purity < 0.0 || p.emotion_purity > 1.0)
    throw ConfigError("emotion_purity must lie in [0, 1]");

  using detail::kSynthSceneLen;
  const long n_slots = static_cast<long>(std::floor(p.video_length_s / kSynthSceneLen));
  // Plants sit at least three shot indices apart: the slot right after a
  // plant absorbs its displaced tails, and one more clear slot keeps those
  // tails farther from the next plant than any in-slot chain gap, so lag
  // never welds two plants together downstream.
  std::vector<long> spaced_slots;
  for (long s = 0; s + 2 <= n_slots; s += 3) spaced_slots.push_back(s);
  if (static_cast<long>(spaced_slots.size()) < p.n_highlights)
    throw ConfigError("video too short for " + std::to_string(p.n_highlights) +
                      " highlights: only " + std::to_string(spaced_slots.size()) +
                      " usable slots");

  SynthData data;
  Rng rng(p.seed);

  rng.shuffle_prefix(spaced_slots, static_cast<std::size_t>(p.n_highlights));
  std::vector<long> slots(spaced_slots.begin(), spaced_slots.begin() + p.n_highlights);
  std::sort(slots.begin(), slots.end());
  for (long s : slots)
    data.reference.push_back(Interval{static_cast<double>(s) * kSynthSceneLen,
                                      (static_cast<double>(s) + 1.0) * kSynthSceneLen});

  // Vocabulary: one word cluster per emotion, one per highlight topic, plus
  // neutral chatter that stays out of the embedding on purpose (it collapses
  // to singleton concepts downstream).
  std::vector<std::vector<std::string>> emotion_vocab(detail::kEmotionCount);
  for (int e = 0; e < detail::kEmotionCount; ++e)
    for (int j = 0; j < detail::kClusterWords; ++j)
      emotion_vocab[e].push_back(std::string(detail::synth_emotion(e)) + "_w" + std::to_string(j));
  std::vector<std::vector<std::string>> topic_vocab(p.n_highlights);
  for (int t = 0; t < p.n_highlights; ++t)
    for (int j = 0; j < detail::kClusterWords; ++j)
      topic_vocab[t].push_back("topic" + std::to_string(t) + "_w" + std::to_string(j));
  std::vector<std::string> neutral_vocab;
  for (int j = 0; j < detail::kNeutralWords; ++j) {
    std::string w = "bg";
    if (j < 10) w += "0";
    w += std::to_string(j);
    neutral_vocab.push_back(w);
  }

  const int n_clusters = detail::kEmotionCount + p.n_highlights;
  const std::size_t dim = 2 * static_cast<std::size_t>(n_clusters);
  const auto cluster_vector = [&](int cluster, int member) {
    std::vector<double> v(dim, 0.0);
    v[2 * cluster] = 1.0;
    v[2 * cluster + 1] = 0.08 * (member + 1);  // keeps members distinct, cosine ~0.99
    return v;
  };
  for (int e = 0; e < detail::kEmotionCount; ++e)
    for (int j = 0; j < detail::kClusterWords; ++j)
      data.store.insert(emotion_vocab[e][j], cluster_vector(e, j), 100);
  for (int t = 0; t < p.n_highlights; ++t)
    for (int j = 0; j < detail::kClusterWords; ++j)
      data.store.insert(topic_vocab[t][j], cluster_vector(detail::kEmotionCount + t, j), 100);

  for (int e = 0; e < detail::kEmotionCount; ++e) {
    for (int j = 0; j < detail::kClusterWords; ++j)
      data.lexicon.add(emotion_vocab[e][j], detail::synth_emotion(e));
    for (int j = 0; j < 3; ++j)
      data.seeds[detail::synth_emotion(e)].insert(emotion_vocab[e][j]);
  }

  struct Draft {
    double t;
    std::vector<std::string> tokens;
  };
  std::vector<Draft> drafts;

  const long n_background =
      static_cast<long>(std::llround(p.background_rate * p.video_length_s));
  for (long i = 0; i < n_background; ++i) {
    Draft d;
    d.t = rng.range(0.0, p.video_length_s);
    for (int j = 0; j < detail::kBackgroundTokens; ++j)
      d.tokens.push_back(neutral_vocab[rng.below(neutral_vocab.size())]);
    drafts.push_back(std::move(d));
  }

  const int n_tail = static_cast<int>(std::llround(p.lag_tail_fraction * p.burst_size));
  const int n_head = p.burst_size - n_tail;
  for (int h = 0; h < p.n_highlights; ++h) {
    const Interval& slot = data.reference[static_cast<std::size_t>(h)];
    const std::vector<std::string>& emo = emotion_vocab[h % detail::kEmotionCount];
    const std::vector<std::string>& topic = topic_vocab[h];
    const auto burst_comment = [&](double t) {
      Draft d;
      d.t = t;
      for (int j = 0; j < detail::kBurstTokens; ++j) {
        const bool emotional = rng.unit() < p.emotion_purity;
        const auto& pool = emotional ? emo : topic;
        d.tokens.push_back(pool[rng.below(pool.size())]);
      }
      drafts.push_back(std::move(d));
    };
    for (int i = 0; i < n_head; ++i) burst_comment(rng.range(slot.start_s, slot.end_s));
    for (int i = 0; i < n_tail; ++i)
      burst_comment(slot.end_s + rng.range_open_low(p.lag_spread_s));
  }

  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const Draft& a, const Draft& b) { return a.t < b.t; });
  data.stream.video_id = "synth";
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    Comment c;
    c.id = static_cast<int>(i);
    c.video_id = "synth";
    c.time_s = drafts[i].t;
    c.calibrated_time_s = drafts[i].t;
    c.tokens = std::move(drafts[i].tokens);
    for (std::size_t j = 0; j < c.tokens.size(); ++j) {
      if (j > 0) c.raw_text += ' ';
      c.raw_text += c.tokens[j];
    }
    data.stream.comments.push_back(std::move(c));
  }
  return data;
}

}  // namespace bulletsum
