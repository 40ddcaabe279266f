#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bulletsum/chains.hpp"
#include "bulletsum/common.hpp"
#include "bulletsum/concept_map.hpp"
#include "bulletsum/corpus.hpp"
#include "bulletsum/embedding.hpp"
#include "bulletsum/lexicon.hpp"
#include "bulletsum/rng.hpp"

namespace bulletsum {

// Comments falling into one fixed-length slot of the video.
struct Shot {
  long index = 0;
  Interval interval;
  std::vector<Comment> comments;  // sorted by (calibrated_time_s, id)
};

struct ShotScore {
  double c_emotion = 0.0;
  double c_topic = 0.0;
  double j_comment = 0.0;
  double importance = 0.0;
};

struct Highlight {
  long shot_index = 0;
  Interval interval;
  double importance = 0.0;
};

using HighlightSet = std::vector<Highlight>;

// Entropy concentration 1/(H + delta); the cap for a point distribution is
// 1/delta.
namespace detail {

inline double concentration(const std::map<std::string, double>& weights, double delta_ent) {
  double total = 0.0;
  for (const auto& [k, w] : weights) total += w;
  if (total <= 0.0) return 0.0;
  double entropy = 0.0;
  for (const auto& [k, w] : weights) {
    if (w <= 0.0) continue;
    const double p = w / total;
    entropy -= p * std::log(p);
  }
  return 1.0 / (entropy + delta_ent);
}

}  // namespace detail

// Splits a stream into shots of length l_scene by calibrated time. Shots
// with no comments are kept so indices line up with the timeline; the count
// covers through the last calibrated comment.
inline std::vector<Shot> segment(const CommentStream& stream, double l_scene) {
  if (l_scene <= 0.0) throw ConfigError("l_scene must be positive");
  if (stream.comments.empty()) return {};
  long max_index = 0;
  for (const auto& c : stream.comments)
    max_index = std::max(max_index, shot_index(c.calibrated_time_s, l_scene));
  std::vector<Shot> shots(static_cast<std::size_t>(max_index) + 1);
  for (std::size_t i = 0; i < shots.size(); ++i) {
    shots[i].index = static_cast<long>(i);
    shots[i].interval = Interval{static_cast<double>(i) * l_scene,
                                 (static_cast<double>(i) + 1.0) * l_scene};
  }
  for (const auto& c : stream.comments)
    shots[static_cast<std::size_t>(shot_index(c.calibrated_time_s, l_scene))].comments.push_back(c);
  for (auto& s : shots) {
    std::stable_sort(s.comments.begin(), s.comments.end(), [](const Comment& a, const Comment& b) {
      if (a.calibrated_time_s != b.calibrated_time_s)
        return a.calibrated_time_s < b.calibrated_time_s;
      return a.id < b.id;
    });
  }
  return shots;
}

// Reciprocal entropy of the emotion distribution. Token occurrences vote
// with weight 1 for their label; unlabeled tokens do not participate. A
// shot with no labeled tokens scores 0.
inline double emotion_concentration(const Shot& shot, const EmotionLexicon& lexicon,
                                    double delta_ent = 0.01) {
  if (delta_ent <= 0.0) throw ConfigError("delta_ent must be positive");
  std::map<std::string, double> mass;
  for (const auto& c : shot.comments)
    for (const auto& tok : c.tokens) {
      const std::string* label = lexicon.label_of(tok);
      if (label != nullptr) mass[*label] += 1.0;
    }
  return detail::concentration(mass, delta_ent);
}

// Reciprocal entropy of the concept distribution. Each word contributes
// n_w / ln(global_count(w)) to its concept, so frequent-everywhere words are
// damped. With `lexicon_only` set, only words carrying an emotion label
// participate (the stricter published form); `lexicon` is then required.
inline double topic_concentration(const Shot& shot, const ConceptMap& cmap,
                                  const EmbeddingStore& store, double delta_ent = 0.01,
                                  bool lexicon_only = false,
                                  const EmotionLexicon* lexicon = nullptr) {
  if (delta_ent <= 0.0) throw ConfigError("delta_ent must be positive");
  if (lexicon_only && lexicon == nullptr)
    throw ConfigError("topic_concentration: lexicon_only requires a lexicon");
  std::map<std::string, double> word_count;
  for (const auto& c : shot.comments)
    for (const auto& tok : c.tokens) {
      if (lexicon_only && !lexicon->contains(tok)) continue;
      word_count[tok] += 1.0;
    }
  std::map<std::string, double> mass;
  for (const auto& [w, n] : word_count)
    mass[cmap.concept_of(w)] += n / std::log(static_cast<double>(store.global_count(w)));
  return detail::concentration(mass, delta_ent);
}

// Blends the two concentrations and scales by comment volume. Shots with
// fewer than two comments are never highlights (ln would be <= 0).
inline ShotScore shot_importance(const Shot& shot, double c_emotion, double c_topic,
                                 double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw ConfigError("lambda must lie in [0, 1]");
  ShotScore s;
  s.c_emotion = c_emotion;
  s.c_topic = c_topic;
  s.j_comment = lambda * c_emotion + (1.0 - lambda) * c_topic;
  const std::size_t n = shot.comments.size();
  s.importance = n >= 2 ? s.j_comment * std::log(static_cast<double>(n)) : 0.0;
  return s;
}

namespace detail {

inline HighlightSet indices_to_highlights(std::vector<std::size_t> picked, double l_scene,
                                          double candidate_len_s,
                                          const std::vector<double>& importances) {
  std::sort(picked.begin(), picked.end());
  HighlightSet out;
  out.reserve(picked.size());
  for (std::size_t idx : picked) {
    Highlight h;
    h.shot_index = static_cast<long>(idx);
    h.interval.start_s = static_cast<double>(idx) * l_scene;
    h.interval.end_s = h.interval.start_s + candidate_len_s;
    h.importance = importances.empty() ? 0.0 : importances[idx];
    out.push_back(h);
  }
  return out;
}

inline std::size_t budget_for(std::size_t n_shots, double tau_highlight) {
  if (!(tau_highlight > 0.0 && tau_highlight <= 1.0))
    throw ConfigError("tau_highlight must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(std::floor(tau_highlight * static_cast<double>(n_shots)));
  return std::max<std::size_t>(1, std::min(k, n_shots));
}

}  // namespace detail

// Keeps the k = max(1, floor(tau * N)) highest-importance shots, breaking
// ties toward earlier shots, and reports them in timeline order as
// [start, start + candidate_len) windows.
inline HighlightSet select_highlights(const std::vector<double>& importances,
                                      double tau_highlight, double l_scene,
                                      double candidate_len_s) {
  if (importances.empty()) throw DataError("select_highlights: no shots");
  if (l_scene <= 0.0) throw ConfigError("l_scene must be positive");
  if (candidate_len_s <= 0.0) throw ConfigError("candidate_len_s must be positive");
  const std::size_t k = detail::budget_for(importances.size(), tau_highlight);

  std::vector<std::size_t> order(importances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (importances[a] != importances[b]) return importances[a] > importances[b];
    return a < b;
  });
  order.resize(k);
  return detail::indices_to_highlights(std::move(order), l_scene, candidate_len_s, importances);
}

enum class BaselineMethod { kRandom, kUniform, kSpike };

inline BaselineMethod parse_baseline(const std::string& name) {
  if (name == "random") return BaselineMethod::kRandom;
  if (name == "uniform") return BaselineMethod::kUniform;
  if (name == "spike") return BaselineMethod::kSpike;
  throw ConfigError("unknown baseline method: '" + name + "'");
}

// Reference selectors sharing the highlight budget rule. `random` draws k
// distinct shots with a seeded generator, `uniform` spreads k shots evenly,
// `spike` ranks shots by comment count (ties toward earlier shots, count
// reported as the importance).
inline HighlightSet baseline_select(BaselineMethod method, const std::vector<Shot>& shots,
                                    double tau_highlight, double l_scene,
                                    double candidate_len_s, std::uint64_t seed = 0) {
  if (shots.empty()) throw DataError("baseline_select: no shots");
  if (l_scene <= 0.0) throw ConfigError("l_scene must be positive");
  if (candidate_len_s <= 0.0) throw ConfigError("candidate_len_s must be positive");
  const std::size_t n = shots.size();
  const std::size_t k = detail::budget_for(n, tau_highlight);

  std::vector<std::size_t> picked;
  std::vector<double> importances(n, 0.0);
  switch (method) {
    case BaselineMethod::kRandom: {
      Rng rng(seed);
      picked = rng.sample_indices(n, k);
      break;
    }
    case BaselineMethod::kUniform: {
      for (std::size_t i = 0; i < k; ++i) picked.push_back(i * n / k);
      break;
    }
    case BaselineMethod::kSpike: {
      for (std::size_t i = 0; i < n; ++i)
        importances[i] = static_cast<double>(shots[i].comments.size());
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (importances[a] != importances[b]) return importances[a] > importances[b];
        return a < b;
      });
      order.resize(k);
      picked = std::move(order);
      break;
    }
  }
  return detail::indices_to_highlights(std::move(picked), l_scene, candidate_len_s, importances);
}

}  // namespace bulletsum
