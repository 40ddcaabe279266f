#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bulletsum/common.hpp"
#include "bulletsum/concept_map.hpp"
#include "bulletsum/detect.hpp"
#include "bulletsum/lexicon.hpp"

namespace bulletsum {

struct SummaryConfig {
  double tau_summary = 0.3;  // fraction of the shot's comments to keep
  double b_emotion = 0.3;    // weight boost for emotion-bearing words
};

// Comment ids chosen for one shot, in pick order.
struct Summary {
  long shot_index = 0;
  std::vector<int> selected;
};

// Initial word and concept probabilities for a shot. A word's raw weight is
// the number of comments mentioning it, scaled by (1 + b_emotion) when it
// carries an emotion label; concept weights aggregate their words'. Both
// tables are normalized over the shot.
inline std::pair<std::map<std::string, double>, std::map<std::string, double>>
summary_distributions(const Shot& shot, const ConceptMap& cmap, const EmotionLexicon& lexicon,
                      double b_emotion) {
  if (b_emotion < 0.0) throw ConfigError("b_emotion must be non-negative");
  std::map<std::string, double> word_w;
  for (const auto& c : shot.comments) {
    std::set<std::string> seen(c.tokens.begin(), c.tokens.end());
    for (const auto& w : seen) word_w[w] += 1.0;
  }
  double total = 0.0;
  for (auto& [w, v] : word_w) {
    if (lexicon.contains(w)) v *= 1.0 + b_emotion;
    total += v;
  }
  std::map<std::string, double> concept_w;
  for (const auto& [w, v] : word_w) concept_w[cmap.concept_of(w)] += v;
  for (auto& [w, v] : word_w) v /= total;
  for (auto& [k, v] : concept_w) v /= total;
  return {std::move(word_w), std::move(concept_w)};
}

// Greedy concept-first selection. Each round targets the currently most
// probable concept, picks the best-scoring unselected comment mentioning it
// (falling back to the global best when none does), then drives the picked
// comment's word and concept probabilities down by squaring them twice, so
// repeat coverage is punished hard. Probabilities are not renormalized
// between rounds. Budget: ceil(tau_summary * |shot|), capped at the shot
// size; every pick is a distinct comment.
inline Summary summarize_shot(const Shot& shot, const ConceptMap& cmap,
                              const EmotionLexicon& lexicon, const SummaryConfig& cfg) {
  if (!(cfg.tau_summary > 0.0 && cfg.tau_summary <= 1.0))
    throw ConfigError("tau_summary must lie in (0, 1]");
  if (cfg.b_emotion < 0.0) throw ConfigError("b_emotion must be non-negative");
  if (shot.comments.empty()) throw DataError("summarize_shot: shot has no comments");

  auto [p_word, p_concept] = summary_distributions(shot, cmap, lexicon, cfg.b_emotion);

  const std::size_t n = shot.comments.size();
  const std::size_t budget = std::min<std::size_t>(
      static_cast<std::size_t>(std::ceil(cfg.tau_summary * static_cast<double>(n))), n);

  const auto score_of = [&](const Comment& c) {
    double sum = 0.0;
    for (const auto& tok : c.tokens)
      sum += 0.5 * (p_word.at(tok) + p_concept.at(cmap.concept_of(tok)));
    return sum / static_cast<double>(c.tokens.size());
  };
  const auto quad = [](double p) {
    const double sq = p * p;
    return sq * sq;
  };

  Summary result;
  result.shot_index = shot.index;
  std::set<int> taken;
  while (result.selected.size() < budget) {
    // Most probable concept; map order breaks ties toward the smaller id.
    std::string top_concept;
    double top_p = -1.0;
    for (const auto& [k, p] : p_concept) {
      if (p > top_p) {
        top_p = p;
        top_concept = k;
      }
    }

    const auto better = [&](const Comment& cand, double cand_score, const Comment* best,
                            double best_score) {
      if (best == nullptr) return true;
      if (cand_score != best_score) return cand_score > best_score;
      if (cand.calibrated_time_s != best->calibrated_time_s)
        return cand.calibrated_time_s < best->calibrated_time_s;
      return cand.id < best->id;
    };

    const Comment* pick = nullptr;
    double pick_score = 0.0;
    for (const auto& c : shot.comments) {
      if (taken.count(c.id)) continue;
      bool mentions = false;
      for (const auto& tok : c.tokens)
        if (cmap.concept_of(tok) == top_concept) {
          mentions = true;
          break;
        }
      if (!mentions) continue;
      const double s = score_of(c);
      if (better(c, s, pick, pick_score)) {
        pick = &c;
        pick_score = s;
      }
    }
    if (pick == nullptr) {
      // No unselected comment mentions the top concept; fall back to the
      // best-scoring comment overall.
      for (const auto& c : shot.comments) {
        if (taken.count(c.id)) continue;
        const double s = score_of(c);
        if (better(c, s, pick, pick_score)) {
          pick = &c;
          pick_score = s;
        }
      }
    }

    taken.insert(pick->id);
    result.selected.push_back(pick->id);

    std::set<std::string> words(pick->tokens.begin(), pick->tokens.end());
    std::set<std::string> concepts;
    for (const auto& w : words) concepts.insert(cmap.concept_of(w));
    for (const auto& w : words) p_word[w] = quad(p_word[w]);
    for (const auto& k : concepts) p_concept[k] = quad(p_concept[k]);
  }
  return result;
}

}  // namespace bulletsum
