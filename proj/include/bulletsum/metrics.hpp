#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bulletsum/common.hpp"

namespace bulletsum {

// 1 when `candidate` overlaps any reference widened by `eps` on both ends;
// touching endpoints alone do not count as overlap.
inline int hit_eps(const Interval& candidate, const std::vector<Interval>& references,
                   double eps) {
  if (eps < 0.0) throw ConfigError("eps must be non-negative");
  for (const auto& r : references) {
    if (candidate.start_s < r.end_s + eps && r.start_s - eps < candidate.end_s) return 1;
  }
  return 0;
}

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline double f1_of(double precision, double recall) {
  const double s = precision + recall;
  return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

// Interval-level scores: precision is the fraction of candidates that hit a
// reference, recall the fraction of references hit by a candidate, each
// with the same relaxation.
inline Prf highlight_prf(const std::vector<Interval>& candidates,
                         const std::vector<Interval>& references, double eps) {
  Prf out;
  if (!candidates.empty()) {
    int hits = 0;
    for (const auto& c : candidates) hits += hit_eps(c, references, eps);
    out.precision = static_cast<double>(hits) / static_cast<double>(candidates.size());
  }
  if (!references.empty()) {
    int hits = 0;
    for (const auto& r : references) hits += hit_eps(r, candidates, eps);
    out.recall = static_cast<double>(hits) / static_cast<double>(references.size());
  }
  out.f1 = f1_of(out.precision, out.recall);
  return out;
}

using TokenSeq = std::vector<std::string>;

namespace detail {

using NgramBag = std::map<std::vector<std::string>, long long>;

// Pools the n-grams of every sequence into one bag; n-grams never span
// sequence boundaries.
inline NgramBag ngram_bag(const std::vector<TokenSeq>& seqs, int n) {
  NgramBag bag;
  for (const auto& seq : seqs) {
    if (seq.size() < static_cast<std::size_t>(n)) continue;
    for (std::size_t i = 0; i + n <= seq.size(); ++i)
      ++bag[std::vector<std::string>(seq.begin() + i, seq.begin() + i + n)];
  }
  return bag;
}

inline long long total(const NgramBag& bag) {
  long long t = 0;
  for (const auto& [g, c] : bag) t += c;
  return t;
}

inline long long clipped_matches(const NgramBag& cand, const NgramBag& ref) {
  long long m = 0;
  for (const auto& [g, c] : cand) {
    auto it = ref.find(g);
    if (it != ref.end()) m += std::min(c, it->second);
  }
  return m;
}

inline long long token_total(const std::vector<TokenSeq>& seqs) {
  long long t = 0;
  for (const auto& s : seqs) t += static_cast<long long>(s.size());
  return t;
}

// Running match statistics so scores can be pooled across videos.
struct NgramStats {
  long long clipped = 0;
  long long cand_ngrams = 0;
  long long ref_ngrams = 0;
  long long cand_tokens = 0;
  long long ref_tokens = 0;

  void accumulate(const std::vector<TokenSeq>& cand, const std::vector<TokenSeq>& ref, int n) {
    const NgramBag cb = ngram_bag(cand, n);
    const NgramBag rb = ngram_bag(ref, n);
    clipped += clipped_matches(cb, rb);
    cand_ngrams += total(cb);
    ref_ngrams += total(rb);
    cand_tokens += token_total(cand);
    ref_tokens += token_total(ref);
  }

  double rouge() const {
    return ref_ngrams == 0 ? 0.0 : static_cast<double>(clipped) / static_cast<double>(ref_ngrams);
  }

  double bleu() const {
    if (cand_ngrams == 0) return 0.0;
    const double precision =
        static_cast<double>(clipped) / static_cast<double>(cand_ngrams);
    double brevity = 1.0;
    if (cand_tokens <= ref_tokens && cand_tokens > 0)
      brevity = std::exp(1.0 - static_cast<double>(ref_tokens) / static_cast<double>(cand_tokens));
    return brevity * precision;
  }
};

}  // namespace detail

// Recall-oriented n-gram overlap: clipped co-occurrence over the reference
// n-gram total.
inline double rouge_n(const std::vector<TokenSeq>& candidate, const std::vector<TokenSeq>& reference,
                      int n) {
  if (n < 1) throw ConfigError("n-gram order must be at least 1");
  detail::NgramStats stats;
  stats.accumulate(candidate, reference, n);
  return stats.rouge();
}

// Precision-oriented n-gram overlap with a brevity penalty on total token
// counts: 1 when the candidate is longer than the reference, otherwise
// exp(1 - |ref| / |cand|).
inline double bleu_n(const std::vector<TokenSeq>& candidate, const std::vector<TokenSeq>& reference,
                     int n) {
  if (n < 1) throw ConfigError("n-gram order must be at least 1");
  detail::NgramStats stats;
  stats.accumulate(candidate, reference, n);
  return stats.bleu();
}

// Harmonic mean of the precision- and recall-oriented n-gram scores.
inline double f1_n(double bleu, double rouge) { return f1_of(bleu, rouge); }

// One evaluation row. Keys are stable so output diffs cleanly.
struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double bleu1 = 0.0;
  double bleu2 = 0.0;
  double f1_1 = 0.0;
  double f1_2 = 0.0;

  std::string to_kv_block() const {
    std::string out;
    const auto put = [&](const char* key, double v) {
      out += key;
      out += '=';
      out += detail::format_score(v);
      out += '\n';
    };
    put("precision", precision);
    put("recall", recall);
    put("f1", f1);
    put("rouge1", rouge1);
    put("rouge2", rouge2);
    put("bleu1", bleu1);
    put("bleu2", bleu2);
    put("f1_1", f1_1);
    put("f1_2", f1_2);
    return out;
  }

  std::string to_json_record() const {
    nlohmann::ordered_json j;
    // Alphabetical keys keep the record byte-stable.
    j["bleu1"] = detail::format_score(bleu1);
    j["bleu2"] = detail::format_score(bleu2);
    j["f1"] = detail::format_score(f1);
    j["f1_1"] = detail::format_score(f1_1);
    j["f1_2"] = detail::format_score(f1_2);
    j["precision"] = detail::format_score(precision);
    j["recall"] = detail::format_score(recall);
    j["rouge1"] = detail::format_score(rouge1);
    j["rouge2"] = detail::format_score(rouge2);
    return j.dump();
  }
};

}  // namespace bulletsum
