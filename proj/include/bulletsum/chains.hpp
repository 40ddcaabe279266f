#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bulletsum/common.hpp"
#include "bulletsum/concept_map.hpp"
#include "bulletsum/corpus.hpp"
#include "bulletsum/embedding.hpp"

namespace bulletsum {

struct ChainEntry {
  std::string word;
  double time_s = 0.0;
  int comment_id = 0;
};

// Consecutive mentions of one concept with inter-mention gaps <= l_max.
struct LexicalChain {
  std::string concept_id;
  std::vector<ChainEntry> entries;  // in stream order

  double first_time() const { return entries.front().time_s; }
  double last_time() const { return entries.back().time_s; }
};

// All chains of a stream plus, per comment, the chains it participates in.
class ChainIndex {
 public:
  const std::map<std::string, std::vector<LexicalChain>>& chains() const { return chains_; }

  bool has_concept(const std::string& concept_id) const {
    return chains_.count(concept_id) != 0;
  }

  // Chain memberships of a comment as (concept id, chain ordinal) pairs,
  // one per distinct concept; nullptr when the comment is unknown.
  const std::vector<std::pair<std::string, std::size_t>>* chains_of(int comment_id) const {
    auto it = refs_.find(comment_id);
    return it == refs_.end() ? nullptr : &it->second;
  }

  const LexicalChain& chain(const std::string& concept_id, std::size_t ordinal) const {
    return chains_.at(concept_id).at(ordinal);
  }

  void append_entry(const std::string& concept_id, bool open_new, ChainEntry entry) {
    auto& list = chains_[concept_id];
    if (open_new || list.empty()) list.push_back(LexicalChain{concept_id, {}});
    list.back().entries.push_back(std::move(entry));
  }

  void note_membership(int comment_id, const std::string& concept_id, std::size_t ordinal) {
    auto& refs = refs_[comment_id];
    for (const auto& [k, ord] : refs)
      if (k == concept_id && ord == ordinal) return;
    refs.emplace_back(concept_id, ordinal);
  }

 private:
  std::map<std::string, std::vector<LexicalChain>> chains_;
  std::map<int, std::vector<std::pair<std::string, std::size_t>>> refs_;
};

// Scans comments in time order and extends each concept's most recent chain
// while the gap stays within l_max, opening a new chain otherwise. Tokens of
// one comment that share a concept land in the same chain (their gap is 0).
inline ChainIndex build_chains(const CommentStream& stream, const ConceptMap& cmap,
                               double l_max) {
  if (l_max <= 0.0) throw ConfigError("l_max must be positive");
  ChainIndex index;
  for (const auto& c : stream.comments) {
    for (const auto& tok : c.tokens) {
      const std::string& k = cmap.concept_of(tok);
      bool open_new = false;
      const auto it = index.chains().find(k);
      if (it == index.chains().end() || it->second.empty()) {
        open_new = true;
      } else {
        open_new = c.time_s - it->second.back().last_time() > l_max;
      }
      index.append_entry(k, open_new, ChainEntry{tok, c.time_s, c.id});
      index.note_membership(c.id, k, index.chains().at(k).size() - 1);
    }
  }
  return index;
}

// Chain weight: rarer words contribute more. Counts are floored at 2 by the
// store, so every term is finite and positive.
inline double chain_score(const LexicalChain& chain, const EmbeddingStore& store) {
  if (chain.entries.empty()) throw DataError("chain_score: empty chain");
  double score = 0.0;
  for (const auto& e : chain.entries)
    score += 1.0 / std::log(static_cast<double>(store.global_count(e.word)));
  return score;
}

// Moves each comment to the head of its strongest chain: among the chains
// the comment participates in, the one with the highest score wins (ties:
// earlier first entry, then smaller concept id) and the comment's
// calibrated time becomes that chain's first entry time. Comments without
// any chain keep their time. An index built from a different stream is a
// consistency error.
inline CommentStream calibrate(const CommentStream& stream, const ChainIndex& index,
                               const ConceptMap& cmap, const EmbeddingStore& store) {
  CommentStream out = stream;
  std::map<const LexicalChain*, double> score_memo;
  const auto score_of = [&](const LexicalChain& chain) {
    auto it = score_memo.find(&chain);
    if (it != score_memo.end()) return it->second;
    const double s = chain_score(chain, store);
    score_memo.emplace(&chain, s);
    return s;
  };

  for (auto& c : out.comments) {
    const auto* refs = index.chains_of(c.id);
    if (refs == nullptr || refs->empty()) {
      // Legitimate only when none of the comment's concepts formed chains;
      // otherwise the index belongs to another stream.
      for (const auto& tok : c.tokens)
        if (index.has_concept(cmap.concept_of(tok)))
          throw DataError("calibrate: comment " + std::to_string(c.id) +
                          " is not indexed although its concepts are; chain index does not "
                          "match this stream");
      continue;
    }

    const LexicalChain* best = nullptr;
    double best_score = 0.0;
    for (const auto& [concept_id, ordinal] : *refs) {
      const LexicalChain& chain = index.chain(concept_id, ordinal);
      const double s = score_of(chain);
      if (best == nullptr || s > best_score ||
          (s == best_score && (chain.first_time() < best->first_time() ||
                               (chain.first_time() == best->first_time() &&
                                chain.concept_id < best->concept_id)))) {
        best = &chain;
        best_score = s;
      }
    }
    c.calibrated_time_s = best->first_time();
  }

  std::stable_sort(out.comments.begin(), out.comments.end(),
                   [](const Comment& a, const Comment& b) {
                     if (a.calibrated_time_s != b.calibrated_time_s)
                       return a.calibrated_time_s < b.calibrated_time_s;
                     return a.id < b.id;
                   });
  return out;
}

}  // namespace bulletsum
