#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bulletsum/common.hpp"
#include "bulletsum/embedding.hpp"

namespace bulletsum {

// Total map from stream vocabulary to concept ids. A concept id is the word
// that founded the group; singletons map to themselves.
class ConceptMap {
 public:
  ConceptMap() = default;

  const std::string& concept_of(const std::string& word) const {
    auto it = mapping_.find(word);
    if (it == mapping_.end()) throw DataError("word not in concept map: '" + word + "'");
    return it->second;
  }

  bool contains(const std::string& word) const { return mapping_.count(word) != 0; }
  const std::map<std::string, std::string>& mapping() const { return mapping_; }
  std::size_t size() const { return mapping_.size(); }

  std::size_t concept_count() const {
    std::set<std::string> ids;
    for (const auto& [w, k] : mapping_) ids.insert(k);
    return ids.size();
  }

  void assign(const std::string& word, const std::string& concept_id) {
    mapping_[word] = concept_id;
  }

  // Every word is its own concept; handy in tests and as a null model.
  static ConceptMap identity(const std::vector<std::string>& vocab) {
    ConceptMap m;
    for (const auto& w : vocab) m.mapping_[w] = w;
    return m;
  }

  void save(const std::string& path, const std::string& header = "") const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write concept map: " + path);
    if (!header.empty()) out << header << '\n';
    for (const auto& [word, k] : mapping_) out << word << '\t' << k << '\n';
  }

 private:
  std::map<std::string, std::string> mapping_;
};

// Groups the vocabulary by embedding neighborhoods. Words are visited from
// most to least frequent; each joins the existing concept that owns at
// least `phi_overlap` of its top_n in-vocabulary neighbors (ties pick the
// lexicographically smaller id) or founds a new one, and then drags its
// still-unassigned neighbors along. Assignments are never revised.
// Out-of-store words become singleton concepts.
inline ConceptMap build_concept_map(const std::vector<std::string>& stream_vocab,
                                    const EmbeddingStore& store, int top_n,
                                    double phi_overlap) {
  if (top_n < 1) throw ConfigError("top_n must be at least 1");
  if (!(phi_overlap > 0.0 && phi_overlap <= 1.0))
    throw ConfigError("phi_overlap must lie in (0, 1]");

  const std::set<std::string> vocab(stream_vocab.begin(), stream_vocab.end());
  std::set<std::string> in_store;
  for (const auto& w : vocab)
    if (store.contains(w)) in_store.insert(w);

  std::vector<std::string> order(vocab.begin(), vocab.end());
  std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    const long long ca = store.global_count(a), cb = store.global_count(b);
    if (ca != cb) return ca > cb;
    return a < b;
  });

  ConceptMap result;
  std::map<std::string, std::string> assigned;
  for (const auto& w : order) {
    if (assigned.count(w)) continue;
    if (!store.contains(w)) {
      assigned[w] = w;
      continue;
    }
    const auto nbrs = store.top_n_neighbors_among(w, static_cast<std::size_t>(top_n), in_store);

    // Vote among already assigned neighbors; the fraction is over the actual
    // neighbor list length.
    std::map<std::string, int> votes;
    for (const auto& [nbr, sim] : nbrs) {
      (void)sim;
      auto it = assigned.find(nbr);
      if (it != assigned.end()) ++votes[it->second];
    }
    std::string target = w;
    int best = 0;
    for (const auto& [k, v] : votes) {
      if (v > best && static_cast<double>(v) >= phi_overlap * static_cast<double>(nbrs.size())) {
        best = v;
        target = k;
      }
    }
    assigned[w] = target;
    for (const auto& [nbr, sim] : nbrs) {
      (void)sim;
      if (!assigned.count(nbr)) assigned[nbr] = target;
    }
  }

  for (const auto& [w, k] : assigned) result.assign(w, k);
  return result;
}

}  // namespace bulletsum
