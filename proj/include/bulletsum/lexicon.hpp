#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bulletsum/common.hpp"
#include "bulletsum/embedding.hpp"

namespace bulletsum {

// Word -> emotion label table. Labels are free-form strings; the configured
// label set is whatever the seed file mentions.
class EmotionLexicon {
 public:
  EmotionLexicon() = default;

  bool contains(const std::string& word) const { return mapping_.count(word) != 0; }

  // nullptr when the word carries no label.
  const std::string* label_of(const std::string& word) const {
    auto it = mapping_.find(word);
    return it == mapping_.end() ? nullptr : &it->second;
  }

  void add(const std::string& word, const std::string& emotion) {
    mapping_[word] = emotion;
    emotions_.insert(emotion);
  }

  std::size_t size() const { return mapping_.size(); }
  const std::map<std::string, std::string>& mapping() const { return mapping_; }
  const std::set<std::string>& emotions() const { return emotions_; }

  // File format: "word<TAB>emotion" lines; '#' comments and blanks skipped.
  static EmotionLexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon file: " + path);
    EmotionLexicon lex;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
        throw DataError(path + ":" + std::to_string(line_no) + ": expected 'word<TAB>emotion'");
      lex.add(line.substr(0, tab), line.substr(tab + 1));
    }
    return lex;
  }

  void save(const std::string& path, const std::string& header = "") const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write lexicon file: " + path);
    if (!header.empty()) out << header << '\n';
    for (const auto& [word, emotion] : mapping_) out << word << '\t' << emotion << '\n';
  }

  std::map<std::string, std::set<std::string>> by_emotion() const {
    std::map<std::string, std::set<std::string>> groups;
    for (const auto& e : emotions_) groups[e];
    for (const auto& [word, emotion] : mapping_) groups[emotion].insert(word);
    return groups;
  }

 private:
  std::map<std::string, std::string> mapping_;
  std::set<std::string> emotions_;
};

using SeedSet = std::map<std::string, std::set<std::string>>;  // emotion -> seed words

// Seed files reuse the lexicon format.
inline SeedSet load_seeds(const std::string& path) {
  EmotionLexicon lex = EmotionLexicon::load(path);
  SeedSet seeds;
  for (const auto& [word, emotion] : lex.mapping()) seeds[emotion].insert(word);
  return seeds;
}

inline void save_seeds(const SeedSet& seeds, const std::string& path,
                       const std::string& header = "") {
  EmotionLexicon lex;
  for (const auto& [emotion, words] : seeds)
    for (const auto& w : words) lex.add(w, emotion);
  lex.save(path, header);
}

// Grows the seed lexicon by embedding-neighborhood agreement. Each pass
// pools the top_n_exp neighbors of every current member, then admits a
// candidate into emotion e when at least `gamma_overlap` of e's members sit
// within cosine `sim_min` of it. Membership is frozen per pass, so newly
// admitted words only pull others in from the next pass on. A candidate
// whose best ratio is tied across emotions is rejected for that pass.
inline EmotionLexicon expand_lexicon(const SeedSet& seeds, const EmbeddingStore& store,
                                     double gamma_overlap, double sim_min, int top_n_exp = 15,
                                     int rounds = 1,
                                     const std::set<std::string>& stop_list = {}) {
  if (!(gamma_overlap > 0.0 && gamma_overlap <= 1.0))
    throw ConfigError("gamma_overlap must lie in (0, 1]");
  if (sim_min < -1.0 || sim_min > 1.0) throw ConfigError("sim_min must lie in [-1, 1]");
  if (top_n_exp < 1) throw ConfigError("top_n_exp must be at least 1");
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
  if (seeds.empty()) throw DataError("seed set is empty");

  std::vector<std::string> missing;
  for (const auto& [emotion, words] : seeds) {
    if (words.empty()) throw DataError("emotion '" + emotion + "' has no seed words");
    for (const auto& w : words) {
      if (!store.contains(w)) missing.push_back(w + " (" + emotion + ")");
      if (stop_list.count(w))
        throw DataError("seed word '" + w + "' also appears in the stop list");
    }
  }
  if (!missing.empty()) {
    std::string msg = "seed words missing from the embedding store:";
    for (const auto& m : missing) msg += " " + m;
    throw DataError(msg);
  }

  EmotionLexicon lex;
  std::map<std::string, std::set<std::string>> members;  // emotion -> current members
  for (const auto& [emotion, words] : seeds) {
    members[emotion] = words;
    for (const auto& w : words) lex.add(w, emotion);
  }

  for (int round = 0; round < rounds; ++round) {
    // Candidate pool for this pass: neighbors of members, minus anything
    // already labeled or stop-listed. std::map keeps evaluation order
    // lexicographic.
    std::map<std::string, std::set<std::string>> pool;  // candidate -> emotions proposing it
    for (const auto& [emotion, words] : members) {
      for (const auto& m : words) {
        for (const auto& [nbr, sim] : store.top_n_neighbors(m, static_cast<std::size_t>(top_n_exp))) {
          (void)sim;
          if (lex.contains(nbr) || stop_list.count(nbr)) continue;
          pool[nbr].insert(emotion);
        }
      }
    }

    std::vector<std::pair<std::string, std::string>> accepted;
    for (const auto& [cand, emotions] : pool) {
      // Best qualifying ratio; exact cross-emotion ties disqualify.
      std::string best_emotion;
      long long best_num = 0, best_den = 1;
      bool tied = false;
      for (const auto& emotion : emotions) {
        const auto& grp = members.at(emotion);
        long long num = 0;
        for (const auto& m : grp)
          if (store.cosine(cand, m) >= sim_min) ++num;
        const long long den = static_cast<long long>(grp.size());
        if (static_cast<double>(num) < gamma_overlap * static_cast<double>(den)) continue;
        if (best_emotion.empty() || num * best_den > best_num * den) {
          best_emotion = emotion;
          best_num = num;
          best_den = den;
          tied = false;
        } else if (num * best_den == best_num * den) {
          tied = true;
        }
      }
      if (!best_emotion.empty() && !tied) accepted.emplace_back(cand, best_emotion);
    }

    for (const auto& [word, emotion] : accepted) {
      lex.add(word, emotion);
      members[emotion].insert(word);
    }
  }
  return lex;
}

}  // namespace bulletsum
