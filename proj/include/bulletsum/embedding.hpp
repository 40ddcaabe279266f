#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bulletsum/common.hpp"

namespace bulletsum {

// Word vectors plus corpus frequencies. Entries live in a std::map so every
// scan over the vocabulary runs in lexicographic order.
class EmbeddingStore {
 public:
  struct Entry {
    std::vector<double> vec;
    long long count = 0;
    double norm = 0.0;
  };

  EmbeddingStore() = default;

  std::size_t size() const { return entries_.size(); }
  std::size_t dim() const { return dim_; }
  bool contains(const std::string& word) const { return entries_.count(word) != 0; }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  long long default_count() const { return default_count_; }
  void set_default_count(long long c) {
    if (c < 2) throw ConfigError("default_count must be at least 2");
    default_count_ = c;
  }

  // Last insert wins for duplicate words; zero vectors are rejected.
  void insert(const std::string& word, std::vector<double> vec, long long count) {
    if (vec.empty()) throw DataError("empty vector for word '" + word + "'");
    if (dim_ == 0) dim_ = vec.size();
    if (vec.size() != dim_)
      throw DataError("vector for '" + word + "' has dimension " +
                      std::to_string(vec.size()) + ", expected " + std::to_string(dim_));
    double sq = 0.0;
    for (double v : vec) sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm == 0.0) throw DataError("zero vector for word '" + word + "'");
    entries_[word] = Entry{std::move(vec), count, norm};
  }

  void set_count(const std::string& word, long long count) {
    auto it = entries_.find(word);
    if (it != entries_.end()) it->second.count = count;
  }

  // Smoothed frequency: stored counts are floored at 2 so 1/ln(count) stays
  // finite; out-of-store words get the default.
  long long global_count(const std::string& word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) return default_count_;
    return std::max<long long>(it->second.count, 2);
  }

  double cosine(const std::string& a, const std::string& b) const {
    const Entry& ea = lookup(a);
    const Entry& eb = lookup(b);
    double dot = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) dot += ea.vec[i] * eb.vec[i];
    return dot / (ea.norm * eb.norm);
  }

  // The n most similar stored words, excluding the query; ordered by
  // similarity descending, then word ascending.
  std::vector<std::pair<std::string, double>> top_n_neighbors(const std::string& word,
                                                              std::size_t n) const {
    const Entry& q = lookup(word);
    std::vector<std::pair<std::string, double>> sims;
    sims.reserve(entries_.size());
    for (const auto& [other, e] : entries_) {
      if (other == word) continue;
      sims.emplace_back(other, cosine_entries(q, e));
    }
    return take_top(std::move(sims), n);
  }

  // Same ranking restricted to `candidates`; words missing from the store
  // are ignored, duplicates collapse.
  std::vector<std::pair<std::string, double>> top_n_neighbors_among(
      const std::string& word, std::size_t n, const std::set<std::string>& candidates) const {
    const Entry& q = lookup(word);
    std::vector<std::pair<std::string, double>> sims;
    sims.reserve(candidates.size());
    for (const auto& other : candidates) {
      if (other == word) continue;
      auto it = entries_.find(other);
      if (it == entries_.end()) continue;
      sims.emplace_back(other, cosine_entries(q, it->second));
    }
    return take_top(std::move(sims), n);
  }

  // Text format: header "V D", then V lines "word v1 .. vD". An optional
  // counts file holds "word<TAB>count" lines; words without a count use
  // `default_count`. Recoverable oddities (duplicate word, zero vector) are
  // reported through `warnings` when given.
  static EmbeddingStore load(const std::string& vectors_path, const std::string& counts_path,
                             long long default_count = 3,
                             std::vector<std::string>* warnings = nullptr);

  void save(const std::string& vectors_path) const {
    std::ofstream out(vectors_path);
    if (!out) throw DataError("cannot write vectors file: " + vectors_path);
    out << entries_.size() << ' ' << dim_ << '\n';
    for (const auto& [word, e] : entries_) {
      out << word;
      for (double v : e.vec) out << ' ' << detail::format_score(v);
      out << '\n';
    }
  }

  void save_counts(const std::string& counts_path) const {
    std::ofstream out(counts_path);
    if (!out) throw DataError("cannot write counts file: " + counts_path);
    for (const auto& [word, e] : entries_) out << word << '\t' << e.count << '\n';
  }

 private:
  const Entry& lookup(const std::string& word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) throw DataError("out-of-vocabulary word: '" + word + "'");
    return it->second;
  }

  static double cosine_entries(const Entry& a, const Entry& b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.vec.size(); ++i) dot += a.vec[i] * b.vec[i];
    return dot / (a.norm * b.norm);
  }

  static std::vector<std::pair<std::string, double>> take_top(
      std::vector<std::pair<std::string, double>> sims, std::size_t n) {
    std::sort(sims.begin(), sims.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
    if (sims.size() > n) sims.resize(n);
    return sims;
  }

  std::map<std::string, Entry> entries_;
  std::size_t dim_ = 0;
  long long default_count_ = 3;
};

inline EmbeddingStore EmbeddingStore::load(const std::string& vectors_path,
                                           const std::string& counts_path,
                                           long long default_count,
                                           std::vector<std::string>* warnings) {
  std::ifstream in(vectors_path);
  if (!in) throw DataError("cannot open vectors file: " + vectors_path);

  const auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  std::string line;
  long line_no = 0;
  std::size_t expect_words = 0, expect_dim = 0;
  {
    if (!std::getline(in, line))
      throw DataError(vectors_path + ": missing 'V D' header line");
    ++line_no;
    std::istringstream hdr(line);
    if (!(hdr >> expect_words >> expect_dim) || expect_dim == 0)
      throw DataError(vectors_path + ":1: bad 'V D' header line");
  }

  EmbeddingStore store;
  store.set_default_count(default_count);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    if (!(row >> word))
      throw DataError(vectors_path + ":" + std::to_string(line_no) + ": missing word");
    std::vector<double> vec;
    vec.reserve(expect_dim);
    double v;
    while (row >> v) vec.push_back(v);
    if (!row.eof() || vec.size() != expect_dim)
      throw DataError(vectors_path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(expect_dim) + " numeric components for '" + word + "'");
    ++rows;
    if (store.contains(word))
      warn(vectors_path + ":" + std::to_string(line_no) + ": duplicate word '" + word +
           "', keeping the later vector");
    double sq = 0.0;
    for (double x : vec) sq += x * x;
    if (sq == 0.0) {
      warn(vectors_path + ":" + std::to_string(line_no) + ": zero vector for '" + word +
           "', entry skipped");
      continue;
    }
    store.insert(word, std::move(vec), default_count);
  }
  if (rows != expect_words)
    throw DataError(vectors_path + ": header announces " + std::to_string(expect_words) +
                    " words but file has " + std::to_string(rows));

  if (!counts_path.empty()) {
    std::ifstream cin(counts_path);
    if (!cin) throw DataError("cannot open counts file: " + counts_path);
    std::string cline;
    long cline_no = 0;
    while (std::getline(cin, cline)) {
      ++cline_no;
      if (cline.empty()) continue;
      const std::size_t tab = cline.find('\t');
      if (tab == std::string::npos)
        throw DataError(counts_path + ":" + std::to_string(cline_no) +
                        ": expected 'word<TAB>count'");
      const std::string word = cline.substr(0, tab);
      long long count = 0;
      try {
        std::size_t used = 0;
        count = std::stoll(cline.substr(tab + 1), &used);
        if (used != cline.size() - tab - 1) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw DataError(counts_path + ":" + std::to_string(cline_no) + ": bad count for '" +
                        word + "'");
      }
      if (count < 1)
        throw DataError(counts_path + ":" + std::to_string(cline_no) + ": count for '" + word +
                        "' must be at least 1");
      store.set_count(word, count);
    }
  }
  return store;
}

}  // namespace bulletsum
