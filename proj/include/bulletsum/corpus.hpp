#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bulletsum/common.hpp"

namespace bulletsum {

// One time-synchronized comment. `id` is the load order within its video and
// ties against `time_s` keep that order. `calibrated_time_s` starts equal to
// `time_s` and is rewritten by calibration.
struct Comment {
  int id = 0;
  std::string video_id;
  double time_s = 0.0;
  double calibrated_time_s = 0.0;
  std::string raw_text;
  std::vector<std::string> tokens;
};

struct CommentStream {
  std::string video_id;
  std::vector<Comment> comments;  // sorted by (time_s, id)
};

namespace detail {

// Decodes one UTF-8 scalar at `i`, advancing `i`. Invalid lead or truncated
// sequences consume a single byte and map it into a private marker range so
// that distinct raw bytes stay distinct.
inline char32_t decode_scalar(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const unsigned char b0 = byte(i);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    len = 1;
    cp = b0;
  } else if (b0 >= 0xC2 && b0 <= 0xDF) {
    len = 2;
    cp = b0 & 0x1Fu;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    len = 3;
    cp = b0 & 0x0Fu;
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    len = 4;
    cp = b0 & 0x07u;
  }
  if (len == 0 || i + len > s.size()) {
    ++i;
    return 0x110000u + b0;  // past the Unicode range, one marker per byte
  }
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char bk = byte(i + k);
    if ((bk & 0xC0u) != 0x80u) {
      ++i;
      return 0x110000u + b0;
    }
    cp = (cp << 6) | (bk & 0x3Fu);
  }
  i += len;
  return cp;
}

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace detail

// Canonical token form: ASCII letters lowered, then any run of three or more
// identical scalars shortened to exactly two. Folding happens before run
// detection so the result is a fixed point of this function.
inline std::string normalize_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  char32_t prev = 0x7FFFFFFF;
  int run = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    const std::size_t start = i;
    char32_t cp = detail::decode_scalar(raw, i);
    const bool upper = cp >= 'A' && cp <= 'Z';
    if (upper) cp += 32;
    run = (cp == prev) ? run + 1 : 1;
    prev = cp;
    if (run > 2) continue;
    if (upper) {
      out.push_back(static_cast<char>(cp));
    } else {
      out.append(raw.substr(start, i - start));
    }
  }
  return out;
}

// Shot slot containing `time_s`, with shots of fixed length `l_scene`.
inline long shot_index(double time_s, double l_scene) {
  if (l_scene <= 0.0) throw ConfigError("l_scene must be positive");
  if (time_s < 0.0) throw DataError("shot_index: negative timestamp");
  return static_cast<long>(std::floor(time_s / l_scene));
}

namespace detail {

inline std::vector<std::string> whitespace_split(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (is_ascii_space(c)) {
      if (!cur.empty()) parts.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

}  // namespace detail

// Reads one JSONL record per line. Lines that are blank or start with '#'
// are skipped. Required fields: video_id (string), t (number, >= 0),
// text (string). Optional: tokens (array of strings); when absent the text
// is whitespace-split. Tokens are normalized, empty tokens dropped, and
// comments left with no tokens dropped entirely.
inline std::vector<CommentStream> load_streams(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stream file: " + path);

  std::map<std::string, CommentStream> by_video;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = 0;
    while (first < line.size() && detail::is_ascii_space(line[first])) ++first;
    if (first == line.size() || line[first] == '#') continue;

    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad JSON record: " + e.what());
    }
    const std::string where = path + ":" + std::to_string(line_no);
    if (!rec.is_object()) throw DataError(where + ": record is not an object");
    if (!rec.contains("video_id") || !rec["video_id"].is_string())
      throw DataError(where + ": missing string field 'video_id'");
    if (!rec.contains("t") || !rec["t"].is_number())
      throw DataError(where + ": missing numeric field 't'");
    if (!rec.contains("text") || !rec["text"].is_string())
      throw DataError(where + ": missing string field 'text'");

    Comment c;
    c.video_id = rec["video_id"].get<std::string>();
    c.time_s = rec["t"].get<double>();
    c.raw_text = rec["text"].get<std::string>();
    if (c.time_s < 0.0)
      throw DataError(where + ": negative timestamp for video '" + c.video_id + "'");

    std::vector<std::string> raw_tokens;
    if (rec.contains("tokens")) {
      if (!rec["tokens"].is_array())
        throw DataError(where + ": field 'tokens' must be an array of strings");
      for (const auto& t : rec["tokens"]) {
        if (!t.is_string())
          throw DataError(where + ": field 'tokens' must be an array of strings");
        raw_tokens.push_back(t.get<std::string>());
      }
    } else {
      raw_tokens = detail::whitespace_split(c.raw_text);
    }
    for (const auto& t : raw_tokens) {
      std::string norm = normalize_token(t);
      if (!norm.empty()) c.tokens.push_back(std::move(norm));
    }
    if (c.tokens.empty()) continue;

    CommentStream& stream = by_video[c.video_id];
    stream.video_id = c.video_id;
    c.id = static_cast<int>(stream.comments.size());
    c.calibrated_time_s = c.time_s;
    stream.comments.push_back(std::move(c));
  }

  std::vector<CommentStream> streams;
  streams.reserve(by_video.size());
  for (auto& [vid, stream] : by_video) {
    std::stable_sort(stream.comments.begin(), stream.comments.end(),
                     [](const Comment& a, const Comment& b) {
                       if (a.time_s != b.time_s) return a.time_s < b.time_s;
                       return a.id < b.id;
                     });
    streams.push_back(std::move(stream));
  }
  return streams;
}

// Single-video convenience wrapper; zero or multiple videos is an error.
inline CommentStream load_stream(const std::string& path) {
  auto streams = load_streams(path);
  if (streams.empty()) throw DataError("stream file has no comments: " + path);
  if (streams.size() > 1)
    throw DataError("stream file contains " + std::to_string(streams.size()) +
                    " videos, expected one: " + path);
  return std::move(streams.front());
}

}  // namespace bulletsum
