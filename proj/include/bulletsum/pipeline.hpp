#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bulletsum/chains.hpp"
#include "bulletsum/common.hpp"
#include "bulletsum/concept_map.hpp"
#include "bulletsum/corpus.hpp"
#include "bulletsum/detect.hpp"
#include "bulletsum/embedding.hpp"
#include "bulletsum/lexicon.hpp"
#include "bulletsum/metrics.hpp"
#include "bulletsum/summarize.hpp"

namespace bulletsum {

// Every knob of the detection and summarization pipeline, with the
// project-wide defaults.
struct PipelineConfig {
  double l_scene = 15.0;
  double l_max = 11.0;
  int top_n = 15;
  double phi_overlap = 0.5;
  double lambda = 0.9;
  double tau_highlight = 0.1;
  double tau_summary = 0.3;
  double b_emotion = 0.3;
  double gamma_overlap = 0.05;
  double sim_min = 0.6;
  double eps = 5.0;
  double candidate_len_s = 15.0;
  double delta_ent = 0.01;
  bool topic_lexicon_only = false;  // topic mass from emotion-bearing words only
  bool no_calibrate = false;
  std::string baseline;  // empty = full scoring; else random | uniform | spike
  std::uint64_t seed = 0;
  int top_n_exp = 15;
  int rounds = 1;
  long long default_count = 3;

  // Echoed into generated files so a run can be reproduced from its output.
  std::string echo_line() const {
    std::ostringstream out;
    out << "# config:";
    const auto num = [&](const char* key, double v) {
      out << ' ' << key << '=' << detail::format_score(v);
    };
    out << " b_emotion=" << detail::format_score(b_emotion);
    out << " baseline=" << (baseline.empty() ? "none" : baseline);
    num("candidate_len_s", candidate_len_s);
    out << " default_count=" << default_count;
    num("delta_ent", delta_ent);
    num("eps", eps);
    num("gamma_overlap", gamma_overlap);
    num("l_max", l_max);
    num("l_scene", l_scene);
    num("lambda", lambda);
    out << " no_calibrate=" << (no_calibrate ? 1 : 0);
    num("phi_overlap", phi_overlap);
    out << " rounds=" << rounds;
    out << " seed=" << seed;
    num("sim_min", sim_min);
    num("tau_highlight", tau_highlight);
    num("tau_summary", tau_summary);
    out << " top_n=" << top_n;
    out << " top_n_exp=" << top_n_exp;
    out << " topic_lexicon_only=" << (topic_lexicon_only ? 1 : 0);
    return out.str();
  }
};

// Everything one detection run produces for a single video.
struct VideoDetection {
  std::string video_id;
  ConceptMap cmap;
  CommentStream calibrated;
  std::vector<Shot> shots;
  std::vector<ShotScore> scores;  // empty in baseline mode
  HighlightSet highlights;
};

// Runs concept mapping, chaining, calibration, segmentation, scoring and
// selection for one stream. `store` may be null only when neither
// calibration nor concepts are needed (baseline selection on raw times);
// `lexicon` is required for full scoring. `with_concepts` forces the
// concept map to be built even in baseline mode (summaries need it).
inline VideoDetection run_detection(const CommentStream& stream, const EmbeddingStore* store,
                                    const EmotionLexicon* lexicon, const PipelineConfig& cfg,
                                    bool with_concepts = false) {
  VideoDetection out;
  out.video_id = stream.video_id;

  const bool scoring = cfg.baseline.empty();
  const bool need_cmap = scoring || !cfg.no_calibrate || with_concepts;
  if (need_cmap && store == nullptr)
    throw ConfigError("this run needs an embedding store (concept map or calibration)");
  if (scoring && lexicon == nullptr)
    throw ConfigError("full scoring needs an emotion lexicon");

  std::vector<std::string> vocab;
  for (const auto& c : stream.comments)
    vocab.insert(vocab.end(), c.tokens.begin(), c.tokens.end());

  if (need_cmap) out.cmap = build_concept_map(vocab, *store, cfg.top_n, cfg.phi_overlap);

  if (cfg.no_calibrate) {
    out.calibrated = stream;
  } else {
    const ChainIndex index = build_chains(stream, out.cmap, cfg.l_max);
    out.calibrated = calibrate(stream, index, out.cmap, *store);
  }

  out.shots = segment(out.calibrated, cfg.l_scene);
  if (out.shots.empty()) throw DataError("stream has no comments: " + stream.video_id);

  if (scoring) {
    std::vector<double> importances;
    importances.reserve(out.shots.size());
    for (const auto& shot : out.shots) {
      const double ce = emotion_concentration(shot, *lexicon, cfg.delta_ent);
      const double ct = topic_concentration(shot, out.cmap, *store, cfg.delta_ent,
                                            cfg.topic_lexicon_only, lexicon);
      out.scores.push_back(shot_importance(shot, ce, ct, cfg.lambda));
      importances.push_back(out.scores.back().importance);
    }
    out.highlights =
        select_highlights(importances, cfg.tau_highlight, cfg.l_scene, cfg.candidate_len_s);
  } else {
    out.highlights = baseline_select(parse_baseline(cfg.baseline), out.shots,
                                     cfg.tau_highlight, cfg.l_scene, cfg.candidate_len_s,
                                     cfg.seed);
  }
  return out;
}

// Summaries for a set of highlights, one per highlight in timeline order.
// A highlight whose shot holds no comments yields an empty summary.
inline std::vector<Summary> run_summaries(const VideoDetection& det,
                                          const HighlightSet& highlights,
                                          const EmotionLexicon& lexicon,
                                          const PipelineConfig& cfg) {
  SummaryConfig scfg;
  scfg.tau_summary = cfg.tau_summary;
  scfg.b_emotion = cfg.b_emotion;
  std::vector<Summary> out;
  for (const auto& h : highlights) {
    if (h.shot_index < 0 || h.shot_index >= static_cast<long>(det.shots.size()))
      throw DataError("highlight shot index " + std::to_string(h.shot_index) +
                      " is outside the segmented video '" + det.video_id + "'");
    const Shot& shot = det.shots[static_cast<std::size_t>(h.shot_index)];
    if (shot.comments.empty()) {
      out.push_back(Summary{h.shot_index, {}});
      continue;
    }
    out.push_back(summarize_shot(shot, det.cmap, lexicon, scfg));
  }
  return out;
}

// ---------------------------------------------------------------------------
// File formats. All writers start with the config echo; all readers skip
// '#' lines except the "# video<TAB>id" section markers.
// ---------------------------------------------------------------------------

inline void write_highlights_file(std::ostream& out, const std::string& echo,
                                  const std::vector<std::pair<std::string, HighlightSet>>& per_video) {
  if (!echo.empty()) out << echo << '\n';
  for (const auto& [video_id, highlights] : per_video) {
    out << "# video\t" << video_id << '\n';
    for (const auto& h : highlights) {
      out << detail::format_time(h.interval.start_s) << '\t'
          << detail::format_time(h.interval.end_s) << '\t'
          << detail::format_score(h.importance) << '\t' << h.shot_index << '\n';
    }
  }
}

inline void write_intervals_file(std::ostream& out, const std::string& echo,
                                 const std::string& video_id,
                                 const std::vector<Interval>& intervals) {
  if (!echo.empty()) out << echo << '\n';
  out << "# video\t" << video_id << '\n';
  for (const auto& iv : intervals)
    out << detail::format_time(iv.start_s) << '\t' << detail::format_time(iv.end_s) << '\n';
}

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(pos));
      return cols;
    }
    cols.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": bad number '" + s + "'");
  }
}

}  // namespace detail

// Reads any sectioned interval file (reference slots or highlight output);
// columns beyond start/end are ignored.
inline std::map<std::string, std::vector<Interval>> read_video_intervals(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open intervals file: " + path);
  std::map<std::string, std::vector<Interval>> out;
  std::string line, video;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line[0] == '#') {
      const auto cols = detail::split_tabs(line);
      if (cols.size() >= 2 && cols[0] == "# video") {
        video = cols[1];
        out[video];
      }
      continue;
    }
    if (video.empty()) throw DataError(where + ": interval row before any '# video' section");
    const auto cols = detail::split_tabs(line);
    if (cols.size() < 2) throw DataError(where + ": expected at least 'start<TAB>end'");
    Interval iv{detail::parse_double(cols[0], where), detail::parse_double(cols[1], where)};
    if (iv.end_s <= iv.start_s) throw DataError(where + ": empty or inverted interval");
    out[video].push_back(iv);
  }
  return out;
}

// Strict variant used when shot indices matter (summarization reruns).
inline std::map<std::string, HighlightSet> read_highlights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open highlights file: " + path);
  std::map<std::string, HighlightSet> out;
  std::string line, video;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line[0] == '#') {
      const auto cols = detail::split_tabs(line);
      if (cols.size() >= 2 && cols[0] == "# video") {
        video = cols[1];
        out[video];
      }
      continue;
    }
    if (video.empty()) throw DataError(where + ": highlight row before any '# video' section");
    const auto cols = detail::split_tabs(line);
    if (cols.size() != 4)
      throw DataError(where + ": expected 'start<TAB>end<TAB>importance<TAB>shot'");
    Highlight h;
    h.interval.start_s = detail::parse_double(cols[0], where);
    h.interval.end_s = detail::parse_double(cols[1], where);
    h.importance = detail::parse_double(cols[2], where);
    h.shot_index = static_cast<long>(detail::parse_double(cols[3], where));
    out[video].push_back(h);
  }
  return out;
}

namespace detail {

inline std::string sanitize_text(const std::string& text) {
  std::string out = text;
  for (char& c : out)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return out;
}

}  // namespace detail

// One block per highlight: a "shot" header line, then the chosen comments
// in calibrated-time order with their original timestamps and raw text.
// The caller writes the config echo once before the first video.
inline void write_summaries_section(std::ostream& out, const std::string& video_id,
                                    const VideoDetection& det, const HighlightSet& highlights,
                                    const std::vector<Summary>& summaries) {
  out << "# video\t" << video_id << '\n';
  for (std::size_t i = 0; i < highlights.size(); ++i) {
    const Highlight& h = highlights[i];
    const Shot& shot = det.shots[static_cast<std::size_t>(h.shot_index)];
    out << "shot\t" << h.shot_index << '\t' << detail::format_time(h.interval.start_s) << '\t'
        << detail::format_time(h.interval.end_s) << '\n';
    std::vector<const Comment*> picked;
    for (int id : summaries[i].selected)
      for (const auto& c : shot.comments)
        if (c.id == id) picked.push_back(&c);
    std::sort(picked.begin(), picked.end(), [](const Comment* a, const Comment* b) {
      if (a->calibrated_time_s != b->calibrated_time_s)
        return a->calibrated_time_s < b->calibrated_time_s;
      return a->id < b->id;
    });
    for (const Comment* c : picked)
      out << c->id << '\t' << detail::format_time(c->time_s) << '\t'
          << detail::sanitize_text(c->raw_text) << '\n';
    out << '\n';
  }
}

// Token sequences per video for summary scoring: each comment line becomes
// one sequence of normalized whitespace tokens.
inline std::map<std::string, std::vector<TokenSeq>> read_summary_sequences(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open summaries file: " + path);
  std::map<std::string, std::vector<TokenSeq>> out;
  std::string line, video;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line[0] == '#') {
      const auto cols = detail::split_tabs(line);
      if (cols.size() >= 2 && cols[0] == "# video") {
        video = cols[1];
        out[video];
      }
      continue;
    }
    const auto cols = detail::split_tabs(line);
    if (cols[0] == "shot") continue;
    if (video.empty()) throw DataError(where + ": comment row before any '# video' section");
    if (cols.size() < 3) throw DataError(where + ": expected 'id<TAB>time<TAB>text'");
    std::string text = cols[2];
    for (std::size_t i = 3; i < cols.size(); ++i) text += " " + cols[i];
    TokenSeq seq;
    for (const auto& t : detail::whitespace_split(text)) {
      std::string norm = normalize_token(t);
      if (!norm.empty()) seq.push_back(std::move(norm));
    }
    out[video].push_back(std::move(seq));
  }
  return out;
}

// JSONL writer matching the stream loader.
inline void write_stream_file(std::ostream& out, const std::string& echo,
                              const CommentStream& stream) {
  if (!echo.empty()) out << echo << '\n';
  for (const auto& c : stream.comments) {
    nlohmann::ordered_json rec;
    rec["video_id"] = c.video_id;
    rec["t"] = c.time_s;
    rec["text"] = c.raw_text;
    rec["tokens"] = c.tokens;
    out << rec.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Evaluation aggregation.
// ---------------------------------------------------------------------------

namespace detail {

inline void require_same_videos(const std::set<std::string>& cand,
                                const std::set<std::string>& ref, const std::string& what) {
  if (cand == ref) return;
  std::string msg = what + ": video ids differ between candidate and reference;";
  msg += " candidate has {";
  for (const auto& v : cand) msg += " " + v;
  msg += " }, reference has {";
  for (const auto& v : ref) msg += " " + v;
  msg += " }";
  throw DataError(msg);
}

}  // namespace detail

// Micro-averaged interval scores over all videos.
inline Prf evaluate_highlights(const std::map<std::string, std::vector<Interval>>& candidates,
                               const std::map<std::string, std::vector<Interval>>& references,
                               double eps) {
  std::set<std::string> cv, rv;
  for (const auto& [v, x] : candidates) cv.insert(v);
  for (const auto& [v, x] : references) rv.insert(v);
  detail::require_same_videos(cv, rv, "highlights");

  long long cand_hits = 0, cand_total = 0, ref_hits = 0, ref_total = 0;
  for (const auto& [video, cand] : candidates) {
    const auto& ref = references.at(video);
    for (const auto& c : cand) cand_hits += hit_eps(c, ref, eps);
    for (const auto& r : ref) ref_hits += hit_eps(r, cand, eps);
    cand_total += static_cast<long long>(cand.size());
    ref_total += static_cast<long long>(ref.size());
  }
  Prf out;
  if (cand_total > 0) out.precision = static_cast<double>(cand_hits) / static_cast<double>(cand_total);
  if (ref_total > 0) out.recall = static_cast<double>(ref_hits) / static_cast<double>(ref_total);
  out.f1 = f1_of(out.precision, out.recall);
  return out;
}

// Pooled n-gram scores over all videos, n = 1 and 2.
struct SummaryScores {
  double rouge1 = 0.0, rouge2 = 0.0, bleu1 = 0.0, bleu2 = 0.0, f1_1 = 0.0, f1_2 = 0.0;
};

inline SummaryScores evaluate_summaries(
    const std::map<std::string, std::vector<TokenSeq>>& candidates,
    const std::map<std::string, std::vector<TokenSeq>>& references) {
  std::set<std::string> cv, rv;
  for (const auto& [v, x] : candidates) cv.insert(v);
  for (const auto& [v, x] : references) rv.insert(v);
  detail::require_same_videos(cv, rv, "summaries");

  detail::NgramStats s1, s2;
  for (const auto& [video, cand] : candidates) {
    const auto& ref = references.at(video);
    s1.accumulate(cand, ref, 1);
    s2.accumulate(cand, ref, 2);
  }
  SummaryScores out;
  out.rouge1 = s1.rouge();
  out.rouge2 = s2.rouge();
  out.bleu1 = s1.bleu();
  out.bleu2 = s2.bleu();
  out.f1_1 = f1_n(out.bleu1, out.rouge1);
  out.f1_2 = f1_n(out.bleu2, out.rouge2);
  return out;
}

}  // namespace bulletsum
