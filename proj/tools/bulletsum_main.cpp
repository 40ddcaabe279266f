// Command line front end: synthetic data generation, lexicon expansion,
// highlight detection, summarization, evaluation and parameter sweeps.
//
// Exit codes: 0 success, 1 data error, 2 usage/configuration error.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bulletsum/chains.hpp"
#include "bulletsum/common.hpp"
#include "bulletsum/pipeline.hpp"
#include "bulletsum/synth.hpp"

namespace bs = bulletsum;
namespace fs = std::filesystem;

namespace {

struct CliPaths {
  std::string stream, embeddings, counts, lexicon, seeds, stop_list, out, debug_dir;
  std::string highlights, ref_highlights, summaries, ref_summaries;
  std::string config;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw bs::DataError("cannot write output file: " + path);
  return out;
}

std::set<std::string> load_stop_list(const std::string& path) {
  std::set<std::string> words;
  if (path.empty()) return words;
  std::ifstream in(path);
  if (!in) throw bs::DataError("cannot open stop list: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return words;
}

// Shared pipeline flags; every subcommand that runs the pipeline takes the
// same names so a single config file can drive all of them.
void add_pipeline_flags(CLI::App* sub, bs::PipelineConfig& cfg) {
  sub->add_option("--l-scene", cfg.l_scene, "Shot length in seconds");
  sub->add_option("--l-max", cfg.l_max, "Max gap inside a lexical chain, seconds");
  sub->add_option("--top-n", cfg.top_n, "Neighborhood size for concept grouping");
  sub->add_option("--phi-overlap", cfg.phi_overlap, "Neighbor fraction needed to join a concept");
  sub->add_option("--lambda", cfg.lambda, "Weight of emotion vs topic concentration");
  sub->add_option("--tau-highlight", cfg.tau_highlight, "Fraction of shots kept as highlights");
  sub->add_option("--tau-summary", cfg.tau_summary, "Fraction of shot comments kept per summary");
  sub->add_option("--b-emotion", cfg.b_emotion, "Weight boost for emotion-bearing words");
  sub->add_option("--candidate-len", cfg.candidate_len_s, "Highlight window length, seconds");
  sub->add_option("--delta-ent", cfg.delta_ent, "Entropy smoothing constant");
  sub->add_flag("--topic-lexicon-only", cfg.topic_lexicon_only,
                "Restrict topic concentration to emotion-bearing words");
  sub->add_flag("--no-calibrate", cfg.no_calibrate, "Skip lag calibration");
  sub->add_option("--baseline", cfg.baseline, "Selector: random, uniform or spike");
  sub->add_option("--seed", cfg.seed, "Seed for the random baseline");
  sub->add_option("--default-count", cfg.default_count,
                  "Corpus count assumed for words without one");
}

void add_config_file(CLI::App* sub, CliPaths& paths) {
  sub->add_option("--config", paths.config, "Read options from a key=value file");
}

// Merges a `--config FILE` of flat key=value lines into the argument list by
// appending `--key=value` tokens. A key is dropped when the given flag is
// already on the command line (explicit flags win) or when the subcommand
// has no such option, so one file can drive several subcommands. Handled
// here because the argument parser only reads config files attached to the
// top-level command, and every option of this tool lives on a subcommand.
std::vector<std::string> merge_config_args(const CLI::App& app, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      break;
    }
  }
  if (path.empty() || args.empty()) return args;
  const CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) return args;

  std::ifstream in(path);
  if (!in) throw bs::ConfigError("cannot open config file: " + path);

  const auto trim = [](std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
  };
  const auto already_given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw bs::ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    if (key.empty())
      throw bs::ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    const std::string flag = "--" + key;
    if (sub->get_option_no_throw(flag) == nullptr) continue;
    if (already_given(flag)) continue;
    args.push_back(flag + "=" + trim(stripped.substr(eq + 1)));
  }
  return args;
}

bs::EmbeddingStore load_store(const CliPaths& paths, const bs::PipelineConfig& cfg) {
  return bs::EmbeddingStore::load(paths.embeddings, paths.counts, cfg.default_count);
}

void dump_debug(const std::string& dir, const bs::CommentStream& original,
                const bs::VideoDetection& det, const bs::EmbeddingStore* store,
                const bs::PipelineConfig& cfg) {
  fs::create_directories(dir);
  const std::string base = (fs::path(dir) / det.video_id).string();
  det.cmap.save(base + ".concepts.tsv", cfg.echo_line());
  if (!cfg.no_calibrate && store != nullptr) {
    const bs::ChainIndex index = bs::build_chains(original, det.cmap, cfg.l_max);
    auto out = open_out(base + ".chains.tsv");
    out << cfg.echo_line() << '\n';
    for (const auto& [concept_id, chains] : index.chains())
      for (const auto& chain : chains)
        out << concept_id << '\t' << bs::detail::format_time(chain.first_time()) << '\t'
            << bs::detail::format_time(chain.last_time()) << '\t' << chain.entries.size()
            << '\t' << bs::detail::format_score(bs::chain_score(chain, *store)) << '\n';
  }
  auto out = open_out(base + ".calibrated.tsv");
  out << cfg.echo_line() << '\n';
  for (const auto& c : det.calibrated.comments)
    out << c.id << '\t' << bs::detail::format_time(c.time_s) << '\t'
        << bs::detail::format_time(c.calibrated_time_s) << '\n';
}

int cmd_synth(const CliPaths& paths, const bs::SynthParams& params) {
  const bs::SynthData data = bs::generate_synthetic(params);
  std::ostringstream echo;
  echo << "# config: background_rate=" << bs::detail::format_score(params.background_rate)
       << " burst_size=" << params.burst_size
       << " emotion_purity=" << bs::detail::format_score(params.emotion_purity)
       << " lag_spread_s=" << bs::detail::format_score(params.lag_spread_s)
       << " lag_tail_fraction=" << bs::detail::format_score(params.lag_tail_fraction)
       << " n_highlights=" << params.n_highlights << " seed=" << params.seed
       << " video_length_s=" << bs::detail::format_score(params.video_length_s);

  {
    auto out = open_out(paths.out);
    bs::write_stream_file(out, echo.str(), data.stream);
  }
  {
    auto out = open_out(paths.ref_highlights);
    bs::write_intervals_file(out, echo.str(), data.stream.video_id, data.reference);
  }
  if (!paths.embeddings.empty()) data.store.save(paths.embeddings);
  if (!paths.counts.empty()) data.store.save_counts(paths.counts);
  if (!paths.lexicon.empty()) data.lexicon.save(paths.lexicon, echo.str());
  if (!paths.seeds.empty()) bs::save_seeds(data.seeds, paths.seeds, echo.str());
  return 0;
}

int cmd_expand_lexicon(const CliPaths& paths, const bs::PipelineConfig& cfg) {
  const bs::SeedSet seeds = bs::load_seeds(paths.seeds);
  const bs::EmbeddingStore store = load_store(paths, cfg);
  const std::set<std::string> stop = load_stop_list(paths.stop_list);
  const bs::EmotionLexicon lex = bs::expand_lexicon(seeds, store, cfg.gamma_overlap,
                                                    cfg.sim_min, cfg.top_n_exp, cfg.rounds, stop);
  lex.save(paths.out, cfg.echo_line());
  return 0;
}

int cmd_detect(const CliPaths& paths, const bs::PipelineConfig& cfg) {
  const auto streams = bs::load_streams(paths.stream);
  if (streams.empty()) throw bs::DataError("stream file has no comments: " + paths.stream);

  const bool baseline_only = !cfg.baseline.empty() && cfg.no_calibrate;
  std::optional<bs::EmbeddingStore> store;
  if (!paths.embeddings.empty()) store = load_store(paths, cfg);
  if (!store && !baseline_only)
    throw bs::ConfigError("--embeddings is required unless a baseline runs uncalibrated");
  std::optional<bs::EmotionLexicon> lexicon;
  if (!paths.lexicon.empty()) lexicon = bs::EmotionLexicon::load(paths.lexicon);
  if (!lexicon && cfg.baseline.empty())
    throw bs::ConfigError("--lexicon is required for full scoring");

  std::vector<std::pair<std::string, bs::HighlightSet>> per_video;
  for (const auto& stream : streams) {
    const bs::VideoDetection det =
        bs::run_detection(stream, store ? &*store : nullptr, lexicon ? &*lexicon : nullptr, cfg);
    if (!paths.debug_dir.empty())
      dump_debug(paths.debug_dir, stream, det, store ? &*store : nullptr, cfg);
    per_video.emplace_back(det.video_id, det.highlights);
  }
  auto out = open_out(paths.out);
  bs::write_highlights_file(out, cfg.echo_line(), per_video);
  return 0;
}

int cmd_summarize(const CliPaths& paths, const bs::PipelineConfig& cfg) {
  const auto streams = bs::load_streams(paths.stream);
  const auto highlight_map = bs::read_highlights_file(paths.highlights);
  const bs::EmbeddingStore store = load_store(paths, cfg);
  const bs::EmotionLexicon lexicon = bs::EmotionLexicon::load(paths.lexicon);

  std::map<std::string, const bs::CommentStream*> by_id;
  for (const auto& s : streams) by_id[s.video_id] = &s;

  auto out = open_out(paths.out);
  out << cfg.echo_line() << '\n';
  for (const auto& [video_id, highlights] : highlight_map) {
    auto it = by_id.find(video_id);
    if (it == by_id.end())
      throw bs::DataError("highlights mention video '" + video_id +
                          "' which is absent from the stream file");
    const bs::VideoDetection det = bs::run_detection(*it->second, &store, &lexicon, cfg, true);
    const auto summaries = bs::run_summaries(det, highlights, lexicon, cfg);
    bs::write_summaries_section(out, video_id, det, highlights, summaries);
  }
  return 0;
}

int cmd_evaluate(const CliPaths& paths, const bs::PipelineConfig& cfg) {
  if (paths.summaries.empty() != paths.ref_summaries.empty())
    throw bs::ConfigError("--summaries and --ref-summaries must be given together");

  const auto cand = bs::read_video_intervals(paths.highlights);
  const auto ref = bs::read_video_intervals(paths.ref_highlights);
  const bs::Prf prf = bs::evaluate_highlights(cand, ref, cfg.eps);

  bs::EvalReport report;
  report.precision = prf.precision;
  report.recall = prf.recall;
  report.f1 = prf.f1;
  if (!paths.summaries.empty()) {
    const auto cs = bs::read_summary_sequences(paths.summaries);
    const auto rs = bs::read_summary_sequences(paths.ref_summaries);
    const bs::SummaryScores s = bs::evaluate_summaries(cs, rs);
    report.rouge1 = s.rouge1;
    report.rouge2 = s.rouge2;
    report.bleu1 = s.bleu1;
    report.bleu2 = s.bleu2;
    report.f1_1 = s.f1_1;
    report.f1_2 = s.f1_2;
  }

  std::ostringstream body;
  body << "# config: eps=" << bs::detail::format_score(cfg.eps) << '\n'
       << report.to_kv_block() << report.to_json_record() << '\n';
  if (paths.out.empty()) {
    std::cout << body.str();
  } else {
    auto out = open_out(paths.out);
    out << body.str();
  }
  return 0;
}

int cmd_sweep(const CliPaths& paths, const bs::PipelineConfig& base_cfg,
              const std::string& param, const std::vector<double>& values) {
  static const std::set<std::string> kSweepable = {"l_scene",     "l_max",  "phi_overlap",
                                                   "top_n",       "lambda", "b_emotion"};
  if (!kSweepable.count(param)) throw bs::ConfigError("cannot sweep parameter '" + param + "'");
  if (values.empty()) throw bs::ConfigError("--values must list at least one value");
  const bool with_summaries = param == "b_emotion";
  if (with_summaries && paths.ref_summaries.empty())
    throw bs::ConfigError("sweeping b_emotion needs --ref-summaries");

  const auto streams = bs::load_streams(paths.stream);
  const bs::EmbeddingStore store = load_store(paths, base_cfg);
  const bs::EmotionLexicon lexicon = bs::EmotionLexicon::load(paths.lexicon);
  const auto refs = bs::read_video_intervals(paths.ref_highlights);

  auto out = open_out(paths.out);
  out << base_cfg.echo_line() << '\n';
  out << "value,precision,recall,f1";
  if (with_summaries) out << ",rouge1,rouge2";
  out << '\n';

  for (double value : values) {
    bs::PipelineConfig cfg = base_cfg;
    if (param == "l_scene") cfg.l_scene = value;
    else if (param == "l_max") cfg.l_max = value;
    else if (param == "phi_overlap") cfg.phi_overlap = value;
    else if (param == "lambda") cfg.lambda = value;
    else if (param == "b_emotion") cfg.b_emotion = value;
    else if (param == "top_n") {
      if (value != std::floor(value)) throw bs::ConfigError("top_n values must be integers");
      cfg.top_n = static_cast<int>(value);
    }

    std::map<std::string, std::vector<bs::Interval>> cand;
    std::map<std::string, std::vector<bs::TokenSeq>> cand_seqs;
    for (const auto& stream : streams) {
      const bs::VideoDetection det = bs::run_detection(stream, &store, &lexicon, cfg,
                                                       with_summaries);
      auto& ivs = cand[det.video_id];
      for (const auto& h : det.highlights) ivs.push_back(h.interval);
      if (with_summaries) {
        const auto summaries = bs::run_summaries(det, det.highlights, lexicon, cfg);
        auto& seqs = cand_seqs[det.video_id];
        for (const auto& s : summaries) {
          const bs::Shot& shot = det.shots[static_cast<std::size_t>(s.shot_index)];
          for (int id : s.selected)
            for (const auto& c : shot.comments)
              if (c.id == id) seqs.push_back(c.tokens);
        }
      }
    }

    const bs::Prf prf = bs::evaluate_highlights(cand, refs, cfg.eps);
    out << bs::detail::format_score(value) << ',' << bs::detail::format_score(prf.precision)
        << ',' << bs::detail::format_score(prf.recall) << ','
        << bs::detail::format_score(prf.f1);
    if (with_summaries) {
      const auto ref_seqs = bs::read_summary_sequences(paths.ref_summaries);
      const bs::SummaryScores s = bs::evaluate_summaries(cand_seqs, ref_seqs);
      out << ',' << bs::detail::format_score(s.rouge1) << ','
          << bs::detail::format_score(s.rouge2);
    }
    out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crowdsourced time-sync comment highlight detection and summarization",
               "bulletsum"};
  app.require_subcommand(1);

  CliPaths paths;
  bs::PipelineConfig cfg;
  bs::SynthParams synth_params;
  std::string sweep_param;
  std::vector<double> sweep_values;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic stream with known highlights");
  add_config_file(synth, paths);
  synth->add_option("--out-stream", paths.out, "Stream JSONL output path")->required();
  synth->add_option("--out-refs", paths.ref_highlights, "Reference intervals output path")
      ->required();
  synth->add_option("--out-embeddings", paths.embeddings, "Toy vectors output path");
  synth->add_option("--out-counts", paths.counts, "Toy counts output path");
  synth->add_option("--out-lexicon", paths.lexicon, "Toy lexicon output path");
  synth->add_option("--out-seeds", paths.seeds, "Toy seed subset output path");
  synth->add_option("--video-length", synth_params.video_length_s, "Video length in seconds");
  synth->add_option("--n-highlights", synth_params.n_highlights, "Number of planted highlights");
  synth->add_option("--burst-size", synth_params.burst_size, "Comments per planted highlight");
  synth->add_option("--background-rate", synth_params.background_rate,
                    "Background comments per second");
  synth->add_option("--lag-tail-fraction", synth_params.lag_tail_fraction,
                    "Share of each burst displaced past its slot");
  synth->add_option("--lag-spread", synth_params.lag_spread_s,
                    "Maximum displacement in seconds");
  synth->add_option("--emotion-purity", synth_params.emotion_purity,
                    "Probability a burst token is an emotion word");
  synth->add_option("--seed", synth_params.seed, "Generator seed");

  auto* expand = app.add_subcommand("expand-lexicon", "Grow an emotion lexicon from seed words");
  add_config_file(expand, paths);
  expand->add_option("--seeds", paths.seeds, "Seed lexicon, word<TAB>emotion")->required();
  expand->add_option("--embeddings", paths.embeddings, "Word vectors, word2vec text")->required();
  expand->add_option("--counts", paths.counts, "Word counts, word<TAB>count");
  expand->add_option("--out", paths.out, "Expanded lexicon output path")->required();
  expand->add_option("--stop-list", paths.stop_list, "Words never admitted, one per line");
  expand->add_option("--gamma-overlap", cfg.gamma_overlap, "Member fraction needed to admit");
  expand->add_option("--sim-min", cfg.sim_min, "Cosine threshold for member agreement");
  expand->add_option("--top-n-exp", cfg.top_n_exp, "Neighbors pooled per member");
  expand->add_option("--rounds", cfg.rounds, "Expansion passes");
  expand->add_option("--default-count", cfg.default_count,
                     "Corpus count assumed for words without one");

  auto* detect = app.add_subcommand("detect", "Detect highlights in a comment stream");
  add_config_file(detect, paths);
  detect->add_option("--stream", paths.stream, "Comment stream, JSONL")->required();
  detect->add_option("--embeddings", paths.embeddings, "Word vectors, word2vec text");
  detect->add_option("--counts", paths.counts, "Word counts, word<TAB>count");
  detect->add_option("--lexicon", paths.lexicon, "Emotion lexicon, word<TAB>emotion");
  detect->add_option("--out", paths.out, "Highlights output path")->required();
  detect->add_option("--debug-dir", paths.debug_dir, "Directory for intermediate dumps");
  add_pipeline_flags(detect, cfg);

  auto* summarize = app.add_subcommand("summarize", "Summarize detected highlights");
  add_config_file(summarize, paths);
  summarize->add_option("--stream", paths.stream, "Comment stream, JSONL")->required();
  summarize->add_option("--embeddings", paths.embeddings, "Word vectors")->required();
  summarize->add_option("--counts", paths.counts, "Word counts");
  summarize->add_option("--lexicon", paths.lexicon, "Emotion lexicon")->required();
  summarize->add_option("--highlights", paths.highlights, "Highlights file from detect")
      ->required();
  summarize->add_option("--out", paths.out, "Summaries output path")->required();
  add_pipeline_flags(summarize, cfg);

  auto* evaluate = app.add_subcommand("evaluate", "Score highlights and summaries");
  add_config_file(evaluate, paths);
  evaluate->add_option("--highlights", paths.highlights, "Candidate highlights")->required();
  evaluate->add_option("--ref-highlights", paths.ref_highlights, "Reference intervals")
      ->required();
  evaluate->add_option("--summaries", paths.summaries, "Candidate summaries");
  evaluate->add_option("--ref-summaries", paths.ref_summaries, "Reference summaries");
  evaluate->add_option("--eps", cfg.eps, "Hit relaxation in seconds");
  evaluate->add_option("--out", paths.out, "Report output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Re-run detection across parameter values");
  add_config_file(sweep, paths);
  sweep->add_option("--param", sweep_param, "One of l_scene, l_max, phi_overlap, top_n, lambda, b_emotion")
      ->required();
  sweep->add_option("--values", sweep_values, "Comma separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--stream", paths.stream, "Comment stream, JSONL")->required();
  sweep->add_option("--embeddings", paths.embeddings, "Word vectors")->required();
  sweep->add_option("--counts", paths.counts, "Word counts");
  sweep->add_option("--lexicon", paths.lexicon, "Emotion lexicon")->required();
  sweep->add_option("--ref-highlights", paths.ref_highlights, "Reference intervals")->required();
  sweep->add_option("--ref-summaries", paths.ref_summaries, "Reference summaries");
  sweep->add_option("--out", paths.out, "CSV output path")->required();
  sweep->add_option("--eps", cfg.eps, "Hit relaxation in seconds");
  add_pipeline_flags(sweep, cfg);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config_args(app, std::move(args));
  } catch (const bs::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::reverse(args.begin(), args.end());  // the parser consumes from the back
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(paths, synth_params);
    if (expand->parsed()) return cmd_expand_lexicon(paths, cfg);
    if (detect->parsed()) return cmd_detect(paths, cfg);
    if (summarize->parsed()) return cmd_summarize(paths, cfg);
    if (evaluate->parsed()) return cmd_evaluate(paths, cfg);
    if (sweep->parsed()) return cmd_sweep(paths, cfg, sweep_param, sweep_values);
  } catch (const bs::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
