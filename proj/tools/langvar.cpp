// langvar: corpus construction, counterfactual word-order perturbation,
// n-gram language modeling, and learnability statistics from one binary.
//
// Every subcommand writes its outputs plus a manifest.json (tool version,
// argv, seeds, input digests) into --out-dir, so any run can be replayed
// bit-exactly by re-invoking the recorded argv with a fresh --out-dir.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "langvar/corpus.hpp"
#include "langvar/errors.hpp"
#include "langvar/eval.hpp"
#include "langvar/manifest.hpp"
#include "langvar/ngram.hpp"
#include "langvar/nptree.hpp"
#include "langvar/perturb.hpp"
#include "langvar/text.hpp"
#include "langvar/token_sequence.hpp"
#include "langvar/tokenize.hpp"

namespace {

using namespace langvar;

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string out_dir;
  std::size_t threads = 1;
};

// Called at the top of every subcommand body, before any output is written.
std::filesystem::path prepare_out_dir(const CommonOpts& opts) {
  std::filesystem::create_directories(opts.out_dir);
  return std::filesystem::path(opts.out_dir);
}

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--out-dir", opts.out_dir, "directory for outputs and manifest.json")
      ->required();
  sub->add_option("--threads", opts.threads, "worker thread budget (accepted; evaluation is "
                                             "currently sequential)")
      ->check(CLI::PositiveNumber);
}

std::vector<std::string> manifest_argv(int argc, char** argv) {
  std::vector<std::string> out;
  for (int i = 1; i < argc; ++i) out.emplace_back(argv[i]);
  return out;
}

void emit_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write output file: " + path.string());
  out << content;
}

// One number per line; blank lines are skipped.
std::vector<double> read_number_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open sample file: " + path);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (!trimmed.empty()) trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
    if (trimmed.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(trimmed, &used);
      if (used != trimmed.size()) throw std::invalid_argument(trimmed);
      values.push_back(v);
    } catch (const std::exception&) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": bad number '" << trimmed << "'";
      throw FormatError(msg.str());
    }
  }
  return values;
}

enum class SplitFilter { train, test, all };

SplitFilter parse_split_filter(const std::string& s) {
  if (s == "train") return SplitFilter::train;
  if (s == "test") return SplitFilter::test;
  if (s == "all") return SplitFilter::all;
  throw ConfigError("bad split '" + s + "' (expected train, test, or all)");
}

bool keep_record(const ParallelCorpus& corpus, std::uint64_t id, SplitFilter filter) {
  if (filter == SplitFilter::all) return true;
  const auto it = corpus.splits.find(id);
  const Split split = it == corpus.splits.end() ? Split::train : it->second;
  return filter == SplitFilter::train ? split == Split::train : split == Split::test;
}

std::vector<const SentenceRecord*> selected_records(const ParallelCorpus& corpus,
                                                    const std::string& lang, SplitFilter filter) {
  const auto it = corpus.records.find(lang);
  if (it == corpus.records.end()) {
    throw ConfigError("language '" + lang + "' not present in corpus");
  }
  std::vector<const SentenceRecord*> out;
  for (const auto& rec : it->second) {
    if (keep_record(corpus, rec.id, filter)) out.push_back(&rec);
  }
  return out;
}

std::vector<std::string> selected_texts(const ParallelCorpus& corpus, const std::string& lang,
                                        SplitFilter filter) {
  std::vector<std::string> out;
  for (const auto* rec : selected_records(corpus, lang, filter)) out.push_back(rec->text);
  return out;
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

// ---------------------------------------------------------------------------
// build-corpus
// ---------------------------------------------------------------------------

struct BuildCorpusOpts {
  CommonOpts common;
  std::vector<std::string> sources;
  std::string dedup_lang;
  std::string filter_ascii_lang;
  std::string ref_lang;
  std::optional<std::size_t> test_size;
  std::optional<std::uint64_t> seed;
};

SourceSpec parse_source_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0) {
    throw ConfigError("bad --source '" + text + "' (expected TAG:LANG=PATH[,LANG=PATH...])");
  }
  SourceSpec spec;
  spec.tag = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  std::istringstream in(rest);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ConfigError("bad --source entry '" + item + "' (expected LANG=PATH)");
    }
    spec.files.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  if (spec.files.empty()) {
    throw ConfigError("--source '" + text + "' names no LANG=PATH entries");
  }
  return spec;
}

void run_build_corpus(const BuildCorpusOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  std::vector<SourceSpec> sources;
  std::vector<std::string> input_paths;
  for (const auto& text : opts.sources) {
    sources.push_back(parse_source_spec(text));
    for (const auto& [lang, path] : sources.back().files) input_paths.push_back(path);
  }
  if (opts.test_size && !opts.seed) {
    throw ConfigError("--test-size splits the corpus randomly and requires --seed");
  }

  std::vector<std::string> warnings;
  ParallelCorpus corpus = ingest(sources, &warnings);
  emit_warnings(warnings);
  if (!opts.dedup_lang.empty()) corpus = deduplicate(corpus, opts.dedup_lang);
  if (!opts.filter_ascii_lang.empty()) {
    corpus = filter_records(corpus, ascii_ratio_predicate(opts.filter_ascii_lang));
  }
  if (opts.test_size) corpus = make_splits(corpus, *opts.test_size, *opts.seed);

  write_corpus(corpus, opts.common.out_dir);

  const std::string ref =
      opts.ref_lang.empty() ? *corpus.languages.begin() : opts.ref_lang;
  const CorpusStats table = stats(corpus, ref);
  std::ostringstream tsv;
  tsv << "source\tsentences\twords_" << ref << "\n";
  for (const auto& [source, counts] : table.per_source) {
    tsv << source << '\t' << counts.first << '\t' << counts.second << '\n';
  }
  tsv << "total\t" << table.total_sentences << '\t' << table.total_words << '\n';
  write_text_file(std::filesystem::path(opts.common.out_dir) / "stats.tsv", tsv.str());
  std::cout << tsv.str();

  std::vector<std::uint64_t> seeds;
  if (opts.seed) seeds.push_back(*opts.seed);
  write_manifest(make_manifest("build-corpus", argv, seeds, input_paths), opts.common.out_dir);
}

// ---------------------------------------------------------------------------
// tokenize
// ---------------------------------------------------------------------------

struct TokenizeOpts {
  CommonOpts common;
  std::vector<std::string> corpus_files;
  std::string lang;
  std::string split = "train";
  std::string train_kind;
  std::size_t vocab_size = 0;
  std::string tokenizer_path;
  bool do_tcw = false;
  bool do_suggest = false;
  bool do_encode = false;
};

void run_tokenize(const TokenizeOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  const int actions = (!opts.train_kind.empty() ? 1 : 0) + (opts.do_tcw ? 1 : 0) +
                      (opts.do_suggest ? 1 : 0) + (opts.do_encode ? 1 : 0);
  if (actions != 1) {
    throw ConfigError("tokenize needs exactly one of --train, --tcw, --suggest-vocab, --encode");
  }
  std::vector<std::string> input_paths = opts.corpus_files;
  const ParallelCorpus corpus = read_corpus_files(opts.corpus_files);
  const SplitFilter filter = parse_split_filter(opts.split);
  const auto out_dir = std::filesystem::path(opts.common.out_dir);

  if (!opts.train_kind.empty()) {
    const TokenizerKind kind = parse_tokenizer_kind(opts.train_kind);
    const auto sentences = selected_texts(corpus, opts.lang, filter);
    Tokenizer tok;
    switch (kind) {
      case TokenizerKind::whitespace:
        tok = train_whitespace(sentences);
        break;
      case TokenizerKind::character:
        tok = train_character(sentences);
        break;
      case TokenizerKind::bpe:
        if (opts.vocab_size == 0) {
          throw ConfigError("--train bpe requires --vocab-size");
        }
        tok = train_bpe(sentences, opts.vocab_size);
        break;
    }
    save_tokenizer(tok, (out_dir / "tokenizer.txt").string());
    std::cout << "trained " << tokenizer_kind_name(kind) << " tokenizer: " << tok.vocab.size()
              << " vocabulary entries\n";
  } else if (opts.do_tcw) {
    if (opts.tokenizer_path.empty()) throw ConfigError("--tcw requires --tokenizer");
    const Tokenizer tok = load_tokenizer(opts.tokenizer_path);
    input_paths.push_back(opts.tokenizer_path);
    const double value = tcw(tok, selected_texts(corpus, opts.lang, filter));
    write_text_file(out_dir / "metrics.tsv", "tcw\t" + format_double(value) + "\n");
    std::cout << "tcw\t" << format_double(value) << "\n";
  } else if (opts.do_suggest) {
    const std::uint64_t suggestion = vocab_heuristic(selected_texts(corpus, opts.lang, filter));
    write_text_file(out_dir / "metrics.tsv",
                    "suggested_vocab_size\t" + std::to_string(suggestion) + "\n");
    std::cout << "suggested_vocab_size\t" << suggestion << "\n";
  } else {
    if (opts.tokenizer_path.empty()) throw ConfigError("--encode requires --tokenizer");
    const Tokenizer tok = load_tokenizer(opts.tokenizer_path);
    input_paths.push_back(opts.tokenizer_path);
    std::ostringstream tsv;
    for (const auto* rec : selected_records(corpus, opts.lang, filter)) {
      tsv << rec->id << '\t' << join(encode(tok, rec->text).units, " ") << '\n';
    }
    write_text_file(out_dir / ("encoded." + opts.lang + ".tsv"), tsv.str());
  }
  write_manifest(make_manifest("tokenize", argv, {}, input_paths), opts.common.out_dir);
}

// ---------------------------------------------------------------------------
// perturb
// ---------------------------------------------------------------------------

struct PerturbOpts {
  CommonOpts common;
  std::vector<std::string> corpus_files;
  std::string lang;
  std::string spec_text;
  std::string tokenizer_path;
  std::string trees_path;
  std::string category_map;
  std::optional<std::uint64_t> seed;
  bool verify_recovery = false;
  bool emit_pairs = false;
};

bool spec_needs_seed(const PerturbationSpec& spec) {
  switch (spec.kind) {
    case PerturbationKind::shuffle_local:
      return spec.w.value_or(0) >= 3;
    case PerturbationKind::shuffle_deterministic:
    case PerturbationKind::shuffle_nondeterministic:
      return true;
    default:
      return false;
  }
}

CategoryMap resolve_category_map(const std::string& name_or_path,
                                 std::vector<std::string>* input_paths) {
  const auto presets = preset_category_map_names();
  if (std::find(presets.begin(), presets.end(), name_or_path) != presets.end()) {
    return preset_category_map(name_or_path);
  }
  if (!std::filesystem::exists(name_or_path)) {
    std::ostringstream msg;
    msg << "category map '" << name_or_path << "' is neither a preset (";
    for (std::size_t i = 0; i < presets.size(); ++i) msg << (i ? ", " : "") << presets[i];
    msg << ") nor an existing file";
    throw ConfigError(msg.str());
  }
  input_paths->push_back(name_or_path);
  return load_category_map(name_or_path);
}

void write_tagged_corpus(const ParallelCorpus& corpus, const std::string& out_dir,
                         const std::string& tag) {
  for (const auto& lang : corpus.languages) {
    write_text_file(std::filesystem::path(out_dir) / ("corpus." + lang + "." + tag + ".tsv"),
                    corpus_to_tsv(corpus, lang));
  }
}

void run_perturb_np(const PerturbOpts& opts, const std::string& pattern_text,
                    const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  if (opts.verify_recovery) {
    throw ConfigError("--verify-recovery applies to sequence perturbations, not np patterns "
                      "(phrase reorderings are not invertible from the output alone)");
  }
  if (opts.trees_path.empty() || opts.category_map.empty()) {
    throw ConfigError("np perturbations require --trees and --category-map");
  }
  const NpPattern pattern = parse_np_pattern(pattern_text);
  if (pattern.random && !opts.seed) {
    throw ConfigError("np:random draws random orders and requires --seed");
  }
  std::vector<std::string> input_paths = opts.corpus_files;
  input_paths.push_back(opts.trees_path);

  const ParallelCorpus corpus = read_corpus_files(opts.corpus_files);
  const CategoryMap map = resolve_category_map(opts.category_map, &input_paths);
  std::vector<std::string> tree_errors;
  const auto parsed = read_tree_file(opts.trees_path, &tree_errors);
  emit_warnings(tree_errors);

  const auto ids = corpus.ids();
  if (parsed.size() != ids.size()) {
    std::ostringstream msg;
    msg << "tree file has " << parsed.size() << " lines but the corpus has " << ids.size()
        << " sentences";
    throw FormatError(msg.str());
  }
  std::map<std::uint64_t, TreeNode> trees;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (parsed[i]) trees.emplace(ids[i], *parsed[i]);
  }

  const std::uint64_t seed = opts.seed.value_or(0);
  const NpPerturbResult result = perturb_np_corpus(corpus, trees, pattern, map, seed, opts.lang);
  if (result.skipped > 0) {
    std::cerr << "warning: " << result.skipped
              << " record(s) kept unchanged (missing or mismatched tree)\n";
  }
  const std::string tag = np_pattern_tag(pattern);
  write_tagged_corpus(result.corpus, opts.common.out_dir, tag);

  if (opts.emit_pairs) {
    const auto pairs = extract_minimal_pairs(corpus, result.corpus, opts.lang);
    write_text_file(std::filesystem::path(opts.common.out_dir) / "pairs.tsv",
                    minimal_pairs_to_tsv(pairs));
    std::cout << "minimal pairs: " << pairs.size() << "\n";
  }

  std::vector<std::uint64_t> seeds;
  if (opts.seed) seeds.push_back(*opts.seed);
  write_manifest(make_manifest("perturb", argv, seeds, input_paths), opts.common.out_dir);
}

void run_perturb(const PerturbOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  if (opts.spec_text.rfind("np:", 0) == 0) {
    run_perturb_np(opts, opts.spec_text.substr(3), argv);
    return;
  }

  PerturbationSpec spec;
  try {
    spec = parse_perturbation(opts.spec_text);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) +
                      " (np patterns are spelled np:<order>, e.g. np:dnaN or np:random)");
  }
  if (spec.s && opts.seed && *spec.s != *opts.seed) {
    throw ConfigError("conflicting seeds: spec says s=" + std::to_string(*spec.s) +
                      " but --seed is " + std::to_string(*opts.seed));
  }
  if (!spec.s && opts.seed) spec.s = *opts.seed;
  if (spec_needs_seed(spec) && !spec.s) {
    throw ConfigError("perturbation '" + opts.spec_text +
                      "' is seeded; pass --seed or an s= option in the spec");
  }

  std::vector<std::string> input_paths = opts.corpus_files;
  const ParallelCorpus corpus = read_corpus_files(opts.corpus_files);
  std::optional<Tokenizer> tokenizer;
  if (!opts.tokenizer_path.empty()) {
    tokenizer = load_tokenizer(opts.tokenizer_path);
    input_paths.push_back(opts.tokenizer_path);
  }
  const Tokenizer* tok_ptr = tokenizer ? &*tokenizer : nullptr;

  const ParallelCorpus perturbed = perturb_corpus(spec, corpus, opts.lang, tok_ptr);

  if (opts.verify_recovery) {
    if (spec.kind == PerturbationKind::shuffle_nondeterministic) {
      throw ConfigError("--verify-recovery cannot round-trip shuffle_nondeterministic "
                        "(its permutations are not recoverable by design)");
    }
    const bool token_unit = spec.effective_unit() == PerturbUnit::token;
    const auto& original_records = corpus.records.at(opts.lang);
    const auto& perturbed_records = perturbed.records.at(opts.lang);
    for (std::size_t i = 0; i < original_records.size(); ++i) {
      const auto& rec = original_records[i];
      const TokenSequence seq =
          token_unit ? encode(*tok_ptr, rec.text) : word_sequence(split_ws(rec.text));
      const TokenSequence forward = apply(spec, seq, rec.id);
      if (detokenize(forward) != perturbed_records[i].text) {
        throw OperationError("recovery verification failed: sentence " + std::to_string(rec.id) +
                             " does not reproduce the written output");
      }
      const TokenSequence back = recover(spec, forward, rec.id);
      if (back.units != seq.units || back.word_map != seq.word_map ||
          back.source_pos != seq.source_pos) {
        throw OperationError("recovery verification failed: sentence " + std::to_string(rec.id) +
                             " did not round-trip");
      }
    }
    std::cout << "recovery verified for " << original_records.size() << " sentence(s)\n";
  }

  write_tagged_corpus(perturbed, opts.common.out_dir, perturbation_tag(spec));

  std::vector<std::uint64_t> seeds;
  if (spec.s) seeds.push_back(*spec.s);
  write_manifest(make_manifest("perturb", argv, seeds, input_paths), opts.common.out_dir);
}

// ---------------------------------------------------------------------------
// train-lm
// ---------------------------------------------------------------------------

struct TrainLmOpts {
  CommonOpts common;
  std::vector<std::string> corpus_files;
  std::string lang;
  std::string split = "train";
  std::string tokenizer_path;
  std::size_t order = 3;
  std::string smoothing = "interpolated_wb";
  std::uint64_t unk_threshold = 2;
};

void run_train_lm(const TrainLmOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  std::vector<std::string> input_paths = opts.corpus_files;
  input_paths.push_back(opts.tokenizer_path);
  const ParallelCorpus corpus = read_corpus_files(opts.corpus_files);
  const Tokenizer tok = load_tokenizer(opts.tokenizer_path);
  const SplitFilter filter = parse_split_filter(opts.split);

  std::vector<TokenSequence> training;
  for (const auto* rec : selected_records(corpus, opts.lang, filter)) {
    training.push_back(encode(tok, rec->text));
  }
  const NgramModel model =
      train(training, opts.order, parse_smoothing(opts.smoothing), opts.unk_threshold);
  save_model(model, (std::filesystem::path(opts.common.out_dir) / "model.txt").string());
  std::cout << "trained order-" << model.order << " model ("
            << smoothing_to_string(model.smoothing) << ") on " << training.size()
            << " sentence(s); vocabulary " << model.vocab.size() << "\n";
  write_manifest(make_manifest("train-lm", argv, {}, input_paths), opts.common.out_dir);
}

// ---------------------------------------------------------------------------
// eval-ppl
// ---------------------------------------------------------------------------

struct EvalPplOpts {
  CommonOpts common;
  std::string model_path;
  std::vector<std::string> corpus_files;
  std::string lang;
  std::string split = "test";
  std::string tokenizer_path;
  std::string scores_path;
  std::string aggregation = "sentence_geomean";
  std::string variant = "identity";
  std::string checkpoint = "final";
  std::uint64_t score_seed = 0;
};

std::string perplexity_report_text(const PerplexityReport& report, std::size_t n_sentences) {
  std::ostringstream out;
  out << "sentences\t" << n_sentences << "\n";
  out << "corpus_perplexity\t" << format_double(report.corpus_value) << "\n";
  out << "infinite_sentences\t" << report.infinite_ids.size() << "\n";
  return out.str();
}

void run_eval_ppl(const EvalPplOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  const bool model_mode = !opts.model_path.empty();
  const bool scores_mode = !opts.scores_path.empty();
  if (model_mode == scores_mode) {
    throw ConfigError("eval-ppl needs exactly one of --model (score a corpus) or --scores "
                      "(aggregate an existing score file)");
  }
  const PplAggregation agg = parse_aggregation(opts.aggregation);
  const auto out_dir = std::filesystem::path(opts.common.out_dir);
  std::vector<std::string> input_paths;

  PerplexityReport report;
  std::size_t n_sentences = 0;
  if (model_mode) {
    if (opts.corpus_files.empty() || opts.tokenizer_path.empty()) {
      throw ConfigError("--model mode requires --corpus and --tokenizer");
    }
    input_paths = opts.corpus_files;
    input_paths.push_back(opts.model_path);
    input_paths.push_back(opts.tokenizer_path);
    const NgramModel model = load_model(opts.model_path);
    const Tokenizer tok = load_tokenizer(opts.tokenizer_path);
    const ParallelCorpus corpus = read_corpus_files(opts.corpus_files);
    const SplitFilter filter = parse_split_filter(opts.split);

    std::vector<ScoreRecord> scores;
    std::vector<std::pair<std::uint64_t, TokenSequence>> test;
    for (const auto* rec : selected_records(corpus, opts.lang, filter)) {
      test.emplace_back(rec->id, encode(tok, rec->text));
    }
    if (test.empty()) throw OperationError("no sentences selected for evaluation");
    for (const auto& [id, seq] : test) {
      ScoreRecord record = score(model, seq, id);
      record.variant = opts.variant;
      record.checkpoint = opts.checkpoint;
      record.seed = opts.score_seed;
      scores.push_back(std::move(record));
    }
    write_scores(scores, (out_dir / "scores.tsv").string());
    report = perplexity(model, test, agg);
    n_sentences = test.size();
  } else {
    input_paths.push_back(opts.scores_path);
    std::size_t duplicates = 0;
    const auto scores = ingest_scores(opts.scores_path, &duplicates);
    if (duplicates > 0) {
      std::cerr << "warning: " << duplicates
                << " duplicate (sentence, variant, checkpoint, seed) record(s) replaced\n";
    }
    report = perplexity_from_scores(scores, agg);
    n_sentences = report.per_sentence.size();
  }

  std::ostringstream per_sentence;
  per_sentence << "sentence_id\tperplexity\n";
  for (const auto& [id, value] : report.per_sentence) {
    per_sentence << id << '\t' << format_double(value) << '\n';
  }
  write_text_file(out_dir / "ppl_per_sentence.tsv", per_sentence.str());
  const std::string summary = perplexity_report_text(report, n_sentences);
  write_text_file(out_dir / "ppl.tsv", summary);
  std::cout << summary;
  if (!report.infinite_ids.empty()) {
    std::ostringstream ids;
    for (std::size_t i = 0; i < report.infinite_ids.size(); ++i) {
      ids << (i ? " " : "") << report.infinite_ids[i];
    }
    std::cerr << "warning: infinite perplexity for sentence(s): " << ids.str() << "\n";
  }

  write_manifest(make_manifest("eval-ppl", argv, {opts.score_seed}, input_paths),
                 opts.common.out_dir);
}

// ---------------------------------------------------------------------------
// genscore
// ---------------------------------------------------------------------------

struct GenScoreOpts {
  CommonOpts common;
  std::string pairs_path;
  std::string att_scores_path;
  std::string unatt_scores_path;
  std::string att_variant = "identity";
  std::string unatt_variant;
};

void run_genscore(const GenScoreOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  const std::vector<std::string> input_paths = {opts.pairs_path, opts.att_scores_path,
                                                opts.unatt_scores_path};
  const auto pairs = read_minimal_pairs(opts.pairs_path);
  const auto att_scores = ingest_scores(opts.att_scores_path);
  const auto unatt_scores = ingest_scores(opts.unatt_scores_path);
  const auto joined =
      join_genscore_inputs(pairs, att_scores, unatt_scores, opts.att_variant, opts.unatt_variant);
  const GenScoreResult result = genscore(joined);

  std::ostringstream tsv;
  tsv << "n\texcluded\tties_att\tties_unatt\tgenscore_att\tgenscore_unatt\tdelta\n";
  tsv << result.n << '\t' << result.excluded << '\t' << result.ties_att << '\t'
      << result.ties_unatt << '\t' << format_double(result.genscore_att) << '\t'
      << format_double(result.genscore_unatt) << '\t' << format_double(result.delta) << '\n';
  const auto out_dir = std::filesystem::path(opts.common.out_dir);
  write_text_file(out_dir / "genscore.tsv", tsv.str());

  std::ostringstream indicators;
  indicators << "sentence_id\tattested_model_prefers_attested\tperturbed_model_prefers_perturbed\n";
  for (const auto& [id, ind_att, ind_unatt] : result.indicators) {
    indicators << id << '\t' << (ind_att ? 1 : 0) << '\t' << (ind_unatt ? 1 : 0) << '\n';
  }
  write_text_file(out_dir / "indicators.tsv", indicators.str());

  std::ostringstream report;
  report << "generalization score over " << result.n << " minimal pair(s)\n"
         << "  attested model prefers attested:   " << format_double(result.genscore_att) << "\n"
         << "  perturbed model prefers perturbed: " << format_double(result.genscore_unatt)
         << "\n"
         << "  delta: " << format_double(result.delta) << "\n"
         << "  ties (attested model): " << result.ties_att
         << ", ties (perturbed model): " << result.ties_unatt << "\n"
         << "  pairs excluded for non-finite scores: " << result.excluded << "\n";
  write_text_file(out_dir / "report.txt", report.str());
  std::cout << report.str();

  write_manifest(make_manifest("genscore", argv, {}, input_paths), opts.common.out_dir);
}

// ---------------------------------------------------------------------------
// separability
// ---------------------------------------------------------------------------

struct SeparabilityOpts {
  CommonOpts common;
  std::string trajectories_path;
  std::size_t folds = 10;
  double lambda = 0.1;
  std::uint64_t seed = 0;
  std::size_t iterations = 100000;
  bool average_seeds = false;
};

void run_separability(const SeparabilityOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  TrajectoryMatrix data = read_trajectories(opts.trajectories_path);
  if (opts.average_seeds) data = average_seed_features(data);
  const SeparabilityResult result =
      svm_separability(data, opts.folds, opts.lambda, opts.seed, opts.iterations);
  emit_warnings(result.warnings);

  std::ostringstream tsv;
  tsv << "fold\tmacro_f1\n";
  for (std::size_t f = 0; f < result.fold_f1.size(); ++f) {
    tsv << f << '\t' << format_double(result.fold_f1[f]) << '\n';
  }
  tsv << "mean\t" << format_double(result.mean_f1) << '\n';
  tsv << "sd\t" << format_double(result.sd_f1) << '\n';
  write_text_file(std::filesystem::path(opts.common.out_dir) / "separability.tsv", tsv.str());
  std::cout << "macro-F1 mean " << format_double(result.mean_f1) << " (sd "
            << format_double(result.sd_f1) << ") over " << opts.folds << " folds\n";

  write_manifest(make_manifest("separability", argv, {opts.seed}, {opts.trajectories_path}),
                 opts.common.out_dir);
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsOpts {
  CommonOpts common;
  std::string test;
  std::string a_path;
  std::string b_path;
  std::size_t comparisons = 1;
};

void run_stats(const StatsOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  const auto a = read_number_file(opts.a_path);
  const auto b = read_number_file(opts.b_path);
  std::ostringstream tsv;
  if (opts.test == "spearman") {
    const auto r = spearman(a, b);
    tsv << "test\trho\tp\n";
    tsv << "spearman\t" << format_double(r.rho) << '\t' << format_double(r.p) << '\n';
  } else if (opts.test == "welch") {
    const auto r = welch_t(a, b, opts.comparisons);
    tsv << "test\tt\tdf\tp_raw\tp_bonferroni\n";
    tsv << "welch\t" << format_double(r.t) << '\t' << format_double(r.df) << '\t'
        << format_double(r.p_raw) << '\t' << format_double(r.p_bonferroni) << '\n';
  } else if (opts.test == "mann-whitney") {
    const auto r = mann_whitney(a, b);
    tsv << "test\tu_a\tu_b\tw_a\tw_b\tp\tmethod\n";
    tsv << "mann-whitney\t" << format_double(r.u_a) << '\t' << format_double(r.u_b) << '\t'
        << format_double(r.w_a) << '\t' << format_double(r.w_b) << '\t' << format_double(r.p)
        << '\t' << (r.exact ? "exact" : "normal_approx") << '\n';
  } else {
    throw ConfigError("unknown --test '" + opts.test +
                      "' (expected spearman, welch, or mann-whitney)");
  }
  write_text_file(std::filesystem::path(opts.common.out_dir) / "stats.tsv", tsv.str());
  std::cout << tsv.str();
  write_manifest(make_manifest("stats", argv, {}, {opts.a_path, opts.b_path}),
                 opts.common.out_dir);
}

// ---------------------------------------------------------------------------
// report (perplexity-vs-checkpoint line chart)
// ---------------------------------------------------------------------------

struct ReportOpts {
  CommonOpts common;
  std::vector<std::string> score_files;
  std::string aggregation = "sentence_geomean";
};

struct SeriesPoint {
  std::string checkpoint;
  double value = 0.0;  // mean over seeds
};

bool all_numeric(const std::set<std::string>& labels) {
  for (const auto& label : labels) {
    if (label.empty()) return false;
    for (char c : label) {
      if (c < '0' || c > '9') return false;
    }
  }
  return true;
}

std::string render_chart_svg(const std::vector<std::string>& checkpoints,
                             const std::map<std::string, std::vector<double>>& series) {
  static const char* kPalette[] = {"#4363d8", "#e6194b", "#3cb44b", "#f58231", "#911eb4",
                                   "#46f0f0", "#f032e6", "#808000", "#000075", "#9a6324"};
  const double width = 880, height = 520;
  const double left = 80, right = 660, top = 40, bottom = 460;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [name, values] : series) {
    for (double v : values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) throw OperationError("no finite perplexity values to plot");
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = (hi - lo) * 0.08;
  lo -= pad;
  hi += pad;

  const auto x_at = [&](std::size_t i) {
    if (checkpoints.size() == 1) return (left + right) / 2.0;
    return left + (right - left) * static_cast<double>(i) /
                      static_cast<double>(checkpoints.size() - 1);
  };
  const auto y_at = [&](double v) { return bottom - (bottom - top) * (v - lo) / (hi - lo); };

  std::ostringstream svg;
  svg << std::setprecision(8);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << (left + right) / 2.0
      << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
         "perplexity by training checkpoint</text>\n";

  // Axes.
  svg << "  <line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";

  // Y ticks.
  for (int k = 0; k <= 5; ++k) {
    const double v = lo + (hi - lo) * k / 5.0;
    const double y = y_at(v);
    svg << "  <line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\""
        << y << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << right << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    std::ostringstream label;
    label << std::setprecision(6) << v;
    svg << "  <text x=\"" << left - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label.str()
        << "</text>\n";
  }
  svg << "  <text x=\"24\" y=\"" << (top + bottom) / 2.0
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 24 "
      << (top + bottom) / 2.0 << ")\">perplexity</text>\n";

  // X ticks.
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double x = x_at(i);
    svg << "  <line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\""
        << bottom + 4 << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << x << "\" y=\"" << bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << checkpoints[i] << "</text>\n";
  }
  svg << "  <text x=\"" << (left + right) / 2.0 << "\" y=\"" << bottom + 40
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">training "
         "checkpoint</text>\n";

  // Series.
  std::size_t color = 0;
  double legend_y = top + 10;
  for (const auto& [name, values] : series) {
    const char* stroke = kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream points;
    bool any = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) continue;
      points << (any ? " " : "") << x_at(i) << "," << y_at(values[i]);
      any = true;
    }
    if (any) {
      svg << "  <polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\""
          << points.str() << "\"/>\n";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) continue;
        svg << "  <circle cx=\"" << x_at(i) << "\" cy=\"" << y_at(values[i])
            << "\" r=\"3\" fill=\"" << stroke << "\"/>\n";
      }
    }
    svg << "  <rect x=\"" << right + 16 << "\" y=\"" << legend_y - 9
        << "\" width=\"12\" height=\"12\" fill=\"" << stroke << "\"/>\n";
    svg << "  <text x=\"" << right + 34 << "\" y=\"" << legend_y + 2
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << name << "</text>\n";
    legend_y += 20;
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

void run_report(const ReportOpts& opts, const std::vector<std::string>& argv) {
  prepare_out_dir(opts.common);
  const PplAggregation agg = parse_aggregation(opts.aggregation);
  std::vector<ScoreRecord> all;
  for (const auto& path : opts.score_files) {
    const auto scores = ingest_scores(path);
    all.insert(all.end(), scores.begin(), scores.end());
  }
  if (all.empty()) throw OperationError("score files contain no records");

  // (variant, checkpoint, seed) -> records; perplexity per seed, then the
  // across-seed mean becomes the plotted point.
  std::map<std::string, std::map<std::string, std::map<std::uint64_t, std::vector<ScoreRecord>>>>
      grouped;
  std::set<std::string> checkpoint_labels;
  for (const auto& rec : all) {
    grouped[rec.variant][rec.checkpoint][rec.seed].push_back(rec);
    checkpoint_labels.insert(rec.checkpoint);
  }
  std::vector<std::string> checkpoints(checkpoint_labels.begin(), checkpoint_labels.end());
  if (all_numeric(checkpoint_labels)) {
    std::sort(checkpoints.begin(), checkpoints.end(), [](const auto& a, const auto& b) {
      return std::stoull(a) != std::stoull(b) ? std::stoull(a) < std::stoull(b) : a < b;
    });
  }

  std::ostringstream tsv;
  tsv << "variant\tcheckpoint\tseed\tperplexity\n";
  std::map<std::string, std::vector<double>> series;
  for (const auto& [variant, by_checkpoint] : grouped) {
    auto& values = series[variant];
    for (const auto& label : checkpoints) {
      const auto it = by_checkpoint.find(label);
      if (it == by_checkpoint.end()) {
        values.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& [seed, records] : it->second) {
        const double ppl = perplexity_from_scores(records, agg).corpus_value;
        tsv << variant << '\t' << label << '\t' << seed << '\t' << format_double(ppl) << '\n';
        sum += ppl;
        ++count;
      }
      const double mean = sum / static_cast<double>(count);
      tsv << variant << '\t' << label << "\tmean\t" << format_double(mean) << '\n';
      values.push_back(mean);
    }
  }

  const auto out_dir = std::filesystem::path(opts.common.out_dir);
  write_text_file(out_dir / "report.tsv", tsv.str());
  write_text_file(out_dir / "report.svg", render_chart_svg(checkpoints, series));

  std::ostringstream text;
  text << "perplexity by checkpoint (mean over seeds, " << opts.aggregation << ")\n";
  for (const auto& [variant, values] : series) {
    text << "  " << variant << ":";
    for (std::size_t i = 0; i < values.size(); ++i) {
      text << ' ' << checkpoints[i] << '=' << std::setprecision(6) << values[i];
    }
    text << '\n';
  }
  write_text_file(out_dir / "report.txt", text.str());
  std::cout << text.str();

  write_manifest(make_manifest("report", argv, {}, opts.score_files), opts.common.out_dir);
}

}  // namespace

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"corpus perturbation and learnability evaluation toolkit"};
  app.set_version_flag("--version", std::string(langvar::kToolName) + " " +
                                        langvar::kToolVersion);
  app.require_subcommand(1);
  const auto full_argv = manifest_argv(argc, argv);

  BuildCorpusOpts build_opts;
  auto* build = app.add_subcommand(
      "build-corpus", "ingest aligned sources into a deduplicated, split corpus");
  add_common(build, build_opts.common);
  build->add_option("--source", build_opts.sources,
                    "source spec TAG:LANG=PATH[,LANG=PATH...]; repeatable, aligned by line")
      ->required();
  build->add_option("--dedup-lang", build_opts.dedup_lang,
                    "deduplicate ids by this language's canonical text");
  build->add_option("--filter-ascii", build_opts.filter_ascii_lang,
                    "drop ids whose non-key text is at least 90% ASCII letters; "
                    "value names the key language");
  build->add_option("--ref-lang", build_opts.ref_lang,
                    "language whose word counts appear in stats.tsv");
  build->add_option("--test-size", build_opts.test_size,
                    "hold out this many sentences as the test split");
  build->add_option("--seed", build_opts.seed, "seed for the split shuffle");

  TokenizeOpts tok_opts;
  auto* tokenize = app.add_subcommand(
      "tokenize", "train or apply tokenizers; measure tokens-per-word and vocab suggestions");
  add_common(tokenize, tok_opts.common);
  tokenize->add_option("--corpus", tok_opts.corpus_files, "corpus record file(s)")->required();
  tokenize->add_option("--lang", tok_opts.lang, "language to read")->required();
  tokenize->add_option("--split", tok_opts.split, "train, test, or all (default train)");
  tokenize->add_option("--train", tok_opts.train_kind,
                       "train a tokenizer: whitespace, character, or bpe");
  tokenize->add_option("--vocab-size", tok_opts.vocab_size,
                       "total vocabulary size for --train bpe (includes specials)");
  tokenize->add_option("--tokenizer", tok_opts.tokenizer_path,
                       "saved tokenizer for --tcw / --encode");
  tokenize->add_flag("--tcw", tok_opts.do_tcw, "report mean tokens per word");
  tokenize->add_flag("--suggest-vocab", tok_opts.do_suggest,
                     "report the corpus-size vocabulary heuristic");
  tokenize->add_flag("--encode", tok_opts.do_encode, "write token units per sentence");

  PerturbOpts perturb_opts;
  auto* perturb = app.add_subcommand("perturb",
                                     "rewrite one language with a word-order perturbation");
  add_common(perturb, perturb_opts.common);
  perturb->add_option("--corpus", perturb_opts.corpus_files, "corpus record file(s)")->required();
  perturb->add_option("--lang", perturb_opts.lang, "language to perturb")->required();
  perturb->add_option("--spec", perturb_opts.spec_text,
                      "perturbation: identity | reverse_full | shuffle_local:w=N | "
                      "shuffle_even_odd | shuffle_deterministic | shuffle_nondeterministic "
                      "(options :s=N, :unit=word|token) or np:<dnaN-style order|random>")
      ->required();
  perturb->add_option("--tokenizer", perturb_opts.tokenizer_path,
                      "saved tokenizer (required for unit=token specs)");
  perturb->add_option("--trees", perturb_opts.trees_path,
                      "constituency trees, one per corpus sentence (np specs)");
  perturb->add_option("--category-map", perturb_opts.category_map,
                      "preset name (ptb, vit, ctb, cintil) or category map file (np specs)");
  perturb->add_option("--seed", perturb_opts.seed, "seed for seeded perturbations");
  perturb->add_flag("--verify-recovery", perturb_opts.verify_recovery,
                    "round-trip every sentence through recover() and fail on any mismatch");
  perturb->add_flag("--emit-pairs", perturb_opts.emit_pairs,
                    "write test-split minimal pairs (np specs)");

  TrainLmOpts train_opts;
  auto* train_lm = app.add_subcommand("train-lm", "train the n-gram language model");
  add_common(train_lm, train_opts.common);
  train_lm->add_option("--corpus", train_opts.corpus_files, "corpus record file(s)")->required();
  train_lm->add_option("--lang", train_opts.lang, "language to train on")->required();
  train_lm->add_option("--split", train_opts.split, "train, test, or all (default train)");
  train_lm->add_option("--tokenizer", train_opts.tokenizer_path, "saved tokenizer")->required();
  train_lm->add_option("--order", train_opts.order, "n-gram order (default 3)")
      ->check(CLI::PositiveNumber);
  train_lm->add_option("--smoothing", train_opts.smoothing,
                       "mle, addk:<k>, or interpolated_wb (default)");
  train_lm->add_option("--unk-threshold", train_opts.unk_threshold,
                       "fold train types seen fewer than this many times into <unk> (default 2)");

  EvalPplOpts eval_opts;
  auto* eval_ppl = app.add_subcommand(
      "eval-ppl", "score sentences with a model, or aggregate an existing score file");
  add_common(eval_ppl, eval_opts.common);
  eval_ppl->add_option("--model", eval_opts.model_path, "saved n-gram model");
  eval_ppl->add_option("--corpus", eval_opts.corpus_files, "corpus record file(s) to score");
  eval_ppl->add_option("--lang", eval_opts.lang, "language to score");
  eval_ppl->add_option("--split", eval_opts.split, "train, test, or all (default test)");
  eval_ppl->add_option("--tokenizer", eval_opts.tokenizer_path, "saved tokenizer");
  eval_ppl->add_option("--scores", eval_opts.scores_path, "existing score interchange file");
  eval_ppl->add_option("--aggregation", eval_opts.aggregation,
                       "sentence_geomean (default) or token_weighted");
  eval_ppl->add_option("--variant", eval_opts.variant,
                       "variant tag stamped on emitted scores (default identity)");
  eval_ppl->add_option("--checkpoint", eval_opts.checkpoint,
                       "checkpoint label stamped on emitted scores (default final)");
  eval_ppl->add_option("--score-seed", eval_opts.score_seed,
                       "training-seed label stamped on emitted scores (default 0)");

  GenScoreOpts gen_opts;
  auto* gen = app.add_subcommand(
      "genscore", "generalization score of two models over minimal pairs");
  add_common(gen, gen_opts.common);
  gen->add_option("--pairs", gen_opts.pairs_path, "minimal pair file")->required();
  gen->add_option("--att-scores", gen_opts.att_scores_path,
                  "score file from the attested-trained model")
      ->required();
  gen->add_option("--unatt-scores", gen_opts.unatt_scores_path,
                  "score file from the perturbed-trained model")
      ->required();
  gen->add_option("--att-variant", gen_opts.att_variant,
                  "variant tag of attested sentences (default identity)");
  gen->add_option("--unatt-variant", gen_opts.unatt_variant,
                  "variant tag of perturbed sentences")
      ->required();

  SeparabilityOpts sep_opts;
  auto* sep = app.add_subcommand(
      "separability", "cross-validated linear-SVM macro-F1 over perplexity trajectories");
  add_common(sep, sep_opts.common);
  sep->add_option("--trajectories", sep_opts.trajectories_path, "trajectory feature table")
      ->required();
  sep->add_option("--folds", sep_opts.folds, "cross-validation folds (default 10)");
  sep->add_option("--lambda", sep_opts.lambda, "SVM regularization constant (default 0.1)");
  sep->add_option("--seed", sep_opts.seed, "seed for fold assignment and visit order")
      ->required();
  sep->add_option("--iterations", sep_opts.iterations,
                  "subgradient steps per fold (default 100000)");
  sep->add_flag("--average-seeds", sep_opts.average_seeds,
                "average per-seed feature columns per checkpoint before classifying");

  StatsOpts stats_opts;
  auto* stats_cmd = app.add_subcommand("stats", "rank and hypothesis tests on sample files");
  add_common(stats_cmd, stats_opts.common);
  stats_cmd->add_option("--test", stats_opts.test, "spearman, welch, or mann-whitney")
      ->required();
  stats_cmd->add_option("--a", stats_opts.a_path, "first sample, one number per line")
      ->required();
  stats_cmd->add_option("--b", stats_opts.b_path, "second sample, one number per line")
      ->required();
  stats_cmd->add_option("--comparisons", stats_opts.comparisons,
                        "Bonferroni comparison count for welch (default 1)");

  ReportOpts report_opts;
  auto* report = app.add_subcommand(
      "report", "perplexity-by-checkpoint chart and tables from score files");
  add_common(report, report_opts.common);
  report->add_option("--scores", report_opts.score_files, "score interchange file(s)")
      ->required();
  report->add_option("--aggregation", report_opts.aggregation,
                     "sentence_geomean (default) or token_weighted");

  build->callback([&] { run_build_corpus(build_opts, full_argv); });
  tokenize->callback([&] { run_tokenize(tok_opts, full_argv); });
  perturb->callback([&] { run_perturb(perturb_opts, full_argv); });
  train_lm->callback([&] { run_train_lm(train_opts, full_argv); });
  eval_ppl->callback([&] { run_eval_ppl(eval_opts, full_argv); });
  gen->callback([&] { run_genscore(gen_opts, full_argv); });
  sep->callback([&] { run_separability(sep_opts, full_argv); });
  stats_cmd->callback([&] { run_stats(stats_opts, full_argv); });
  report->callback([&] { run_report(report_opts, full_argv); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const langvar::LangvarError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
