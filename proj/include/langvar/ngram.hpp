#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "langvar/token_sequence.hpp"
#include "langvar/tokenize.hpp"

namespace langvar {

// Count-based n-gram LM with three smoothing modes:
//
//   mle              c(ctx,u) / C(ctx); unseen events score -inf
//   addk             (c(ctx,u) + k) / (C(ctx) + k|V|)
//   interpolated_wb  Witten-Bell: lambda(ctx) = C/(C+T) with T = distinct
//                    continuations; recursively interpolates with the
//                    shorter context, bottoming out at uniform 1/|V|
//
// Events are the sentence units plus one end marker; each sentence is
// padded with n-1 begin markers that serve as context only. |V| counts
// the full vocab including the three specials.

enum class Smoothing { mle, addk, interpolated_wb };

struct SmoothingSpec {
  Smoothing kind = Smoothing::interpolated_wb;
  double k = 1.0;  // addk only
};

SmoothingSpec parse_smoothing(const std::string& text);  // "mle", "addk:0.5", "interpolated_wb"
std::string smoothing_to_string(const SmoothingSpec& spec);

struct NgramModel {
  std::size_t order = 3;
  SmoothingSpec smoothing;
  std::uint64_t unk_threshold = 2;
  Vocab vocab;
  // counts[len]: space-joined context of len units -> next unit -> count.
  std::vector<std::map<std::string, std::map<std::string, std::uint64_t>>> counts;
};

NgramModel train(const std::vector<TokenSequence>& corpus, std::size_t order,
                 const SmoothingSpec& smoothing, std::uint64_t unk_threshold);

// P(unit | context) under the model's smoothing; context uses the model's
// vocab mapping (OOV units become <unk>).
double conditional_prob(const NgramModel& model, const std::vector<std::string>& context,
                        const std::string& unit);

struct ScoreRecord {
  std::uint64_t sentence_id = 0;
  std::string variant;
  double total_logprob = 0.0;  // natural log; -inf for mle-unseen
  std::uint64_t unit_count = 0;  // includes the end marker
  std::string checkpoint = "final";
  std::uint64_t seed = 0;
};

ScoreRecord score(const NgramModel& model, const TokenSequence& seq,
                  std::uint64_t sentence_id = 0);

enum class PplAggregation { sentence_geomean, token_weighted };

PplAggregation parse_aggregation(const std::string& text);

struct PerplexityReport {
  std::map<std::uint64_t, double> per_sentence;
  double corpus_value = 0.0;
  std::string checkpoint = "final";
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> infinite_ids;
};

PerplexityReport perplexity(const NgramModel& model,
                            const std::vector<std::pair<std::uint64_t, TokenSequence>>& test,
                            PplAggregation agg = PplAggregation::sentence_geomean);
PerplexityReport perplexity_from_scores(const std::vector<ScoreRecord>& scores,
                                        PplAggregation agg = PplAggregation::sentence_geomean);

// Score interchange file: header line(s) starting '#', then tab-separated
// sentence_id variant total_logprob_nat unit_count checkpoint seed.
std::string scores_to_tsv(const std::vector<ScoreRecord>& scores);
std::vector<ScoreRecord> ingest_scores(const std::string& path, std::size_t* duplicates = nullptr);
void write_scores(const std::vector<ScoreRecord>& scores, const std::string& path);

std::string model_to_string(const NgramModel& model);
NgramModel model_from_string(const std::string& data);
void save_model(const NgramModel& model, const std::string& path);
NgramModel load_model(const std::string& path);

}  // namespace langvar
