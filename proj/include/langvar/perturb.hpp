#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "langvar/corpus.hpp"
#include "langvar/token_sequence.hpp"
#include "langvar/tokenize.hpp"

namespace langvar {

// Sequence-level perturbations. Every kind is a pure permutation of the
// input units; all but shuffle_nondeterministic have an exact inverse.
//
//   identity                 unchanged (attested baseline)
//   reverse_full             whole sequence reversed
//   shuffle_local w=2        adjacent pairs swapped, trailing odd unit fixed
//   shuffle_local w>=3       consecutive windows of w (last may be short),
//                            each permuted from (s, window length, window index)
//   shuffle_even_odd         even-indexed units first, then odd-indexed
//   shuffle_deterministic    one permutation per length from (s, length)
//   shuffle_nondeterministic fresh permutation per sentence from (s, sentence id)

enum class PerturbationKind {
  identity,
  reverse_full,
  shuffle_local,
  shuffle_even_odd,
  shuffle_deterministic,
  shuffle_nondeterministic,
};

enum class PerturbUnit { word, token };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::identity;
  std::optional<std::size_t> w;     // shuffle_local only
  std::optional<std::uint64_t> s;   // seeded shuffle kinds; 0 when omitted
  std::optional<PerturbUnit> unit;  // defaults: token for shuffles, word otherwise

  PerturbUnit effective_unit() const;
  std::uint64_t effective_seed() const { return s.value_or(0); }
};

// Single-token form: kind[:w=N][:s=N][:unit=word|token],
// e.g. "shuffle_local:w=3" or "shuffle_deterministic:s=84".
PerturbationSpec parse_perturbation(const std::string& text);
std::string perturbation_to_string(const PerturbationSpec& spec);
// Filename-safe tag, e.g. shuffle_local_w3 or shuffle_deterministic_s84;
// a non-default unit is appended (shuffle_local_w3_word).
std::string perturbation_tag(const PerturbationSpec& spec);
std::vector<std::string> perturbation_kind_names();

// Gather map defining the perturbation: output[i] = input[perm[i]].
std::vector<std::size_t> perturbation_permutation(const PerturbationSpec& spec, std::size_t n,
                                                  std::uint64_t sentence_id = 0);

TokenSequence apply(const PerturbationSpec& spec, const TokenSequence& seq,
                    std::uint64_t sentence_id = 0);

// Exact inverse of apply; shuffle_nondeterministic is rejected.
TokenSequence recover(const PerturbationSpec& spec, const TokenSequence& seq,
                      std::uint64_t sentence_id = 0);

// Rewrites the text of every record in `lang`; ids, splits, other languages
// untouched. The tokenizer is required for token-unit specs. The record id
// doubles as the sentence id for seeded kinds.
ParallelCorpus perturb_corpus(const PerturbationSpec& spec, const ParallelCorpus& corpus,
                              const std::string& lang, const Tokenizer* tokenizer = nullptr);

}  // namespace langvar
