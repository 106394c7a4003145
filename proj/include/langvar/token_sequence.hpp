#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace langvar {

// A tokenized sentence that remembers enough structure to be put back
// together. Word-level sequences detokenize with single spaces. Subword
// sequences carry, per unit, the index of the source word and the unit's
// position within that word; decoding glues adjacent in-word units and
// inserts a space at every word change. Reordering a subword sequence
// therefore yields a decodable (if scrambled) sentence without any marker
// characters in the vocabulary.

enum class SequenceKind { word, subword };

struct TokenSequence {
  SequenceKind kind = SequenceKind::word;
  std::vector<std::string> units;
  // Parallel to units; subword kind only (empty for word kind).
  std::vector<std::size_t> word_map;
  std::vector<std::size_t> source_pos;

  std::size_t size() const { return units.size(); }
};

TokenSequence word_sequence(std::vector<std::string> words);

// Reorder a sequence by a gather map: out[i] = in[perm[i]] for all three
// parallel arrays.
TokenSequence apply_permutation(const TokenSequence& seq, const std::vector<std::size_t>& perm);

std::string detokenize(const TokenSequence& seq);

}  // namespace langvar
