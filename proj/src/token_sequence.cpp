#include "langvar/token_sequence.hpp"

#include "langvar/errors.hpp"

namespace langvar {

TokenSequence word_sequence(std::vector<std::string> words) {
  TokenSequence seq;
  seq.kind = SequenceKind::word;
  seq.units = std::move(words);
  return seq;
}

TokenSequence apply_permutation(const TokenSequence& seq, const std::vector<std::size_t>& perm) {
  if (perm.size() != seq.units.size()) {
    throw OperationError("permutation length does not match sequence length");
  }
  TokenSequence out;
  out.kind = seq.kind;
  out.units.reserve(seq.units.size());
  for (std::size_t src : perm) out.units.push_back(seq.units[src]);
  if (seq.kind == SequenceKind::subword) {
    out.word_map.reserve(perm.size());
    out.source_pos.reserve(perm.size());
    for (std::size_t src : perm) {
      out.word_map.push_back(seq.word_map[src]);
      out.source_pos.push_back(seq.source_pos[src]);
    }
  }
  return out;
}

std::string detokenize(const TokenSequence& seq) {
  std::string out;
  if (seq.kind == SequenceKind::word) {
    for (std::size_t i = 0; i < seq.units.size(); ++i) {
      if (i) out.push_back(' ');
      out.append(seq.units[i]);
    }
    return out;
  }
  for (std::size_t i = 0; i < seq.units.size(); ++i) {
    if (i > 0) {
      const bool same_word = seq.word_map[i] == seq.word_map[i - 1];
      const bool consecutive = seq.source_pos[i] == seq.source_pos[i - 1] + 1;
      if (!(same_word && consecutive)) out.push_back(' ');
    }
    out.append(seq.units[i]);
  }
  return out;
}

}  // namespace langvar
