#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "langvar/token_sequence.hpp"

namespace langvar {

inline constexpr const char* kUnk = "<unk>";
inline constexpr const char* kBos = "<s>";
inline constexpr const char* kEos = "</s>";

struct Vocab {
  std::vector<std::string> entries;

  std::size_t size() const { return entries.size(); }
  bool contains(const std::string& token) const { return index_.count(token) != 0; }
  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

enum class TokenizerKind { whitespace, character, bpe };

std::string tokenizer_kind_name(TokenizerKind k);
TokenizerKind parse_tokenizer_kind(const std::string& s);

// Subword tokenizer over whitespace-pretokenized words. No word-boundary
// marker symbols exist in the vocab: boundaries live in the TokenSequence
// word map, so merges can never cross words and decode needs no stripping.
struct Tokenizer {
  TokenizerKind kind = TokenizerKind::whitespace;
  Vocab vocab;
  // bpe only; applied in order during encoding.
  std::vector<std::pair<std::string, std::string>> merges;
};

// Vocabulary layout for trained tokenizers: <unk>, <s>, </s>, then the
// sorted base units (word types or characters), then merge outputs in
// merge order (bpe). vocab_size counts everything including specials.
Tokenizer train_whitespace(const std::vector<std::string>& sentences);
Tokenizer train_character(const std::vector<std::string>& sentences);
Tokenizer train_bpe(const std::vector<std::string>& sentences, std::size_t vocab_size);

TokenSequence encode(const Tokenizer& tok, const std::string& sentence);
std::string decode(const TokenSequence& seq);

// Total emitted units divided by total whitespace words.
double tcw(const Tokenizer& tok, const std::vector<std::string>& sentences);

// floor(0.4 * number of unique whitespace word types).
std::uint64_t vocab_heuristic(const std::vector<std::string>& sentences);

// File format: optional "#kind <name>" line, then "#vocab" (one token per
// line) and "#merges" ("left right" per line, application order = line
// order). Files without a kind line load as bpe.
std::string tokenizer_to_string(const Tokenizer& tok);
Tokenizer tokenizer_from_string(const std::string& data);
void save_tokenizer(const Tokenizer& tok, const std::string& path);
Tokenizer load_tokenizer(const std::string& path);

}  // namespace langvar
