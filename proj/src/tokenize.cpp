#include "langvar/tokenize.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "langvar/errors.hpp"
#include "langvar/text.hpp"

namespace langvar {

namespace {

Vocab make_vocab(const std::set<std::string>& base,
                 const std::vector<std::pair<std::string, std::string>>& merges) {
  Vocab v;
  v.entries = {kUnk, kBos, kEos};
  for (const auto& unit : base) v.entries.push_back(unit);
  for (const auto& [l, r] : merges) v.entries.push_back(l + r);
  v.rebuild_index();
  return v;
}

std::map<std::string, std::uint64_t> word_frequencies(const std::vector<std::string>& sentences) {
  std::map<std::string, std::uint64_t> freq;
  for (const auto& s : sentences) {
    for (auto& w : split_ws(s)) ++freq[w];
  }
  return freq;
}

}  // namespace

void Vocab::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < entries.size(); ++i) index_.emplace(entries[i], i);
  if (index_.size() != entries.size()) throw FormatError("vocab entries are not unique");
  for (const char* special : {kUnk, kBos, kEos}) {
    if (!index_.count(special)) {
      throw FormatError(std::string("vocab missing special token ") + special);
    }
  }
}

std::string tokenizer_kind_name(TokenizerKind k) {
  switch (k) {
    case TokenizerKind::whitespace: return "whitespace";
    case TokenizerKind::character: return "character";
    case TokenizerKind::bpe: return "bpe";
  }
  throw ConfigError("bad tokenizer kind");
}

TokenizerKind parse_tokenizer_kind(const std::string& s) {
  if (s == "whitespace") return TokenizerKind::whitespace;
  if (s == "character") return TokenizerKind::character;
  if (s == "bpe") return TokenizerKind::bpe;
  throw ConfigError("unknown tokenizer kind: " + s);
}

Tokenizer train_whitespace(const std::vector<std::string>& sentences) {
  std::set<std::string> types;
  for (const auto& s : sentences) {
    for (auto& w : split_ws(s)) types.insert(std::move(w));
  }
  Tokenizer tok;
  tok.kind = TokenizerKind::whitespace;
  tok.vocab = make_vocab(types, {});
  return tok;
}

Tokenizer train_character(const std::vector<std::string>& sentences) {
  std::set<std::string> chars;
  for (const auto& s : sentences) {
    for (const auto& w : split_ws(s)) {
      for (auto& c : utf8_chars(w)) chars.insert(std::move(c));
    }
  }
  Tokenizer tok;
  tok.kind = TokenizerKind::character;
  tok.vocab = make_vocab(chars, {});
  return tok;
}

Tokenizer train_bpe(const std::vector<std::string>& sentences, std::size_t vocab_size) {
  const auto freq = word_frequencies(sentences);
  if (freq.empty()) throw OperationError("bpe training corpus is empty");

  std::set<std::string> alphabet;
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> words;
  words.reserve(freq.size());
  for (const auto& [word, count] : freq) {
    auto chars = utf8_chars(word);
    for (const auto& c : chars) alphabet.insert(c);
    words.emplace_back(std::move(chars), count);
  }

  const std::size_t floor_size = alphabet.size() + 3;
  if (vocab_size < floor_size) {
    std::ostringstream msg;
    msg << "vocab size " << vocab_size << " is below alphabet plus specials (" << floor_size
        << ")";
    throw ConfigError(msg.str());
  }
  const std::size_t merge_budget = vocab_size - floor_size;

  std::vector<std::pair<std::string, std::string>> merges;
  for (std::size_t step = 0; step < merge_budget; ++step) {
    // std::map iteration order gives the lexicographic tie-break.
    std::map<std::pair<std::string, std::string>, std::uint64_t> pairs;
    for (const auto& [symbols, count] : words) {
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        pairs[{symbols[i], symbols[i + 1]}] += count;
      }
    }
    if (pairs.empty()) break;
    auto best = pairs.begin();
    for (auto it = std::next(pairs.begin()); it != pairs.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    const auto [left, right] = best->first;
    const std::string joined = left + right;
    for (auto& [symbols, count] : words) {
      std::vector<std::string> merged;
      merged.reserve(symbols.size());
      std::size_t i = 0;
      while (i < symbols.size()) {
        if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
          merged.push_back(joined);
          i += 2;
        } else {
          merged.push_back(symbols[i]);
          ++i;
        }
      }
      symbols = std::move(merged);
    }
    merges.emplace_back(left, right);
  }

  Tokenizer tok;
  tok.kind = TokenizerKind::bpe;
  tok.merges = std::move(merges);
  tok.vocab = make_vocab(alphabet, tok.merges);
  return tok;
}

TokenSequence encode(const Tokenizer& tok, const std::string& sentence) {
  TokenSequence seq;
  seq.kind = SequenceKind::subword;
  const auto words = split_ws(sentence);
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::vector<std::string> units;
    if (tok.kind == TokenizerKind::whitespace) {
      units.push_back(tok.vocab.contains(words[w]) ? words[w] : std::string(kUnk));
    } else {
      units = utf8_chars(words[w]);
      for (auto& u : units) {
        if (!tok.vocab.contains(u)) u = kUnk;
      }
      if (tok.kind == TokenizerKind::bpe) {
        for (const auto& [left, right] : tok.merges) {
          if (units.size() < 2) break;
          std::vector<std::string> merged;
          merged.reserve(units.size());
          std::size_t i = 0;
          while (i < units.size()) {
            if (i + 1 < units.size() && units[i] == left && units[i + 1] == right) {
              merged.push_back(left + right);
              i += 2;
            } else {
              merged.push_back(units[i]);
              ++i;
            }
          }
          units = std::move(merged);
        }
      }
    }
    for (std::size_t p = 0; p < units.size(); ++p) {
      seq.units.push_back(units[p]);
      seq.word_map.push_back(w);
      seq.source_pos.push_back(p);
    }
  }
  return seq;
}

std::string decode(const TokenSequence& seq) { return detokenize(seq); }

double tcw(const Tokenizer& tok, const std::vector<std::string>& sentences) {
  std::uint64_t units = 0, words = 0;
  for (const auto& s : sentences) {
    const auto seq = encode(tok, s);
    units += seq.units.size();
    words += split_ws(s).size();
  }
  if (words == 0) throw OperationError("tcw undefined: corpus has no words");
  return static_cast<double>(units) / static_cast<double>(words);
}

std::uint64_t vocab_heuristic(const std::vector<std::string>& sentences) {
  std::set<std::string> types;
  for (const auto& s : sentences) {
    for (auto& w : split_ws(s)) types.insert(std::move(w));
  }
  return static_cast<std::uint64_t>(types.size()) * 2 / 5;
}

std::string tokenizer_to_string(const Tokenizer& tok) {
  std::ostringstream out;
  out << "#kind " << tokenizer_kind_name(tok.kind) << '\n';
  out << "#vocab\n";
  for (const auto& e : tok.vocab.entries) out << e << '\n';
  out << "#merges\n";
  for (const auto& [l, r] : tok.merges) out << l << ' ' << r << '\n';
  return out.str();
}

Tokenizer tokenizer_from_string(const std::string& data) {
  Tokenizer tok;
  tok.kind = TokenizerKind::bpe;
  std::istringstream in(data);
  std::string line;
  enum class Section { none, vocab, merges } section = Section::none;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#kind ", 0) == 0) {
      tok.kind = parse_tokenizer_kind(line.substr(6));
      continue;
    }
    if (line == "#vocab") {
      section = Section::vocab;
      continue;
    }
    if (line == "#merges") {
      section = Section::merges;
      continue;
    }
    if (line.empty()) continue;
    switch (section) {
      case Section::none: {
        std::ostringstream msg;
        msg << "tokenizer file line " << lineno << ": content before #vocab section";
        throw FormatError(msg.str());
      }
      case Section::vocab:
        tok.vocab.entries.push_back(line);
        break;
      case Section::merges: {
        const auto space = line.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 == line.size()) {
          std::ostringstream msg;
          msg << "tokenizer file line " << lineno << ": merge is not 'left right'";
          throw FormatError(msg.str());
        }
        tok.merges.emplace_back(line.substr(0, space), line.substr(space + 1));
        break;
      }
    }
  }
  if (section == Section::none) throw FormatError("tokenizer file has no #vocab section");
  tok.vocab.rebuild_index();
  return tok;
}

void save_tokenizer(const Tokenizer& tok, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write tokenizer file: " + path);
  out << tokenizer_to_string(tok);
}

Tokenizer load_tokenizer(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open tokenizer file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return tokenizer_from_string(buf.str());
}

}  // namespace langvar
