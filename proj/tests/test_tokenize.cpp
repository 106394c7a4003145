#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "langvar/errors.hpp"
#include "langvar/text.hpp"
#include "langvar/tokenize.hpp"

#include "support/fixtures.hpp"

using namespace langvar;

TEST_CASE("whitespace tokenizer emits one unit per word, unk for oov") {
  const auto tok = train_whitespace({"the cat sat", "the dog"});
  CHECK(tok.vocab.entries ==
        std::vector<std::string>{kUnk, kBos, kEos, "cat", "dog", "sat", "the"});
  const auto seq = encode(tok, "the bird sat");
  CHECK(seq.units == std::vector<std::string>{"the", kUnk, "sat"});
  CHECK(seq.word_map == std::vector<std::size_t>{0, 1, 2});
  CHECK(seq.kind == SequenceKind::subword);
  CHECK(decode(encode(tok, "the  cat   sat")) == "the cat sat");
}

TEST_CASE("character tokenizer splits into utf8 code points") {
  const auto tok = train_character({"ab ba", "c\xC3\xA9"});
  CHECK(tok.vocab.entries ==
        std::vector<std::string>{kUnk, kBos, kEos, "a", "b", "c", "\xC3\xA9"});
  const auto seq = encode(tok, "ab c\xC3\xA9");
  CHECK(seq.units == std::vector<std::string>{"a", "b", "c", "\xC3\xA9"});
  CHECK(seq.word_map == std::vector<std::size_t>{0, 0, 1, 1});
  CHECK(seq.source_pos == std::vector<std::size_t>{0, 1, 0, 1});
  CHECK(decode(seq) == "ab c\xC3\xA9");
  CHECK(encode(tok, "ax").units == std::vector<std::string>{"a", kUnk});
}

TEST_CASE("bpe training follows hand-computed merge sequence") {
  // word freq: abab x2, abc x1. Pair counts step 1: (a,b)=5, (b,a)=2,
  // (b,c)=1 -> merge ab. Step 2: (ab,ab)=2, (ab,c)=1 -> merge abab.
  const auto tok = train_bpe({"abab abc abab"}, 8);
  REQUIRE(tok.merges == std::vector<std::pair<std::string, std::string>>{
                            {"a", "b"}, {"ab", "ab"}});
  CHECK(tok.vocab.entries ==
        std::vector<std::string>{kUnk, kBos, kEos, "a", "b", "c", "ab", "abab"});

  CHECK(encode(tok, "abab").units == std::vector<std::string>{"abab"});
  CHECK(encode(tok, "abc").units == std::vector<std::string>{"ab", "c"});
  CHECK(encode(tok, "ababab").units == std::vector<std::string>{"abab", "ab"});
}

TEST_CASE("bpe frequency ties break toward lexicographically smallest pair") {
  const auto tok = train_bpe({"ab cd"}, 8);
  REQUIRE(tok.merges.size() == 1);
  CHECK(tok.merges[0] == std::pair<std::string, std::string>{"a", "b"});
}

TEST_CASE("bpe merges apply left to right on overlaps") {
  const auto tok = train_bpe({"aaa aaa"}, 5);
  REQUIRE(tok.merges == std::vector<std::pair<std::string, std::string>>{{"a", "a"}});
  CHECK(encode(tok, "aaa").units == std::vector<std::string>{"aa", "a"});
  CHECK(encode(tok, "aaaa").units == std::vector<std::string>{"aa", "aa"});
}

TEST_CASE("bpe merges never cross word boundaries") {
  const auto tok = train_bpe({"a b a b a b"}, 16);
  CHECK(tok.merges.empty());
  const auto seq = encode(tok, "a b");
  CHECK(seq.units == std::vector<std::string>{"a", "b"});
  CHECK(decode(seq) == "a b");
}

TEST_CASE("bpe vocab_size bounds") {
  CHECK_THROWS_AS(train_bpe({"abc"}, 5), ConfigError);  // alphabet 3 + specials 3 = 6
  const auto floor_tok = train_bpe({"abc"}, 6);
  CHECK(floor_tok.merges.empty());
  // A budget beyond the saturation point stops early once no pairs remain.
  const auto big = train_bpe({"ab"}, 100);
  CHECK(big.merges.size() == 1);
  CHECK_THROWS_AS(train_bpe({"   "}, 10), OperationError);
}

TEST_CASE("bpe round-trips held-out text whose alphabet is covered") {
  const auto train = fixtures::english_sentences(11, 400);
  const auto held_out = fixtures::english_sentences(12, 200);
  const auto tok = train_bpe(train, 120);
  for (const auto& s : held_out) {
    CHECK(decode(encode(tok, s)) == canonical_form(s));
  }
}

TEST_CASE("tcw anchors and ordering") {
  const auto train = fixtures::english_sentences(21, 300);
  const auto eval_set = fixtures::english_sentences(22, 100);

  const auto ws = train_whitespace(train);
  CHECK(tcw(ws, eval_set) == 1.0);  // exact: one unit per word, unk included

  const auto ch = train_character(train);
  const auto bp = train_bpe(train, 150);
  const double tcw_ch = tcw(ch, eval_set);
  const double tcw_bp = tcw(bp, eval_set);
  CHECK(tcw_ch >= tcw_bp);
  CHECK(tcw_bp >= 1.0);

  CHECK_THROWS_AS(tcw(ws, std::vector<std::string>{"", "  "}), OperationError);
}

TEST_CASE("vocab_heuristic is 40 percent of word types, floored") {
  CHECK(vocab_heuristic({"a b c d e f g h i j"}) == 4);
  CHECK(vocab_heuristic({"a b c d e f g"}) == 2);
  CHECK(vocab_heuristic({}) == 0);
  CHECK(vocab_heuristic({"x x x"}) == 0);
}

TEST_CASE("tokenizer file round-trip for every kind") {
  const auto dir = std::filesystem::temp_directory_path() / "langvar_tok_test";
  std::filesystem::create_directories(dir);
  const auto corpus = fixtures::english_sentences(31, 50);
  for (const auto& tok :
       {train_whitespace(corpus), train_character(corpus), train_bpe(corpus, 90)}) {
    const auto path = (dir / "tok.txt").string();
    save_tokenizer(tok, path);
    const auto loaded = load_tokenizer(path);
    CHECK(loaded.kind == tok.kind);
    CHECK(loaded.vocab.entries == tok.vocab.entries);
    CHECK(loaded.merges == tok.merges);
    for (const auto& s : fixtures::english_sentences(32, 20)) {
      CHECK(encode(loaded, s).units == encode(tok, s).units);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("tokenizer file without kind line loads as bpe") {
  const auto tok = tokenizer_from_string("#vocab\n<unk>\n<s>\n</s>\na\nb\nab\n#merges\na b\n");
  CHECK(tok.kind == TokenizerKind::bpe);
  CHECK(encode(tok, "ab").units == std::vector<std::string>{"ab"});
}

TEST_CASE("tokenizer file rejects malformed input") {
  CHECK_THROWS_AS(tokenizer_from_string("stray\n#vocab\n<unk>\n<s>\n</s>\n"), FormatError);
  CHECK_THROWS_AS(tokenizer_from_string("#vocab\n<unk>\n<s>\n</s>\n#merges\nnospace\n"),
                  FormatError);
  CHECK_THROWS_AS(tokenizer_from_string("#vocab\n<unk>\n<s>\n</s>\na\na\n"), FormatError);
  CHECK_THROWS_AS(tokenizer_from_string("#vocab\na\nb\n"), FormatError);  // missing specials
  CHECK_THROWS_AS(tokenizer_from_string(""), FormatError);
}
