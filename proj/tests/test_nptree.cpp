#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "langvar/errors.hpp"
#include "langvar/nptree.hpp"
#include "langvar/rng.hpp"
#include "langvar/text.hpp"

using namespace langvar;

namespace {

// The running example sentence: an NP with one child per category plus an
// unperturbable pronoun subject and adverbial.
const char* kExampleTree =
    "(S (NP (PRP She)) (VP (VBD enjoyed) (NP (DT the) (CD three) "
    "(ADJP (RB fantastically) (JJ interesting)) (NNS books)) "
    "(ADVP (DT a) (NN lot))) (. .))";

std::string reordered_text(const std::string& tree, const std::string& pattern,
                           const CategoryMap& map, std::uint64_t seed = 0,
                           std::uint64_t sentence_id = 0) {
  const auto out = reorder_np(parse_tree(tree), parse_np_pattern(pattern), map, seed, sentence_id);
  return join(tree_leaves(out), " ");
}

// Deterministic PTB-shaped tree generator for property tests.
TreeNode random_tree(Rng& rng, int depth) {
  static const std::vector<std::string> phrase = {"S", "NP", "VP", "PP", "ADJP", "QP", "XX"};
  static const std::vector<std::string> pre = {"DT", "CD", "JJ", "NN", "NNS",
                                               "RB", "VB", "IN", "UH"};
  static const std::vector<std::string> word = {"w0", "w1", "w2", "w3", "w4",
                                                "w5", "w6", "w7", "w8", "w9"};
  TreeNode node;
  if (depth <= 0 || rng.below(3) == 0) {
    node.label = pre[rng.below(pre.size())];
    TreeNode leaf;
    leaf.token = word[rng.below(word.size())];
    node.children.push_back(std::move(leaf));
    return node;
  }
  node.label = phrase[rng.below(phrase.size())];
  const std::size_t n = 1 + rng.below(4);
  for (std::size_t i = 0; i < n; ++i) node.children.push_back(random_tree(rng, depth - 1));
  return node;
}

std::vector<std::string> leaf_multiset(const TreeNode& t) {
  auto leaves = tree_leaves(t);
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

}  // namespace

TEST_CASE("parse_tree builds the expected structure") {
  const auto t = parse_tree("(NP (DT the) (NN cat))");
  CHECK(t.label == "NP");
  REQUIRE(t.children.size() == 2);
  CHECK(t.children[0].label == "DT");
  REQUIRE(t.children[0].children.size() == 1);
  CHECK(t.children[0].children[0].is_leaf());
  CHECK(t.children[0].children[0].token == "the");
  CHECK(tree_leaves(t) == std::vector<std::string>{"the", "cat"});
  CHECK(serialize_tree(t) == "(NP (DT the) (NN cat))");
}

TEST_CASE("parse_tree rejects malformed input with an offset") {
  CHECK_THROWS_WITH_AS(parse_tree("(S)"), doctest::Contains("empty node"), FormatError);
  CHECK_THROWS_WITH_AS(parse_tree("(S (NP"), doctest::Contains("unbalanced"), FormatError);
  CHECK_THROWS_AS(parse_tree(""), FormatError);
  CHECK_THROWS_AS(parse_tree("just words"), FormatError);
  CHECK_THROWS_AS(parse_tree("(S (NN x)) tail"), FormatError);
  // A leaf token may not share a node with other children.
  CHECK_THROWS_WITH_AS(parse_tree("(NP the cat)"), doctest::Contains("mixed"), FormatError);
  CHECK_THROWS_WITH_AS(parse_tree("(S (NP (NN x)) stray)"), doctest::Contains("mixed"),
                       FormatError);
  CHECK_THROWS_WITH_AS(parse_tree("(S (NN x)"), doctest::Contains("offset"), FormatError);
}

TEST_CASE("serialize then parse is a fixpoint on generated trees") {
  Rng rng(derive_seed({61}));
  for (int i = 0; i < 1000; ++i) {
    TreeNode root;
    root.label = "S";
    const std::size_t n = 1 + rng.below(4);
    for (std::size_t c = 0; c < n; ++c) root.children.push_back(random_tree(rng, 4));
    const std::string first = serialize_tree(root);
    const std::string second = serialize_tree(parse_tree(first));
    CHECK(first == second);
  }
}

TEST_CASE("read_tree_file marks bad lines and keeps good ones") {
  const auto dir = std::filesystem::temp_directory_path() / "langvar_tree_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "trees.txt").string();
  {
    std::ofstream out(path);
    out << "(S (NN ok))\n";
    out << "(S (NN broken)\n";
    out << "\n";
    out << "(S (NN fine))\n";
  }
  std::vector<std::string> errors;
  const auto trees = read_tree_file(path, &errors);
  REQUIRE(trees.size() == 4);
  CHECK(trees[0].has_value());
  CHECK(!trees[1].has_value());
  CHECK(!trees[2].has_value());
  CHECK(trees[3].has_value());
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find(":2:") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("category map presets validate and classify") {
  for (const auto& name : preset_category_map_names()) {
    const auto map = preset_category_map(name);
    CHECK_NOTHROW(map.validate());
    CHECK(!map.np_labels.empty());
  }
  const auto ptb = preset_category_map("ptb");
  CHECK(ptb.classify("DT") == NpCategory::det);
  CHECK(ptb.classify("PRP$") == NpCategory::det);
  CHECK(ptb.classify("CD") == NpCategory::num);
  CHECK(ptb.classify("ADJP") == NpCategory::adj);
  CHECK(ptb.classify("NNS") == NpCategory::noun);
  CHECK(!ptb.classify("PRP").has_value());
  CHECK(!ptb.classify("VBD").has_value());
  CHECK_THROWS_AS(preset_category_map("upenn"), ConfigError);
}

TEST_CASE("category map file parsing") {
  const auto map = category_map_from_string("#np\nnp\n#det\ndt\n#num\ncd\n#adj\njj\n#noun\nnn\n");
  CHECK(map.np_labels == std::set<std::string>{"NP"});  // uppercased
  CHECK(map.classify("DT") == NpCategory::det);

  for (const auto& name : preset_category_map_names()) {
    const auto preset = preset_category_map(name);
    const auto round = category_map_from_string(category_map_to_string(preset));
    CHECK(round.np_labels == preset.np_labels);
    CHECK(round.det == preset.det);
    CHECK(round.num == preset.num);
    CHECK(round.adj == preset.adj);
    CHECK(round.noun == preset.noun);
  }

  CHECK_THROWS_AS(category_map_from_string("#np\nNP\n#det\nX\n#noun\nX\n"), ConfigError);
  CHECK_THROWS_AS(category_map_from_string("#det\nDT\n"), ConfigError);  // no #np
  CHECK_THROWS_AS(category_map_from_string("DT\n"), FormatError);
  CHECK_THROWS_AS(category_map_from_string("#verbs\nVB\n"), FormatError);
}

TEST_CASE("np pattern parsing and tags") {
  const auto p = parse_np_pattern("dnNa");
  CHECK(!p.random);
  CHECK(p.order == std::vector<NpCategory>{NpCategory::det, NpCategory::num, NpCategory::noun,
                                           NpCategory::adj});
  CHECK(p.rank(NpCategory::noun) == 2);
  CHECK(np_pattern_to_string(p) == "dnNa");
  CHECK(np_pattern_tag(p) == "np_dnNa");
  CHECK(parse_np_pattern("random").random);
  CHECK(np_pattern_tag(parse_np_pattern("random")) == "np_random");

  CHECK_THROWS_AS(parse_np_pattern("dnN"), ConfigError);
  CHECK_THROWS_AS(parse_np_pattern("dnNN"), ConfigError);
  CHECK_THROWS_AS(parse_np_pattern("dnNx"), ConfigError);
  CHECK_THROWS_AS(parse_np_pattern("DNAN"), ConfigError);
}

TEST_CASE("five patterns reproduce the reference reorderings exactly") {
  const auto ptb = preset_category_map("ptb");
  CHECK(reordered_text(kExampleTree, "Nnda", ptb) ==
        "She enjoyed books three the fantastically interesting a lot .");
  CHECK(reordered_text(kExampleTree, "anNd", ptb) ==
        "She enjoyed fantastically interesting three books the a lot .");
  CHECK(reordered_text(kExampleTree, "daNn", ptb) ==
        "She enjoyed the fantastically interesting books three a lot .");
  CHECK(reordered_text(kExampleTree, "dnaN", ptb) ==
        "She enjoyed the three fantastically interesting books a lot .");
  CHECK(reordered_text(kExampleTree, "dnNa", ptb) ==
        "She enjoyed the three books fantastically interesting a lot .");
}

TEST_CASE("trees without NP nodes pass through unchanged") {
  const auto ptb = preset_category_map("ptb");
  const char* tree = "(S (VP (VB go) (PP (IN to) (XX there))))";
  for (const char* pattern : {"Nnda", "dnaN", "random"}) {
    CHECK(reordered_text(tree, pattern, ptb, 9, 9) == "go to there");
  }
}

TEST_CASE("unclassified children keep their slots") {
  const auto ptb = preset_category_map("ptb");
  // UH is no category; the classified DT and NN permute around it.
  const char* tree = "(NP (DT the) (UH uh) (NN cat))";
  CHECK(reordered_text(tree, "Nnda", ptb) == "cat uh the");
  CHECK(reordered_text(tree, "dnaN", ptb) == "the uh cat");
}

TEST_CASE("same-category children never swap (stable order)") {
  const auto ptb = preset_category_map("ptb");
  const char* tree = "(NP (JJ big) (JJ red) (NN cat) (NN dog))";
  CHECK(reordered_text(tree, "Nnda", ptb) == "cat dog big red");
  CHECK(reordered_text(tree, "dnaN", ptb) == "big red cat dog");
}

TEST_CASE("classified phrasal children move as intact subtrees") {
  const auto ptb = preset_category_map("ptb");
  const char* tree = "(NP (NN fact) (ADJP (RB very) (RB very) (JJ odd)))";
  CHECK(reordered_text(tree, "anNd", ptb) == "very very odd fact");
}

TEST_CASE("nested NPs normalize bottom-up when NP is itself a noun label") {
  const auto ctb = preset_category_map("ctb");
  const char* tree = "(NP (DT d) (NP (JJ x) (NN y)))";
  // Inner NP sorts to noun-first under Nnda, then moves ahead of the det.
  CHECK(reordered_text(tree, "Nnda", ctb) == "y x d");
  CHECK(reordered_text(tree, "dnNa", ctb) == "d y x");
}

TEST_CASE("reorder_np properties on generated trees") {
  const auto ptb = preset_category_map("ptb");
  Rng rng(derive_seed({62}));
  const std::vector<std::string> patterns = {"Nnda", "anNd", "daNn", "dnaN", "dnNa"};
  for (int i = 0; i < 300; ++i) {
    TreeNode root;
    root.label = "S";
    const std::size_t n = 1 + rng.below(4);
    for (std::size_t c = 0; c < n; ++c) root.children.push_back(random_tree(rng, 4));

    for (const auto& text : patterns) {
      const auto pattern = parse_np_pattern(text);
      const auto once = reorder_np(root, pattern, ptb, 0);
      CHECK(leaf_multiset(once) == leaf_multiset(root));
      const auto twice = reorder_np(once, pattern, ptb, 0);
      CHECK(serialize_tree(twice) == serialize_tree(once));
    }

    const auto pattern = parse_np_pattern("random");
    const auto r1 = reorder_np(root, pattern, ptb, 5, 17);
    const auto r2 = reorder_np(root, pattern, ptb, 5, 17);
    CHECK(serialize_tree(r1) == serialize_tree(r2));
    CHECK(leaf_multiset(r1) == leaf_multiset(root));
  }
}

TEST_CASE("np_random permutes words across classified children, others fixed") {
  const auto ptb = preset_category_map("ptb");
  const auto tree = parse_tree(kExampleTree);
  bool adjp_split = false;
  for (std::uint64_t seed = 0; seed < 24 && !adjp_split; ++seed) {
    const auto out = reorder_np(tree, parse_np_pattern("random"), ptb, seed, 3);
    const auto leaves = tree_leaves(out);
    REQUIRE(leaves.size() == 10);
    // Outside the classified slots nothing moves.
    CHECK(leaves[0] == "She");
    CHECK(leaves[1] == "enjoyed");
    CHECK(leaves[7] == "a");
    CHECK(leaves[8] == "lot");
    CHECK(leaves[9] == ".");
    std::vector<std::string> inner(leaves.begin() + 2, leaves.begin() + 7);
    std::sort(inner.begin(), inner.end());
    CHECK(inner == std::vector<std::string>{"books", "fantastically", "interesting", "the",
                                            "three"});
    // The adjective phrase can split word-by-word: "fantastically" and
    // "interesting" end up non-adjacent for some seed.
    std::size_t fant = 0, inter = 0;
    for (std::size_t i = 2; i < 7; ++i) {
      if (leaves[i] == "fantastically") fant = i;
      if (leaves[i] == "interesting") inter = i;
    }
    if (fant + 1 != inter) adjp_split = true;
  }
  CHECK(adjp_split);
}

TEST_CASE("np_random varies with seed, sentence id, and np index") {
  const auto ptb = preset_category_map("ptb");
  const auto tree = parse_tree(kExampleTree);
  const auto pattern = parse_np_pattern("random");
  const auto base = tree_leaves(reorder_np(tree, pattern, ptb, 1, 1));
  CHECK(tree_leaves(reorder_np(tree, pattern, ptb, 1, 1)) == base);
  bool differs = false;
  for (std::uint64_t s = 2; s < 8 && !differs; ++s) {
    differs = tree_leaves(reorder_np(tree, pattern, ptb, s, 1)) != base;
  }
  CHECK(differs);
  differs = false;
  for (std::uint64_t id = 2; id < 8 && !differs; ++id) {
    differs = tree_leaves(reorder_np(tree, pattern, ptb, 1, id)) != base;
  }
  CHECK(differs);
}

TEST_CASE("perturb_np_corpus rewrites matching records and counts skips") {
  const auto ptb = preset_category_map("ptb");
  const auto corpus = ingest_lines({SourceLines{
      "s",
      {{"en",
        {"the red cat", "the red cat", "the red cat", "no tree here"}}}}});
  std::map<std::uint64_t, TreeNode> trees;
  trees[0] = parse_tree("(S (NP (DT the) (JJ red) (NN cat)))");
  trees[1] = parse_tree("(S (NP (DT the) (JJ red) (NN dog)))");  // leaf mismatch
  trees[2] = parse_tree("(S (NP (DT the) (JJ red) (NN cat)))");
  // id 3 has no tree at all

  const auto result =
      perturb_np_corpus(corpus, trees, parse_np_pattern("Nnda"), ptb, 0, "en");
  CHECK(result.skipped == 2);
  CHECK(result.corpus.find("en", 0)->text == "cat the red");
  CHECK(result.corpus.find("en", 1)->text == "the red cat");
  CHECK(result.corpus.find("en", 2)->text == "cat the red");
  CHECK(result.corpus.find("en", 3)->text == "no tree here");
  CHECK(result.corpus.splits == corpus.splits);
}

TEST_CASE("minimal pairs cover exactly the changed test-split records") {
  const auto ptb = preset_category_map("ptb");
  std::vector<std::string> texts;
  std::map<std::uint64_t, TreeNode> trees;
  for (std::uint64_t i = 0; i < 100; ++i) {
    if (i < 40) {
      texts.push_back("saw the red cat");
      trees[i] = parse_tree("(S (VB saw) (NP (DT the) (JJ red) (NN cat)))");
    } else {
      texts.push_back("saw cats");
      trees[i] = parse_tree("(S (VB saw) (NP (NNS cats)))");
    }
  }
  auto corpus = ingest_lines({SourceLines{"s", {{"en", texts}}}});
  for (auto& [id, split] : corpus.splits) split = Split::test;

  const auto perturbed =
      perturb_np_corpus(corpus, trees, parse_np_pattern("Nnda"), ptb, 0, "en");
  CHECK(perturbed.skipped == 0);
  const auto pairs = extract_minimal_pairs(corpus, perturbed.corpus, "en");

  // Oracle: direct text comparison over the test split.
  std::size_t expect = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    if (corpus.find("en", i)->text != perturbed.corpus.find("en", i)->text) ++expect;
  }
  CHECK(pairs.size() == expect);
  CHECK(pairs.size() == 40);
  CHECK(pairs.front().id == 0);
  CHECK(pairs.front().attested == "saw the red cat");
  CHECK(pairs.front().perturbed == "saw cat the red");

  // Only test-split records yield pairs: ids 0..29 changed but train.
  auto half = corpus;
  for (auto& [id, split] : half.splits) split = id < 30 ? Split::train : Split::test;
  auto perturbed_half = perturbed.corpus;
  perturbed_half.splits = half.splits;
  const auto filtered = extract_minimal_pairs(half, perturbed_half, "en");
  CHECK(filtered.size() == 10);  // changed ids 30..39 are in the test split
  CHECK(filtered.front().id == 30);
}

TEST_CASE("identical corpora yield no minimal pairs") {
  auto corpus = ingest_lines({SourceLines{"s", {{"en", {"a b", "c d"}}}}});
  for (auto& [id, split] : corpus.splits) split = Split::test;
  CHECK(extract_minimal_pairs(corpus, corpus, "en").empty());
}

TEST_CASE("minimal pair extraction requires aligned ids") {
  auto a = ingest_lines({SourceLines{"s", {{"en", {"a", "b"}}}}});
  const auto b = ingest_lines({SourceLines{"s", {{"en", {"a"}}}}});
  CHECK_THROWS_AS(extract_minimal_pairs(a, b, "en"), FormatError);
  CHECK_THROWS_AS(extract_minimal_pairs(a, a, "fr"), ConfigError);
}

TEST_CASE("minimal pair tsv round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "langvar_pairs_test";
  std::filesystem::create_directories(dir);
  const std::vector<MinimalPair> pairs = {{3, "a b c", "c a b"}, {9, "x y", "y x"}};
  const auto path = (dir / "pairs.tsv").string();
  {
    std::ofstream out(path);
    out << minimal_pairs_to_tsv(pairs);
  }
  const auto loaded = read_minimal_pairs(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[1].id == 9);
  CHECK(loaded[0].attested == "a b c");
  CHECK(loaded[0].perturbed == "c a b");
  {
    std::ofstream out(path);
    out << "5\tonly two fields\n";
  }
  CHECK_THROWS_AS(read_minimal_pairs(path), FormatError);
  std::filesystem::remove_all(dir);
}
