#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "langvar/corpus.hpp"

namespace langvar {

// Bracketed constituency trees plus noun-phrase reordering. A node is
// either internal (label + children) or a leaf (token). A preterminal is
// an internal node whose single child is a leaf.

struct TreeNode {
  std::string label;
  std::vector<TreeNode> children;
  std::string token;

  bool is_leaf() const { return children.empty(); }
};

TreeNode parse_tree(const std::string& line);
std::string serialize_tree(const TreeNode& tree);
std::vector<std::string> tree_leaves(const TreeNode& tree);

// One parse per line, line order = ascending corpus id. Unparseable lines
// load as nullopt with a note in errors; callers skip those records.
std::vector<std::optional<TreeNode>> read_tree_file(const std::string& path,
                                                    std::vector<std::string>* errors = nullptr);

enum class NpCategory { det, num, adj, noun };

// Which node labels count as determiner / number / adjective / noun when
// they appear as direct children of an NP, per treebank. Labels are
// uppercased on load; the four category sets must be pairwise disjoint
// (np_labels may overlap, e.g. a treebank that files NP under noun).
struct CategoryMap {
  std::set<std::string> np_labels;
  std::set<std::string> det;
  std::set<std::string> num;
  std::set<std::string> adj;
  std::set<std::string> noun;

  std::optional<NpCategory> classify(const std::string& label) const;
  void validate() const;
};

// File format: sections #np, #det, #num, #adj, #noun, one label per line.
CategoryMap category_map_from_string(const std::string& data);
CategoryMap load_category_map(const std::string& path);
std::string category_map_to_string(const CategoryMap& map);

// Built-in transcriptions for ptb (English), vit (Italian), ctb (Chinese),
// cintil (Portuguese).
CategoryMap preset_category_map(const std::string& name);
std::vector<std::string> preset_category_map_names();

// Pattern string: the four symbols d (det), n (num), a (adj), N (noun) in
// the target order, each exactly once (e.g. "dnaN", "Nnda"), or "random".
struct NpPattern {
  bool random = false;
  std::vector<NpCategory> order;  // size 4 when !random

  std::size_t rank(NpCategory c) const;
};

NpPattern parse_np_pattern(const std::string& text);
std::string np_pattern_to_string(const NpPattern& pattern);
std::string np_pattern_tag(const NpPattern& pattern);  // np_dnNa, np_random

// NPs are processed bottom-up (post-order). Pattern case: direct children
// classified by label are stably reordered by (pattern rank, original
// index) across the slots they already occupy; everything else stays put
// and classified children move as whole subtrees. Random case: the leaf
// words under classified children are permuted across their own leaf
// slots, seeded by (seed, sentence_id, NP index in post-order).
TreeNode reorder_np(const TreeNode& tree, const NpPattern& pattern, const CategoryMap& map,
                    std::uint64_t seed, std::uint64_t sentence_id = 0);

struct NpPerturbResult {
  ParallelCorpus corpus;
  std::size_t skipped = 0;  // records with missing/mismatched trees, kept as-is
};

// Rewrites records of `lang` whose tree is present and whose leaves match
// the record's words; others are kept unchanged and counted.
NpPerturbResult perturb_np_corpus(const ParallelCorpus& corpus,
                                  const std::map<std::uint64_t, TreeNode>& trees,
                                  const NpPattern& pattern, const CategoryMap& map,
                                  std::uint64_t seed, const std::string& lang);

struct MinimalPair {
  std::uint64_t id = 0;
  std::string attested;
  std::string perturbed;
};

// Test-split records whose word sequences differ between the two corpora.
std::vector<MinimalPair> extract_minimal_pairs(const ParallelCorpus& attested,
                                               const ParallelCorpus& perturbed,
                                               const std::string& lang);

std::string minimal_pairs_to_tsv(const std::vector<MinimalPair>& pairs);
std::vector<MinimalPair> read_minimal_pairs(const std::string& path);

}  // namespace langvar
