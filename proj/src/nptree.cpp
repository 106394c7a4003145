#include "langvar/nptree.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "langvar/errors.hpp"
#include "langvar/rng.hpp"
#include "langvar/text.hpp"

namespace langvar {

namespace {

struct TreeParser {
  const std::string& line;
  std::size_t pos = 0;

  explicit TreeParser(const std::string& l) : line(l) {}

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "tree parse error at offset " << pos << ": " << what;
    throw FormatError(msg.str());
  }

  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }

  std::string read_token() {
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '(' &&
           line[pos] != ')') {
      ++pos;
    }
    return line.substr(start, pos - start);
  }

  TreeNode parse_node() {
    if (line[pos] != '(') fail("expected '('");
    ++pos;
    skip_ws();
    TreeNode node;
    node.label = read_token();  // may be empty (bare wrapper node)
    skip_ws();
    std::size_t leaf_items = 0, node_items = 0;
    while (pos < line.size() && line[pos] != ')') {
      if (line[pos] == '(') {
        node.children.push_back(parse_node());
        ++node_items;
      } else {
        TreeNode leaf;
        leaf.token = read_token();
        if (leaf.token.empty()) fail("unexpected character");
        node.children.push_back(std::move(leaf));
        ++leaf_items;
      }
      skip_ws();
    }
    if (pos >= line.size()) fail("unbalanced brackets (missing ')')");
    ++pos;  // consume ')'
    if (node.children.empty()) fail("empty node '" + node.label + "'");
    if (leaf_items > 0 && (node_items > 0 || leaf_items > 1)) {
      fail("leaf token mixed with other children under '" + node.label + "'");
    }
    return node;
  }

  TreeNode parse() {
    skip_ws();
    if (pos >= line.size() || line[pos] != '(') fail("expected '('");
    TreeNode root = parse_node();
    skip_ws();
    if (pos != line.size()) fail("trailing content after tree");
    return root;
  }
};

void collect_leaves(const TreeNode& node, std::vector<std::string>& out) {
  if (node.is_leaf()) {
    out.push_back(node.token);
    return;
  }
  for (const auto& child : node.children) collect_leaves(child, out);
}

void collect_leaf_ptrs(TreeNode& node, std::vector<TreeNode*>& out) {
  if (node.is_leaf()) {
    out.push_back(&node);
    return;
  }
  for (auto& child : node.children) collect_leaf_ptrs(child, out);
}

std::string upper(std::string s) {
  for (char& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

void reorder_np_node(TreeNode& node, const NpPattern& pattern, const CategoryMap& map,
                     std::uint64_t seed, std::uint64_t sentence_id, std::uint64_t& np_index) {
  for (auto& child : node.children) {
    if (!child.is_leaf()) reorder_np_node(child, pattern, map, seed, sentence_id, np_index);
  }
  if (node.is_leaf() || !map.np_labels.count(node.label)) return;
  const std::uint64_t my_index = np_index++;

  std::vector<std::size_t> slots;
  std::vector<NpCategory> categories;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const auto& child = node.children[i];
    if (child.is_leaf()) continue;
    if (auto cat = map.classify(child.label)) {
      slots.push_back(i);
      categories.push_back(*cat);
    }
  }
  if (pattern.random) {
    std::vector<TreeNode*> leaf_ptrs;
    for (std::size_t slot : slots) collect_leaf_ptrs(node.children[slot], leaf_ptrs);
    if (leaf_ptrs.size() < 2) return;
    std::vector<std::string> words;
    words.reserve(leaf_ptrs.size());
    for (TreeNode* p : leaf_ptrs) words.push_back(p->token);
    const auto perm =
        random_permutation(derive_seed({seed, sentence_id, my_index}), words.size());
    for (std::size_t i = 0; i < leaf_ptrs.size(); ++i) leaf_ptrs[i]->token = words[perm[i]];
    return;
  }

  if (slots.size() < 2) return;
  std::vector<std::size_t> order(slots.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pattern.rank(categories[a]) < pattern.rank(categories[b]);
  });
  std::vector<TreeNode> reordered;
  reordered.reserve(slots.size());
  for (std::size_t idx : order) reordered.push_back(std::move(node.children[slots[idx]]));
  for (std::size_t i = 0; i < slots.size(); ++i) node.children[slots[i]] = std::move(reordered[i]);
}

}  // namespace

TreeNode parse_tree(const std::string& line) {
  TreeParser parser(line);
  return parser.parse();
}

std::string serialize_tree(const TreeNode& tree) {
  if (tree.is_leaf()) return tree.token;
  std::string out = "(" + tree.label;
  for (const auto& child : tree.children) {
    out.push_back(' ');
    out += serialize_tree(child);
  }
  out.push_back(')');
  return out;
}

std::vector<std::string> tree_leaves(const TreeNode& tree) {
  std::vector<std::string> out;
  collect_leaves(tree, out);
  return out;
}

std::vector<std::optional<TreeNode>> read_tree_file(const std::string& path,
                                                    std::vector<std::string>* errors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open tree file: " + path);
  std::vector<std::optional<TreeNode>> trees;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      trees.emplace_back(std::nullopt);
      continue;
    }
    try {
      trees.emplace_back(parse_tree(line));
    } catch (const FormatError& e) {
      trees.emplace_back(std::nullopt);
      if (errors) {
        std::ostringstream msg;
        msg << path << ":" << lineno << ": " << e.what();
        errors->push_back(msg.str());
      }
    }
  }
  return trees;
}

std::optional<NpCategory> CategoryMap::classify(const std::string& label) const {
  if (det.count(label)) return NpCategory::det;
  if (num.count(label)) return NpCategory::num;
  if (adj.count(label)) return NpCategory::adj;
  if (noun.count(label)) return NpCategory::noun;
  return std::nullopt;
}

void CategoryMap::validate() const {
  const std::pair<const std::set<std::string>*, const char*> sets[] = {
      {&det, "det"}, {&num, "num"}, {&adj, "adj"}, {&noun, "noun"}};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      for (const auto& label : *sets[i].first) {
        if (sets[j].first->count(label)) {
          throw ConfigError("category map label '" + label + "' appears in both " +
                            sets[i].second + " and " + sets[j].second);
        }
      }
    }
  }
  if (np_labels.empty()) throw ConfigError("category map has no #np labels");
}

CategoryMap category_map_from_string(const std::string& data) {
  CategoryMap map;
  std::set<std::string>* current = nullptr;
  std::istringstream in(data);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t == "#np")
      current = &map.np_labels;
    else if (t == "#det")
      current = &map.det;
    else if (t == "#num")
      current = &map.num;
    else if (t == "#adj")
      current = &map.adj;
    else if (t == "#noun")
      current = &map.noun;
    else if (t[0] == '#') {
      std::ostringstream msg;
      msg << "category map line " << lineno << ": unknown section '" << t << "'";
      throw FormatError(msg.str());
    } else {
      if (!current) {
        std::ostringstream msg;
        msg << "category map line " << lineno << ": label before any section";
        throw FormatError(msg.str());
      }
      current->insert(upper(t));
    }
  }
  map.validate();
  return map;
}

CategoryMap load_category_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open category map: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return category_map_from_string(buf.str());
}

std::string category_map_to_string(const CategoryMap& map) {
  std::ostringstream out;
  const std::pair<const std::set<std::string>*, const char*> sets[] = {{&map.np_labels, "#np"},
                                                                       {&map.det, "#det"},
                                                                       {&map.num, "#num"},
                                                                       {&map.adj, "#adj"},
                                                                       {&map.noun, "#noun"}};
  for (const auto& [labels, header] : sets) {
    out << header << '\n';
    for (const auto& label : *labels) out << label << '\n';
  }
  return out.str();
}

CategoryMap preset_category_map(const std::string& name) {
  CategoryMap map;
  if (name == "ptb") {
    map.np_labels = {"NP"};
    map.det = {"DT", "PRP$", "PDT", "POS"};
    map.num = {"QP", "$", "CD"};
    map.adj = {"RB", "ADJP", "JJR", "JJS", "JJ"};
    map.noun = {"NN", "NNS", "NNP", "NNPS"};
  } else if (name == "vit") {
    map.np_labels = {"SN"};
    map.det = {"DET"};
    map.num = {"NUM", "SQ"};
    map.adj = {"ADJ", "SA"};
    map.noun = {"NOUN", "PRON", "PROPN", "SYM", "X"};
  } else if (name == "ctb") {
    map.np_labels = {"NP"};
    map.det = {"DT", "M", "CLP", "DP"};
    map.num = {"CD", "OD", "QP"};
    map.adj = {"JJ", "ADJP", "DNP", "DEC", "DEG"};
    map.noun = {"NN", "NP", "NR", "NT", "PRP", "PN", "FW"};
  } else if (name == "cintil") {
    map.np_labels = {"NP"};
    map.det = {"DET", "D", "DEM", "POSS", "POSS'"};
    map.num = {"QNT", "QNT'", "NUM", "PERCENTP", "PERCENTP'", "CARD", "CARD'"};
    map.adj = {"ADJ", "AP"};
    map.noun = {"N'", "NOUN", "PRON"};
  } else {
    throw ConfigError("unknown category map preset '" + name +
                      "' (valid: ptb, vit, ctb, cintil)");
  }
  map.validate();
  return map;
}

std::vector<std::string> preset_category_map_names() { return {"ptb", "vit", "ctb", "cintil"}; }

std::size_t NpPattern::rank(NpCategory c) const {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == c) return i;
  }
  throw OperationError("category missing from pattern");
}

NpPattern parse_np_pattern(const std::string& text) {
  NpPattern pattern;
  if (text == "random") {
    pattern.random = true;
    return pattern;
  }
  if (text.size() != 4) {
    throw ConfigError("bad NP pattern '" + text +
                      "': expected 4 symbols from {d,n,a,N} or 'random'");
  }
  bool seen[4] = {false, false, false, false};
  for (char c : text) {
    NpCategory cat;
    switch (c) {
      case 'd': cat = NpCategory::det; break;
      case 'n': cat = NpCategory::num; break;
      case 'a': cat = NpCategory::adj; break;
      case 'N': cat = NpCategory::noun; break;
      default:
        throw ConfigError(std::string("bad NP pattern symbol '") + c +
                          "' (valid: d, n, a, N)");
    }
    if (seen[static_cast<int>(cat)]) {
      throw ConfigError("NP pattern '" + text + "' repeats a category");
    }
    seen[static_cast<int>(cat)] = true;
    pattern.order.push_back(cat);
  }
  return pattern;
}

std::string np_pattern_to_string(const NpPattern& pattern) {
  if (pattern.random) return "random";
  std::string out;
  for (NpCategory c : pattern.order) {
    switch (c) {
      case NpCategory::det: out.push_back('d'); break;
      case NpCategory::num: out.push_back('n'); break;
      case NpCategory::adj: out.push_back('a'); break;
      case NpCategory::noun: out.push_back('N'); break;
    }
  }
  return out;
}

std::string np_pattern_tag(const NpPattern& pattern) {
  return "np_" + np_pattern_to_string(pattern);
}

TreeNode reorder_np(const TreeNode& tree, const NpPattern& pattern, const CategoryMap& map,
                    std::uint64_t seed, std::uint64_t sentence_id) {
  TreeNode out = tree;
  std::uint64_t np_index = 0;
  reorder_np_node(out, pattern, map, seed, sentence_id, np_index);
  return out;
}

NpPerturbResult perturb_np_corpus(const ParallelCorpus& corpus,
                                  const std::map<std::uint64_t, TreeNode>& trees,
                                  const NpPattern& pattern, const CategoryMap& map,
                                  std::uint64_t seed, const std::string& lang) {
  if (!corpus.records.count(lang)) {
    throw ConfigError("NP perturbation language '" + lang + "' not in corpus");
  }
  NpPerturbResult result;
  result.corpus = corpus;
  for (auto& rec : result.corpus.records[lang]) {
    auto it = trees.find(rec.id);
    if (it == trees.end()) {
      ++result.skipped;
      continue;
    }
    if (tree_leaves(it->second) != split_ws(rec.text)) {
      ++result.skipped;
      continue;
    }
    const TreeNode reordered = reorder_np(it->second, pattern, map, seed, rec.id);
    rec.text = join(tree_leaves(reordered), " ");
  }
  return result;
}

std::vector<MinimalPair> extract_minimal_pairs(const ParallelCorpus& attested,
                                               const ParallelCorpus& perturbed,
                                               const std::string& lang) {
  auto att_it = attested.records.find(lang);
  auto per_it = perturbed.records.find(lang);
  if (att_it == attested.records.end() || per_it == perturbed.records.end()) {
    throw ConfigError("minimal-pair language '" + lang + "' missing from a corpus");
  }
  const auto& att = att_it->second;
  const auto& per = per_it->second;
  if (att.size() != per.size()) {
    throw FormatError("minimal-pair corpora have different id sets");
  }
  std::vector<MinimalPair> pairs;
  for (std::size_t i = 0; i < att.size(); ++i) {
    if (att[i].id != per[i].id) {
      throw FormatError("minimal-pair corpora have different id sets");
    }
    auto split_it = attested.splits.find(att[i].id);
    if (split_it == attested.splits.end() || split_it->second != Split::test) continue;
    if (split_ws(att[i].text) != split_ws(per[i].text)) {
      pairs.push_back({att[i].id, att[i].text, per[i].text});
    }
  }
  return pairs;
}

std::string minimal_pairs_to_tsv(const std::vector<MinimalPair>& pairs) {
  std::ostringstream out;
  for (const auto& p : pairs) {
    out << p.id << '\t' << p.attested << '\t' << p.perturbed << '\n';
  }
  return out.str();
}

std::vector<MinimalPair> read_minimal_pairs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open minimal-pair file: " + path);
  std::vector<MinimalPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": expected 3 tab-separated fields";
      throw FormatError(msg.str());
    }
    MinimalPair p;
    try {
      p.id = std::stoull(line.substr(0, t1));
    } catch (const std::exception&) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": bad id field";
      throw FormatError(msg.str());
    }
    p.attested = line.substr(t1 + 1, t2 - t1 - 1);
    p.perturbed = line.substr(t2 + 1);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace langvar
