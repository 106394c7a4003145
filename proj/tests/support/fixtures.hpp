#pragma once

// Deterministic synthetic text used across the test suites. Sentences are
// built from clause templates: each clause draws from one topic's small
// word pool, and multi-clause sentences mix topics. This gives natural-ish
// local statistics: n-gram adjacency is strong inside a clause, weak
// across clauses, so window-limited shuffles damage likelihood less than
// whole-sentence shuffles.

#include <cstdint>
#include <string>
#include <vector>

#include "langvar/rng.hpp"
#include "langvar/token_sequence.hpp"

namespace fixtures {

struct TopicPool {
  std::vector<std::string> nouns;
  std::vector<std::string> adjectives;
  std::vector<std::string> verbs;
};

inline const std::vector<TopicPool>& topics() {
  static const std::vector<TopicPool> pools = {
      {{"kettle", "stove", "ladle", "oven", "pantry", "skillet", "platter", "spoon"},
       {"copper", "warm", "greasy", "scoured", "dented"},
       {"simmered", "scrubbed", "stirred", "heated", "seasoned"}},
      {{"trellis", "seedling", "compost", "hedge", "lawn", "planter", "shovel", "vine"},
       {"leafy", "damp", "pruned", "shaded", "overgrown"},
       {"watered", "trimmed", "mulched", "planted", "weeded"}},
      {{"harbor", "trawler", "buoy", "wharf", "anchor", "mast", "ferry", "tide"},
       {"salty", "moored", "rusty", "windward", "laden"},
       {"docked", "hauled", "rigged", "steered", "unloaded"}},
      {{"thicket", "badger", "bracken", "owl", "stump", "moss", "fawn", "warren"},
       {"mossy", "silent", "tangled", "hollow", "shadowed"},
       {"rustled", "burrowed", "foraged", "nested", "prowled"}},
      {{"stall", "vendor", "crate", "scale", "awning", "ledger", "basket", "coin"},
       {"crowded", "haggled", "ripe", "weighed", "bartered"},
       {"sold", "priced", "stacked", "traded", "counted"}},
      {{"chalkboard", "satchel", "primer", "desk", "bell", "slate", "pupil", "inkwell"},
       {"studious", "ruled", "smudged", "recited", "lettered"},
       {"copied", "graded", "recited", "spelled", "taught"}},
      {{"lathe", "vise", "chisel", "mallet", "plank", "sawdust", "workbench", "dowel"},
       {"splintered", "planed", "jointed", "varnished", "clamped"},
       {"carved", "sanded", "drilled", "fitted", "hammered"}},
      {{"ridge", "scree", "summit", "glacier", "cairn", "gully", "ledge", "pass"},
       {"windswept", "frosted", "sheer", "craggy", "misted"},
       {"climbed", "traversed", "scaled", "descended", "crossed"}},
  };
  return pools;
}

inline const std::vector<std::string>& determiners() {
  static const std::vector<std::string> words = {"the", "a", "this", "that", "every", "some"};
  return words;
}

inline const std::vector<std::string>& prepositions() {
  static const std::vector<std::string> words = {"near", "beside", "under", "behind", "above"};
  return words;
}

// Skewed index: low indices much more likely, Zipf-ish.
inline std::size_t skewed_pick(langvar::Rng& rng, std::size_t n) {
  const std::uint64_t a = rng.below(n);
  const std::uint64_t b = rng.below(n);
  return static_cast<std::size_t>(std::min(a, b));
}

inline const std::string& pick(langvar::Rng& rng, const std::vector<std::string>& pool) {
  return pool[skewed_pick(rng, pool.size())];
}

// det adj noun verb det noun prep det adj noun  (10 words, one topic)
inline void append_clause(langvar::Rng& rng, std::size_t topic, std::vector<std::string>& out) {
  const TopicPool& pool = topics()[topic];
  out.push_back(pick(rng, determiners()));
  out.push_back(pick(rng, pool.adjectives));
  out.push_back(pick(rng, pool.nouns));
  out.push_back(pick(rng, pool.verbs));
  out.push_back(pick(rng, determiners()));
  out.push_back(pick(rng, pool.nouns));
  out.push_back(pick(rng, prepositions()));
  out.push_back(pick(rng, determiners()));
  out.push_back(pick(rng, pool.adjectives));
  out.push_back(pick(rng, pool.nouns));
}

inline std::string make_sentence(langvar::Rng& rng) {
  const std::size_t clauses = 2 + rng.below(2);  // 2 or 3 clauses, 21-32 words
  std::vector<std::string> words;
  std::size_t topic = rng.below(topics().size());
  for (std::size_t c = 0; c < clauses; ++c) {
    if (c > 0) {
      words.push_back("and");
      std::size_t next = rng.below(topics().size() - 1);
      if (next >= topic) ++next;  // force a topic change across clauses
      topic = next;
    }
    append_clause(rng, topic, words);
  }
  words.push_back(".");
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

inline std::vector<std::string> english_sentences(std::uint64_t seed, std::size_t count) {
  langvar::Rng rng(langvar::derive_seed({seed, 0xE16}));
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(make_sentence(rng));
  return out;
}

// Arbitrary-unit sequences for permutation round-trip checks.
inline langvar::TokenSequence random_sequence(langvar::Rng& rng, std::size_t max_len) {
  const std::size_t len = rng.below(max_len + 1);
  std::vector<std::string> units;
  units.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    units.push_back("t" + std::to_string(rng.below(100)));
  }
  return langvar::word_sequence(std::move(units));
}

}  // namespace fixtures
