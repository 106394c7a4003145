#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace langvar {

// Aligned multilingual corpus: one SentenceRecord per (id, language), the
// same id set in every language, and a per-id train/test split.

enum class Split { train, test };

std::string split_name(Split s);
Split parse_split(const std::string& s);

struct SentenceRecord {
  std::uint64_t id = 0;
  std::string lang;
  std::string source;
  std::string text;
};

struct ParallelCorpus {
  std::set<std::string> languages;
  // Per language, records sorted by id. Every language holds the same ids.
  std::map<std::string, std::vector<SentenceRecord>> records;
  std::map<std::uint64_t, Split> splits;

  std::size_t num_ids() const;
  std::vector<std::uint64_t> ids() const;
  const SentenceRecord* find(const std::string& lang, std::uint64_t id) const;
};

struct SourceSpec {
  std::string tag;
  // language code -> path (ingest) or in-memory lines (ingest_lines).
  std::vector<std::pair<std::string, std::string>> files;
};

struct SourceLines {
  std::string tag;
  std::vector<std::pair<std::string, std::vector<std::string>>> lines;
};

struct CorpusStats {
  // source -> (sentences, reference-language words); plus an overall row.
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> per_source;
  std::uint64_t total_sentences = 0;
  std::uint64_t total_words = 0;
};

// Ids are assigned by (source order, line order). Tabs inside text become
// single spaces. A line that is empty after trimming drops that id tuple
// from every language; each drop appends a warning.
ParallelCorpus ingest_lines(const std::vector<SourceLines>& sources,
                            std::vector<std::string>* warnings = nullptr);
ParallelCorpus ingest(const std::vector<SourceSpec>& sources,
                      std::vector<std::string>* warnings = nullptr);

// Key-language texts are compared in canonical form (NFC, trimmed,
// whitespace collapsed); the first id in id order survives, duplicates are
// removed from every language.
ParallelCorpus deduplicate(const ParallelCorpus& corpus, const std::string& key_lang);

using RecordPredicate = std::function<bool(const SentenceRecord&)>;

// Rejecting any record removes its id from every language.
ParallelCorpus filter_records(const ParallelCorpus& corpus, const RecordPredicate& accept);

// Baseline language filter: rejects a record not in key_lang whose text is
// at least 90% ASCII letters over non-whitespace code points.
RecordPredicate ascii_ratio_predicate(const std::string& key_lang, double threshold = 0.9);

// Deterministic split: Fisher-Yates over the sorted id set, first test_size
// shuffled ids become test. Pure function of (sorted ids, seed).
ParallelCorpus make_splits(const ParallelCorpus& corpus, std::size_t test_size,
                           std::uint64_t seed);

CorpusStats stats(const ParallelCorpus& corpus, const std::string& ref_lang);

// Record file: one line per record, "id<TAB>lang<TAB>source<TAB>split<TAB>text",
// sorted by id. One file per language.
std::string corpus_to_tsv(const ParallelCorpus& corpus, const std::string& lang);
void write_corpus(const ParallelCorpus& corpus, const std::string& out_dir);
ParallelCorpus read_corpus_file(const std::string& path);
ParallelCorpus read_corpus_files(const std::vector<std::string>& paths);

}  // namespace langvar
