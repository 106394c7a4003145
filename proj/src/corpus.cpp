#include "langvar/corpus.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "langvar/errors.hpp"
#include "langvar/rng.hpp"
#include "langvar/text.hpp"

namespace langvar {

namespace {

std::string sanitize_text(std::string_view raw) {
  std::string t(raw);
  for (char& c : t) {
    if (c == '\t') c = ' ';
  }
  if (!t.empty() && t.back() == '\r') t.pop_back();
  return t;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open input file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

ParallelCorpus keep_ids(const ParallelCorpus& corpus,
                        const std::unordered_set<std::uint64_t>& keep) {
  ParallelCorpus out;
  out.languages = corpus.languages;
  for (const auto& [lang, recs] : corpus.records) {
    auto& dst = out.records[lang];
    for (const auto& r : recs) {
      if (keep.count(r.id)) dst.push_back(r);
    }
  }
  for (const auto& [id, split] : corpus.splits) {
    if (keep.count(id)) out.splits.emplace(id, split);
  }
  return out;
}

}  // namespace

std::string split_name(Split s) { return s == Split::train ? "train" : "test"; }

Split parse_split(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  throw FormatError("unknown split label: " + s);
}

std::size_t ParallelCorpus::num_ids() const {
  if (records.empty()) return 0;
  return records.begin()->second.size();
}

std::vector<std::uint64_t> ParallelCorpus::ids() const {
  std::vector<std::uint64_t> out;
  if (records.empty()) return out;
  out.reserve(records.begin()->second.size());
  for (const auto& r : records.begin()->second) out.push_back(r.id);
  return out;
}

const SentenceRecord* ParallelCorpus::find(const std::string& lang, std::uint64_t id) const {
  auto it = records.find(lang);
  if (it == records.end()) return nullptr;
  const auto& recs = it->second;
  auto pos = std::lower_bound(recs.begin(), recs.end(), id,
                              [](const SentenceRecord& r, std::uint64_t v) { return r.id < v; });
  if (pos == recs.end() || pos->id != id) return nullptr;
  return &*pos;
}

ParallelCorpus ingest_lines(const std::vector<SourceLines>& sources,
                            std::vector<std::string>* warnings) {
  ParallelCorpus corpus;
  std::uint64_t next_id = 0;
  for (const auto& source : sources) {
    if (source.lines.empty()) continue;
    std::unordered_set<std::string> seen_langs;
    const std::size_t n = source.lines.front().second.size();
    for (const auto& [lang, lines] : source.lines) {
      if (lang.empty()) throw ConfigError("empty language code in source '" + source.tag + "'");
      if (!seen_langs.insert(lang).second) {
        throw ConfigError("duplicate language '" + lang + "' in source '" + source.tag + "'");
      }
      if (lines.size() != n) {
        std::ostringstream msg;
        msg << "alignment error in source '" << source.tag << "': language '" << lang << "' has "
            << lines.size() << " lines, expected " << n;
        throw FormatError(msg.str());
      }
      corpus.languages.insert(lang);
    }
    for (std::size_t i = 0; i < n; ++i) {
      bool drop = false;
      for (const auto& [lang, lines] : source.lines) {
        if (trim(sanitize_text(lines[i])).empty()) {
          drop = true;
          break;
        }
      }
      if (drop) {
        if (warnings) {
          std::ostringstream msg;
          msg << "dropped empty line " << (i + 1) << " of source '" << source.tag << "'";
          warnings->push_back(msg.str());
        }
        continue;
      }
      const std::uint64_t id = next_id++;
      for (const auto& [lang, lines] : source.lines) {
        SentenceRecord rec;
        rec.id = id;
        rec.lang = lang;
        rec.source = source.tag;
        rec.text = sanitize_text(lines[i]);
        corpus.records[lang].push_back(std::move(rec));
      }
      corpus.splits.emplace(id, Split::train);
    }
  }
  // A language missing from some source would leave ragged id sets.
  for (const auto& source : sources) {
    if (source.lines.empty()) continue;
    if (source.lines.size() != corpus.languages.size()) {
      throw FormatError("source '" + source.tag + "' does not cover every corpus language");
    }
  }
  return corpus;
}

ParallelCorpus ingest(const std::vector<SourceSpec>& sources, std::vector<std::string>* warnings) {
  std::vector<SourceLines> loaded;
  loaded.reserve(sources.size());
  for (const auto& spec : sources) {
    SourceLines sl;
    sl.tag = spec.tag;
    for (const auto& [lang, path] : spec.files) {
      sl.lines.emplace_back(lang, read_lines(path));
    }
    loaded.push_back(std::move(sl));
  }
  return ingest_lines(loaded, warnings);
}

ParallelCorpus deduplicate(const ParallelCorpus& corpus, const std::string& key_lang) {
  auto it = corpus.records.find(key_lang);
  if (it == corpus.records.end()) {
    throw ConfigError("dedup key language '" + key_lang + "' not in corpus");
  }
  std::unordered_set<std::string> seen;
  std::unordered_set<std::uint64_t> keep;
  for (const auto& rec : it->second) {
    if (seen.insert(canonical_form(rec.text)).second) keep.insert(rec.id);
  }
  return keep_ids(corpus, keep);
}

ParallelCorpus filter_records(const ParallelCorpus& corpus, const RecordPredicate& accept) {
  std::unordered_set<std::uint64_t> rejected;
  for (const auto& [lang, recs] : corpus.records) {
    for (const auto& rec : recs) {
      if (!accept(rec)) rejected.insert(rec.id);
    }
  }
  std::unordered_set<std::uint64_t> keep;
  for (std::uint64_t id : corpus.ids()) {
    if (!rejected.count(id)) keep.insert(id);
  }
  return keep_ids(corpus, keep);
}

RecordPredicate ascii_ratio_predicate(const std::string& key_lang, double threshold) {
  return [key_lang, threshold](const SentenceRecord& rec) {
    if (rec.lang == key_lang) return true;
    return ascii_letter_ratio(rec.text) < threshold;
  };
}

ParallelCorpus make_splits(const ParallelCorpus& corpus, std::size_t test_size,
                           std::uint64_t seed) {
  std::vector<std::uint64_t> ids = corpus.ids();
  std::sort(ids.begin(), ids.end());
  if (test_size > ids.size()) {
    throw ConfigError("test size exceeds corpus size");
  }
  const auto perm = random_permutation(derive_seed({seed}), ids.size());
  ParallelCorpus out = corpus;
  out.splits.clear();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.splits.emplace(ids[perm[i]], i < test_size ? Split::test : Split::train);
  }
  return out;
}

CorpusStats stats(const ParallelCorpus& corpus, const std::string& ref_lang) {
  CorpusStats st;
  auto it = corpus.records.find(ref_lang);
  if (it == corpus.records.end()) {
    if (corpus.records.empty()) return st;
    throw ConfigError("stats reference language '" + ref_lang + "' not in corpus");
  }
  for (const auto& rec : it->second) {
    auto& row = st.per_source[rec.source];
    row.first += 1;
    row.second += split_ws(rec.text).size();
  }
  for (const auto& [src, row] : st.per_source) {
    st.total_sentences += row.first;
    st.total_words += row.second;
  }
  return st;
}

std::string corpus_to_tsv(const ParallelCorpus& corpus, const std::string& lang) {
  auto it = corpus.records.find(lang);
  if (it == corpus.records.end()) throw ConfigError("language '" + lang + "' not in corpus");
  std::ostringstream out;
  for (const auto& rec : it->second) {
    auto split_it = corpus.splits.find(rec.id);
    const Split sp = split_it == corpus.splits.end() ? Split::train : split_it->second;
    out << rec.id << '\t' << rec.lang << '\t' << rec.source << '\t' << split_name(sp) << '\t'
        << rec.text << '\n';
  }
  return out.str();
}

void write_corpus(const ParallelCorpus& corpus, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& lang : corpus.languages) {
    const auto path = std::filesystem::path(out_dir) / ("corpus." + lang + ".tsv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write corpus file: " + path.string());
    out << corpus_to_tsv(corpus, lang);
  }
}

ParallelCorpus read_corpus_file(const std::string& path) {
  return read_corpus_files({path});
}

ParallelCorpus read_corpus_files(const std::vector<std::string>& paths) {
  ParallelCorpus corpus;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open corpus file: " + path);
    std::string line;
    std::size_t lineno = 0;
    std::uint64_t prev_id = 0;
    bool first = true;
    std::string file_lang;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::array<std::string, 4> head;
      std::size_t pos = 0;
      for (auto& field : head) {
        const auto tab = line.find('\t', pos);
        if (tab == std::string::npos) {
          std::ostringstream msg;
          msg << path << ":" << lineno << ": expected 5 tab-separated fields";
          throw FormatError(msg.str());
        }
        field = line.substr(pos, tab - pos);
        pos = tab + 1;
      }
      SentenceRecord rec;
      try {
        rec.id = std::stoull(head[0]);
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << path << ":" << lineno << ": bad id field '" << head[0] << "'";
        throw FormatError(msg.str());
      }
      rec.lang = head[1];
      rec.source = head[2];
      rec.text = line.substr(pos);
      if (!first && rec.id <= prev_id) {
        std::ostringstream msg;
        msg << path << ":" << lineno << ": ids not strictly increasing";
        throw FormatError(msg.str());
      }
      if (first) {
        file_lang = rec.lang;
      } else if (rec.lang != file_lang) {
        std::ostringstream msg;
        msg << path << ":" << lineno << ": mixed languages in one record file";
        throw FormatError(msg.str());
      }
      prev_id = rec.id;
      first = false;
      const Split sp = parse_split(head[3]);
      auto split_it = corpus.splits.find(rec.id);
      if (split_it == corpus.splits.end()) {
        corpus.splits.emplace(rec.id, sp);
      } else if (split_it->second != sp) {
        std::ostringstream msg;
        msg << path << ":" << lineno << ": split disagrees with another language for id "
            << rec.id;
        throw FormatError(msg.str());
      }
      corpus.languages.insert(rec.lang);
      corpus.records[rec.lang].push_back(std::move(rec));
    }
  }
  // Alignment totality across the loaded files.
  const std::vector<std::uint64_t> base = corpus.ids();
  for (const auto& [lang, recs] : corpus.records) {
    if (recs.size() != base.size()) {
      throw FormatError("alignment error: language '" + lang + "' has a different id set");
    }
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (recs[i].id != base[i]) {
        throw FormatError("alignment error: language '" + lang + "' has a different id set");
      }
    }
  }
  return corpus;
}

}  // namespace langvar
