#include "langvar/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "langvar/errors.hpp"
#include "langvar/text.hpp"

namespace langvar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string join_ctx(const std::vector<std::string>& units, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out.append(units[i]);
  }
  return out;
}

// Sentence units mapped through the vocab, with n-1 begin markers in front
// and one end marker behind.
std::vector<std::string> padded_units(const NgramModel& model, const TokenSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.units.size() + model.order);
  for (std::size_t i = 0; i + 1 < model.order; ++i) out.emplace_back(kBos);
  for (const auto& u : seq.units) {
    out.push_back(model.vocab.contains(u) ? u : std::string(kUnk));
  }
  out.emplace_back(kEos);
  return out;
}

double format_double(const std::string& field, const std::string& path, std::size_t lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    std::ostringstream msg;
    msg << path << ":" << lineno << ": bad numeric field '" << field << "'";
    throw FormatError(msg.str());
  }
}

std::uint64_t parse_count(const std::string& field, const std::string& where) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw FormatError("bad integer field '" + field + "' in " + where);
  }
}

}  // namespace

SmoothingSpec parse_smoothing(const std::string& text) {
  SmoothingSpec spec;
  if (text == "mle") {
    spec.kind = Smoothing::mle;
    return spec;
  }
  if (text == "interpolated_wb") {
    spec.kind = Smoothing::interpolated_wb;
    return spec;
  }
  if (text.rfind("addk", 0) == 0) {
    spec.kind = Smoothing::addk;
    if (text == "addk") return spec;
    if (text[4] == ':') {
      try {
        std::size_t used = 0;
        spec.k = std::stod(text.substr(5), &used);
        if (used != text.size() - 5) throw std::invalid_argument(text);
      } catch (const std::exception&) {
        throw ConfigError("bad addk constant in '" + text + "'");
      }
      if (!(spec.k > 0)) throw ConfigError("addk constant must be positive");
      return spec;
    }
  }
  throw ConfigError("unknown smoothing '" + text +
                    "' (valid: mle, addk[:k], interpolated_wb)");
}

std::string smoothing_to_string(const SmoothingSpec& spec) {
  switch (spec.kind) {
    case Smoothing::mle: return "mle";
    case Smoothing::interpolated_wb: return "interpolated_wb";
    case Smoothing::addk: {
      std::ostringstream out;
      out << "addk:" << std::setprecision(17) << spec.k;
      return out.str();
    }
  }
  throw ConfigError("bad smoothing kind");
}

NgramModel train(const std::vector<TokenSequence>& corpus, std::size_t order,
                 const SmoothingSpec& smoothing, std::uint64_t unk_threshold) {
  if (order < 1) throw ConfigError("n-gram order must be at least 1");
  if (corpus.empty()) throw OperationError("n-gram training corpus is empty");
  if (smoothing.kind == Smoothing::addk && !(smoothing.k > 0)) {
    throw ConfigError("addk constant must be positive");
  }

  std::map<std::string, std::uint64_t> freq;
  for (const auto& seq : corpus) {
    for (const auto& u : seq.units) ++freq[u];
  }

  NgramModel model;
  model.order = order;
  model.smoothing = smoothing;
  model.unk_threshold = unk_threshold;
  model.vocab.entries = {kUnk, kBos, kEos};
  for (const auto& [unit, count] : freq) {
    if (count >= unk_threshold) model.vocab.entries.push_back(unit);
  }
  model.vocab.rebuild_index();

  model.counts.resize(order);
  for (const auto& seq : corpus) {
    const auto units = padded_units(model, seq);
    const std::size_t pad = order - 1;
    for (std::size_t i = pad; i < units.size(); ++i) {
      for (std::size_t len = 0; len < order; ++len) {
        ++model.counts[len][join_ctx(units, i - len, i)][units[i]];
      }
    }
  }
  return model;
}

namespace {

double wb_prob(const NgramModel& model, const std::vector<std::string>& ctx, std::size_t len,
               const std::string& unit) {
  const double uniform = 1.0 / static_cast<double>(model.vocab.size());
  double prob = uniform;
  // Build up from the empty context to the full one.
  for (std::size_t l = 0; l <= len; ++l) {
    const std::string key = join_ctx(ctx, ctx.size() - l, ctx.size());
    const auto& table = model.counts[l];
    auto it = table.find(key);
    if (it == table.end()) continue;  // lambda = 0, keep backoff value
    std::uint64_t total = 0;
    for (const auto& [u, c] : it->second) total += c;
    const double types = static_cast<double>(it->second.size());
    const double lambda = static_cast<double>(total) / (static_cast<double>(total) + types);
    auto unit_it = it->second.find(unit);
    const double ml =
        unit_it == it->second.end()
            ? 0.0
            : static_cast<double>(unit_it->second) / static_cast<double>(total);
    prob = lambda * ml + (1.0 - lambda) * prob;
  }
  return prob;
}

}  // namespace

double conditional_prob(const NgramModel& model, const std::vector<std::string>& context,
                        const std::string& unit) {
  std::vector<std::string> ctx;
  const std::size_t len = std::min(context.size(), model.order - 1);
  for (std::size_t i = context.size() - len; i < context.size(); ++i) {
    const auto& u = context[i];
    ctx.push_back(u == kBos || model.vocab.contains(u) ? u : std::string(kUnk));
  }
  const std::string u = model.vocab.contains(unit) ? unit : std::string(kUnk);

  switch (model.smoothing.kind) {
    case Smoothing::mle: {
      const auto& table = model.counts[len];
      auto it = table.find(join_ctx(ctx, 0, ctx.size()));
      if (it == table.end()) return 0.0;
      std::uint64_t total = 0;
      for (const auto& [next, c] : it->second) total += c;
      auto unit_it = it->second.find(u);
      if (unit_it == it->second.end() || total == 0) return 0.0;
      return static_cast<double>(unit_it->second) / static_cast<double>(total);
    }
    case Smoothing::addk: {
      const double k = model.smoothing.k;
      const double v = static_cast<double>(model.vocab.size());
      const auto& table = model.counts[len];
      auto it = table.find(join_ctx(ctx, 0, ctx.size()));
      double c = 0.0, total = 0.0;
      if (it != table.end()) {
        for (const auto& [next, cnt] : it->second) total += static_cast<double>(cnt);
        auto unit_it = it->second.find(u);
        if (unit_it != it->second.end()) c = static_cast<double>(unit_it->second);
      }
      return (c + k) / (total + k * v);
    }
    case Smoothing::interpolated_wb:
      return wb_prob(model, ctx, len, u);
  }
  throw ConfigError("bad smoothing kind");
}

ScoreRecord score(const NgramModel& model, const TokenSequence& seq, std::uint64_t sentence_id) {
  const auto units = padded_units(model, seq);
  const std::size_t pad = model.order - 1;
  double total = 0.0;
  for (std::size_t i = pad; i < units.size(); ++i) {
    const std::vector<std::string> ctx(units.begin() + static_cast<std::ptrdiff_t>(i - pad),
                                       units.begin() + static_cast<std::ptrdiff_t>(i));
    const double p = conditional_prob(model, ctx, units[i]);
    total += p > 0.0 ? std::log(p) : kNegInf;
  }
  ScoreRecord rec;
  rec.sentence_id = sentence_id;
  rec.variant = "identity";
  rec.total_logprob = total;
  rec.unit_count = units.size() - pad;
  return rec;
}

PplAggregation parse_aggregation(const std::string& text) {
  if (text == "sentence_geomean") return PplAggregation::sentence_geomean;
  if (text == "token_weighted") return PplAggregation::token_weighted;
  throw ConfigError("unknown aggregation '" + text +
                    "' (valid: sentence_geomean, token_weighted)");
}

namespace {

PerplexityReport aggregate(std::vector<ScoreRecord> scores, PplAggregation agg) {
  if (scores.empty()) throw OperationError("perplexity over an empty evaluation set");
  PerplexityReport report;
  double log_ppl_sum = 0.0;
  double logprob_sum = 0.0;
  std::uint64_t unit_sum = 0;
  for (const auto& rec : scores) {
    if (rec.unit_count == 0) throw FormatError("score record with zero unit count");
    const double log_ppl = -rec.total_logprob / static_cast<double>(rec.unit_count);
    report.per_sentence[rec.sentence_id] = std::exp(log_ppl);
    if (!std::isfinite(rec.total_logprob)) report.infinite_ids.push_back(rec.sentence_id);
    log_ppl_sum += log_ppl;
    logprob_sum += rec.total_logprob;
    unit_sum += rec.unit_count;
  }
  if (!report.infinite_ids.empty()) {
    report.corpus_value = std::numeric_limits<double>::infinity();
  } else if (agg == PplAggregation::sentence_geomean) {
    report.corpus_value = std::exp(log_ppl_sum / static_cast<double>(scores.size()));
  } else {
    report.corpus_value = std::exp(-logprob_sum / static_cast<double>(unit_sum));
  }
  return report;
}

}  // namespace

PerplexityReport perplexity(const NgramModel& model,
                            const std::vector<std::pair<std::uint64_t, TokenSequence>>& test,
                            PplAggregation agg) {
  std::vector<ScoreRecord> scores;
  scores.reserve(test.size());
  for (const auto& [id, seq] : test) scores.push_back(score(model, seq, id));
  return aggregate(std::move(scores), agg);
}

PerplexityReport perplexity_from_scores(const std::vector<ScoreRecord>& scores,
                                        PplAggregation agg) {
  return aggregate(scores, agg);
}

std::string scores_to_tsv(const std::vector<ScoreRecord>& scores) {
  std::ostringstream out;
  out << "#sentence_id\tvariant\ttotal_logprob_nat\tunit_count\tcheckpoint\tseed\n";
  out << std::setprecision(17);
  for (const auto& rec : scores) {
    out << rec.sentence_id << '\t' << rec.variant << '\t' << rec.total_logprob << '\t'
        << rec.unit_count << '\t' << rec.checkpoint << '\t' << rec.seed << '\n';
  }
  return out.str();
}

std::vector<ScoreRecord> ingest_scores(const std::string& path, std::size_t* duplicates) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open score file: " + path);
  std::vector<ScoreRecord> records;
  std::map<std::pair<std::uint64_t, std::string>, std::size_t> index;
  std::size_t dup_count = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
      const auto tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() != 6) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": expected 6 tab-separated fields, found "
          << fields.size();
      throw FormatError(msg.str());
    }
    ScoreRecord rec;
    try {
      rec.sentence_id = parse_count(fields[0], "sentence_id");
      rec.unit_count = parse_count(fields[3], "unit_count");
      rec.seed = parse_count(fields[5], "seed");
    } catch (const FormatError& e) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": " << e.what();
      throw FormatError(msg.str());
    }
    rec.variant = fields[1];
    rec.total_logprob = format_double(fields[2], path, lineno);
    rec.checkpoint = fields[4];
    if (rec.unit_count == 0) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": unit_count must be at least 1";
      throw FormatError(msg.str());
    }
    const std::pair<std::uint64_t, std::string> key{rec.sentence_id, rec.variant};
    auto it = index.find(key);
    if (it != index.end()) {
      records[it->second] = std::move(rec);
      ++dup_count;
    } else {
      index.emplace(key, records.size());
      records.push_back(std::move(rec));
    }
  }
  if (duplicates) *duplicates = dup_count;
  return records;
}

void write_scores(const std::vector<ScoreRecord>& scores, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write score file: " + path);
  out << scores_to_tsv(scores);
}

std::string model_to_string(const NgramModel& model) {
  std::ostringstream out;
  out << "#ngram v1\n";
  out << "#order " << model.order << '\n';
  out << "#smoothing " << smoothing_to_string(model.smoothing) << '\n';
  out << "#unk_threshold " << model.unk_threshold << '\n';
  out << "#vocab\n";
  for (const auto& e : model.vocab.entries) out << e << '\n';
  out << "#counts\n";
  for (const auto& table : model.counts) {
    for (const auto& [ctx, nexts] : table) {
      for (const auto& [unit, count] : nexts) {
        out << ctx << '\t' << unit << '\t' << count << '\n';
      }
    }
  }
  return out.str();
}

NgramModel model_from_string(const std::string& data) {
  std::istringstream in(data);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "#ngram v1") {
    throw FormatError("model file does not start with '#ngram v1'");
  }
  NgramModel model;
  bool have_order = false;
  enum class Section { header, vocab, counts } section = Section::header;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (section == Section::header) {
      if (line.rfind("#order ", 0) == 0) {
        model.order = parse_count(line.substr(7), "order header");
        if (model.order < 1) throw FormatError("model order must be at least 1");
        have_order = true;
      } else if (line.rfind("#smoothing ", 0) == 0) {
        model.smoothing = parse_smoothing(line.substr(11));
      } else if (line.rfind("#unk_threshold ", 0) == 0) {
        model.unk_threshold = parse_count(line.substr(15), "unk_threshold header");
      } else if (line == "#vocab") {
        section = Section::vocab;
      } else {
        std::ostringstream msg;
        msg << "model file line " << lineno << ": unexpected header line";
        throw FormatError(msg.str());
      }
      continue;
    }
    if (section == Section::vocab) {
      if (line == "#counts") {
        if (!have_order) throw FormatError("model file missing #order header");
        model.counts.resize(model.order);
        model.vocab.rebuild_index();
        section = Section::counts;
        continue;
      }
      if (!line.empty()) model.vocab.entries.push_back(line);
      continue;
    }
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      std::ostringstream msg;
      msg << "model file line " << lineno << ": expected context<TAB>unit<TAB>count";
      throw FormatError(msg.str());
    }
    const std::string ctx = line.substr(0, t1);
    const std::string unit = line.substr(t1 + 1, t2 - t1 - 1);
    const std::uint64_t count = parse_count(line.substr(t2 + 1), "count column");
    const std::size_t len = ctx.empty() ? 0 : split_ws(ctx).size();
    if (len >= model.order) {
      std::ostringstream msg;
      msg << "model file line " << lineno << ": context longer than order allows";
      throw FormatError(msg.str());
    }
    model.counts[len][ctx][unit] = count;
  }
  if (section != Section::counts) throw FormatError("model file missing #counts section");
  return model;
}

void save_model(const NgramModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write model file: " + path);
  out << model_to_string(model);
}

NgramModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_string(buf.str());
}

}  // namespace langvar
