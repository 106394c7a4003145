#include "langvar/perturb.hpp"

#include <numeric>
#include <sstream>

#include "langvar/errors.hpp"
#include "langvar/rng.hpp"
#include "langvar/text.hpp"

namespace langvar {

namespace {

struct KindInfo {
  PerturbationKind kind;
  const char* name;
  bool takes_w;
  bool takes_s;
  PerturbUnit default_unit;
};

constexpr KindInfo kKinds[] = {
    {PerturbationKind::identity, "identity", false, false, PerturbUnit::word},
    {PerturbationKind::reverse_full, "reverse_full", false, false, PerturbUnit::word},
    {PerturbationKind::shuffle_local, "shuffle_local", true, true, PerturbUnit::token},
    {PerturbationKind::shuffle_even_odd, "shuffle_even_odd", false, false, PerturbUnit::token},
    {PerturbationKind::shuffle_deterministic, "shuffle_deterministic", false, true,
     PerturbUnit::token},
    {PerturbationKind::shuffle_nondeterministic, "shuffle_nondeterministic", false, true,
     PerturbUnit::token},
};

const KindInfo& info(PerturbationKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw ConfigError("bad perturbation kind");
}

std::uint64_t parse_u64(const std::string& value, const std::string& what) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad " + what + " value '" + value + "' in perturbation spec");
  }
}

}  // namespace

PerturbUnit PerturbationSpec::effective_unit() const {
  if (unit) return *unit;
  return info(kind).default_unit;
}

PerturbationSpec parse_perturbation(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto colon = text.find(':', pos);
    if (colon == std::string::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, colon - pos));
    pos = colon + 1;
  }

  PerturbationSpec spec;
  bool found = false;
  for (const auto& k : kKinds) {
    if (parts[0] == k.name) {
      spec.kind = k.kind;
      found = true;
      break;
    }
  }
  if (!found) {
    std::ostringstream msg;
    msg << "unknown perturbation kind '" << parts[0] << "'; valid kinds:";
    for (const auto& k : kKinds) msg << ' ' << k.name;
    throw ConfigError(msg.str());
  }
  const KindInfo& ki = info(spec.kind);

  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) {
      throw ConfigError("bad perturbation option '" + parts[i] + "' (expected key=value)");
    }
    const std::string key = parts[i].substr(0, eq);
    const std::string value = parts[i].substr(eq + 1);
    if (key == "w") {
      if (!ki.takes_w) throw ConfigError("option w is only valid for shuffle_local");
      const std::uint64_t w = parse_u64(value, "w");
      if (w < 1) throw ConfigError("window size w must be at least 1");
      spec.w = static_cast<std::size_t>(w);
    } else if (key == "s") {
      if (!ki.takes_s) {
        throw ConfigError(std::string("option s is not valid for ") + ki.name);
      }
      spec.s = parse_u64(value, "s");
    } else if (key == "unit") {
      if (value == "word")
        spec.unit = PerturbUnit::word;
      else if (value == "token")
        spec.unit = PerturbUnit::token;
      else
        throw ConfigError("bad unit '" + value + "' (expected word or token)");
    } else {
      throw ConfigError("unknown perturbation option '" + key + "'");
    }
  }
  if (spec.kind == PerturbationKind::shuffle_local && !spec.w) {
    throw ConfigError("shuffle_local requires w, e.g. shuffle_local:w=2");
  }
  return spec;
}

std::string perturbation_to_string(const PerturbationSpec& spec) {
  std::ostringstream out;
  out << info(spec.kind).name;
  if (spec.w) out << ":w=" << *spec.w;
  if (spec.s) out << ":s=" << *spec.s;
  if (spec.unit) out << ":unit=" << (*spec.unit == PerturbUnit::word ? "word" : "token");
  return out.str();
}

std::string perturbation_tag(const PerturbationSpec& spec) {
  const KindInfo& ki = info(spec.kind);
  std::ostringstream out;
  out << ki.name;
  if (spec.w) out << "_w" << *spec.w;
  if (spec.s) out << "_s" << *spec.s;
  if (spec.unit && *spec.unit != ki.default_unit) {
    out << (*spec.unit == PerturbUnit::word ? "_word" : "_token");
  }
  return out.str();
}

std::vector<std::string> perturbation_kind_names() {
  std::vector<std::string> names;
  for (const auto& k : kKinds) names.emplace_back(k.name);
  return names;
}

std::vector<std::size_t> perturbation_permutation(const PerturbationSpec& spec, std::size_t n,
                                                  std::uint64_t sentence_id) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  switch (spec.kind) {
    case PerturbationKind::identity:
      break;
    case PerturbationKind::reverse_full:
      for (std::size_t i = 0; i < n; ++i) perm[i] = n - 1 - i;
      break;
    case PerturbationKind::shuffle_local: {
      const std::size_t w = *spec.w;
      if (w <= 1) break;
      if (w == 2) {
        for (std::size_t i = 0; i + 1 < n; i += 2) std::swap(perm[i], perm[i + 1]);
        break;
      }
      const std::uint64_t s = spec.effective_seed();
      std::size_t window_index = 0;
      for (std::size_t base = 0; base < n; base += w, ++window_index) {
        const std::size_t m = std::min(w, n - base);
        const auto local =
            random_permutation(derive_seed({s, static_cast<std::uint64_t>(m),
                                            static_cast<std::uint64_t>(window_index)}),
                               m);
        for (std::size_t i = 0; i < m; ++i) perm[base + i] = base + local[i];
      }
      break;
    }
    case PerturbationKind::shuffle_even_odd: {
      const std::size_t evens = (n + 1) / 2;
      for (std::size_t i = 0; i < evens; ++i) perm[i] = 2 * i;
      for (std::size_t j = 0; 2 * j + 1 < n; ++j) perm[evens + j] = 2 * j + 1;
      break;
    }
    case PerturbationKind::shuffle_deterministic:
      perm = random_permutation(
          derive_seed({spec.effective_seed(), static_cast<std::uint64_t>(n)}), n);
      break;
    case PerturbationKind::shuffle_nondeterministic:
      perm = random_permutation(derive_seed({spec.effective_seed(), sentence_id}), n);
      break;
  }
  return perm;
}

TokenSequence apply(const PerturbationSpec& spec, const TokenSequence& seq,
                    std::uint64_t sentence_id) {
  return apply_permutation(seq, perturbation_permutation(spec, seq.size(), sentence_id));
}

TokenSequence recover(const PerturbationSpec& spec, const TokenSequence& seq,
                      std::uint64_t sentence_id) {
  if (spec.kind == PerturbationKind::shuffle_nondeterministic) {
    throw OperationError("shuffle_nondeterministic has no recovery function");
  }
  const auto perm = perturbation_permutation(spec, seq.size(), sentence_id);
  return apply_permutation(seq, inverse_permutation(perm));
}

ParallelCorpus perturb_corpus(const PerturbationSpec& spec, const ParallelCorpus& corpus,
                              const std::string& lang, const Tokenizer* tokenizer) {
  if (!corpus.records.count(lang)) {
    throw ConfigError("perturbation language '" + lang + "' not in corpus");
  }
  const bool token_unit = spec.effective_unit() == PerturbUnit::token;
  if (token_unit && tokenizer == nullptr) {
    throw ConfigError("token-unit perturbation requires a tokenizer");
  }
  ParallelCorpus out = corpus;
  for (auto& rec : out.records[lang]) {
    const TokenSequence seq =
        token_unit ? encode(*tokenizer, rec.text) : word_sequence(split_ws(rec.text));
    rec.text = detokenize(apply(spec, seq, rec.id));
  }
  return out;
}

}  // namespace langvar
