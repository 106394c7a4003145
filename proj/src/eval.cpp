#include "langvar/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "langvar/errors.hpp"
#include "langvar/rng.hpp"
#include "langvar/text.hpp"

namespace langvar {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    const auto tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double mean) {
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size() - 1);
}

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

int parse_label(const std::string& s, const std::string& where) {
  if (s == "attested") return 1;
  if (s == "impossible") return -1;
  throw FormatError(where + ": bad label '" + s + "' (expected attested or impossible)");
}

}  // namespace

double ibeta_reg(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw OperationError("ibeta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - ln_beta);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw OperationError("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  const double p = ibeta_reg(df / 2.0, 0.5, x);
  return std::clamp(p, 0.0, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::vector<ScoredPair> join_genscore_inputs(const std::vector<MinimalPair>& pairs,
                                             const std::vector<ScoreRecord>& att_model_scores,
                                             const std::vector<ScoreRecord>& unatt_model_scores,
                                             const std::string& att_variant,
                                             const std::string& unatt_variant) {
  auto build = [](const std::vector<ScoreRecord>& scores) {
    std::map<std::pair<std::uint64_t, std::string>, double> index;
    for (const auto& rec : scores) index[{rec.sentence_id, rec.variant}] = rec.total_logprob;
    return index;
  };
  const auto att_index = build(att_model_scores);
  const auto unatt_index = build(unatt_model_scores);
  auto lookup = [](const std::map<std::pair<std::uint64_t, std::string>, double>& index,
                   std::uint64_t id, const std::string& variant, const char* which) {
    auto it = index.find({id, variant});
    if (it == index.end()) {
      std::ostringstream msg;
      msg << which << " score file has no record for sentence " << id << ", variant '"
          << variant << "'";
      throw FormatError(msg.str());
    }
    return it->second;
  };
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    ScoredPair sp;
    sp.id = p.id;
    sp.att_on_att = lookup(att_index, p.id, att_variant, "attested-model");
    sp.att_on_unatt = lookup(att_index, p.id, unatt_variant, "attested-model");
    sp.unatt_on_unatt = lookup(unatt_index, p.id, unatt_variant, "perturbed-model");
    sp.unatt_on_att = lookup(unatt_index, p.id, att_variant, "perturbed-model");
    out.push_back(sp);
  }
  return out;
}

GenScoreResult genscore(const std::vector<ScoredPair>& pairs) {
  if (pairs.empty()) throw ConfigError("genscore requires at least one minimal pair");
  GenScoreResult result;
  std::size_t att_wins = 0, unatt_wins = 0;
  for (const auto& p : pairs) {
    if (!std::isfinite(p.att_on_att) || !std::isfinite(p.att_on_unatt) ||
        !std::isfinite(p.unatt_on_unatt) || !std::isfinite(p.unatt_on_att)) {
      ++result.excluded;
      continue;
    }
    const bool ind_att = p.att_on_att > p.att_on_unatt;
    const bool ind_unatt = p.unatt_on_unatt > p.unatt_on_att;
    if (p.att_on_att == p.att_on_unatt) ++result.ties_att;
    if (p.unatt_on_unatt == p.unatt_on_att) ++result.ties_unatt;
    att_wins += ind_att ? 1 : 0;
    unatt_wins += ind_unatt ? 1 : 0;
    result.indicators.emplace_back(p.id, ind_att, ind_unatt);
    ++result.n;
  }
  if (result.n == 0) {
    throw OperationError("genscore: every pair was excluded for non-finite scores");
  }
  result.genscore_att = static_cast<double>(att_wins) / static_cast<double>(result.n);
  result.genscore_unatt = static_cast<double>(unatt_wins) / static_cast<double>(result.n);
  result.delta = result.genscore_att - result.genscore_unatt;
  return result;
}

TrajectoryMatrix trajectories_from_string(const std::string& data, const std::string& where) {
  std::istringstream in(data);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(where + ": empty trajectory file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_tabs(line);
  if (header.size() < 4 || header[0] != "language" || header[1] != "variant" ||
      header[2] != "label") {
    throw FormatError(where + ": header must be 'language variant label <features...>'");
  }
  TrajectoryMatrix matrix;
  matrix.feature_names.assign(header.begin() + 3, header.end());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << where << ":" << lineno << ": expected " << header.size() << " fields, found "
          << fields.size();
      throw FormatError(msg.str());
    }
    TrajectorySample sample;
    sample.language = fields[0];
    sample.variant = fields[1];
    std::ostringstream ctx;
    ctx << where << ":" << lineno;
    sample.label = parse_label(fields[2], ctx.str());
    for (std::size_t i = 3; i < fields.size(); ++i) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(fields[i], &used);
        if (used != fields[i].size()) throw std::invalid_argument(fields[i]);
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << where << ":" << lineno << ": bad feature value '" << fields[i] << "'";
        throw FormatError(msg.str());
      }
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << where << ":" << lineno << ": non-finite feature value";
        throw FormatError(msg.str());
      }
      sample.features.push_back(v);
    }
    matrix.rows.push_back(std::move(sample));
  }
  return matrix;
}

TrajectoryMatrix read_trajectories(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open trajectory file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return trajectories_from_string(buf.str(), path);
}

std::string trajectories_to_tsv(const TrajectoryMatrix& data) {
  std::ostringstream out;
  out << "language\tvariant\tlabel";
  for (const auto& name : data.feature_names) out << '\t' << name;
  out << '\n';
  out << std::setprecision(17);
  for (const auto& row : data.rows) {
    out << row.language << '\t' << row.variant << '\t'
        << (row.label > 0 ? "attested" : "impossible");
    for (double v : row.features) out << '\t' << v;
    out << '\n';
  }
  return out.str();
}

TrajectoryMatrix average_seed_features(const TrajectoryMatrix& data) {
  // Group ppl@<ckpt>_s<k> columns by their <ckpt> prefix.
  std::vector<std::string> group_names;
  std::vector<std::size_t> group_of(data.feature_names.size());
  std::map<std::string, std::size_t> group_index;
  for (std::size_t i = 0; i < data.feature_names.size(); ++i) {
    const std::string& name = data.feature_names[i];
    std::string prefix = name;
    const auto pos = name.rfind("_s");
    if (pos != std::string::npos && pos + 2 < name.size()) {
      bool digits = true;
      for (std::size_t j = pos + 2; j < name.size(); ++j) {
        if (name[j] < '0' || name[j] > '9') {
          digits = false;
          break;
        }
      }
      if (digits) prefix = name.substr(0, pos);
    }
    auto it = group_index.find(prefix);
    if (it == group_index.end()) {
      it = group_index.emplace(prefix, group_names.size()).first;
      group_names.push_back(prefix);
    }
    group_of[i] = it->second;
  }
  TrajectoryMatrix out;
  out.feature_names = group_names;
  for (const auto& row : data.rows) {
    TrajectorySample sample;
    sample.language = row.language;
    sample.variant = row.variant;
    sample.label = row.label;
    std::vector<double> sums(group_names.size(), 0.0);
    std::vector<std::size_t> counts(group_names.size(), 0);
    for (std::size_t i = 0; i < row.features.size(); ++i) {
      sums[group_of[i]] += row.features[i];
      ++counts[group_of[i]];
    }
    for (std::size_t g = 0; g < group_names.size(); ++g) {
      sample.features.push_back(sums[g] / static_cast<double>(counts[g]));
    }
    out.rows.push_back(std::move(sample));
  }
  return out;
}

SeparabilityResult svm_separability(const TrajectoryMatrix& data, std::size_t folds,
                                    double lambda, std::uint64_t seed,
                                    std::size_t iterations) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (!(lambda > 0.0)) throw ConfigError("regularization constant must be positive");
  const std::size_t n = data.rows.size();
  if (folds > n) throw ConfigError("more folds than samples");
  const std::size_t dim = data.rows.empty() ? 0 : data.rows.front().features.size();
  for (const auto& row : data.rows) {
    if (row.features.size() != dim) {
      throw FormatError("trajectory rows have inconsistent feature counts");
    }
  }

  std::vector<std::size_t> pos_rows, neg_rows;
  for (std::size_t i = 0; i < n; ++i) {
    (data.rows[i].label > 0 ? pos_rows : neg_rows).push_back(i);
  }
  if (pos_rows.empty() || neg_rows.empty()) {
    throw OperationError("separability requires samples from both classes");
  }

  SeparabilityResult result;
  if (pos_rows.size() < folds || neg_rows.size() < folds) {
    result.warnings.push_back(
        "a class has fewer members than folds; stratification degrades to plain k-fold");
  }

  // Dimensions constant across the whole dataset carry no signal and break
  // standardization; drop them once up front.
  std::vector<std::size_t> kept_dims;
  for (std::size_t d = 0; d < dim; ++d) {
    const double first = data.rows.front().features[d];
    bool varies = false;
    for (const auto& row : data.rows) {
      if (row.features[d] != first) {
        varies = true;
        break;
      }
    }
    if (varies) kept_dims.push_back(d);
  }
  if (kept_dims.size() < dim) {
    std::ostringstream msg;
    msg << "dropped " << (dim - kept_dims.size()) << " zero-variance feature dimension(s)";
    result.warnings.push_back(msg.str());
  }
  if (kept_dims.empty()) throw OperationError("all feature dimensions are constant");

  // Interleave the two shuffled classes, then deal round-robin: fold sizes
  // differ by at most one and stay class-balanced when counts allow.
  std::vector<std::size_t> dealt;
  dealt.reserve(n);
  const auto pos_perm = random_permutation(derive_seed({seed, 0}), pos_rows.size());
  const auto neg_perm = random_permutation(derive_seed({seed, 1}), neg_rows.size());
  for (std::size_t i = 0; i < pos_perm.size(); ++i) dealt.push_back(pos_rows[pos_perm[i]]);
  for (std::size_t i = 0; i < neg_perm.size(); ++i) dealt.push_back(neg_rows[neg_perm[i]]);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t p = 0; p < n; ++p) fold_of[dealt[p]] = p % folds;

  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (fold_of[i] == f ? test_rows : train_rows).push_back(i);
    }

    // Standardize with training-fold statistics (population variance).
    const std::size_t d = kept_dims.size();
    std::vector<double> mean(d, 0.0), sd(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i : train_rows) mean[j] += data.rows[i].features[kept_dims[j]];
      mean[j] /= static_cast<double>(train_rows.size());
      for (std::size_t i : train_rows) {
        const double delta = data.rows[i].features[kept_dims[j]] - mean[j];
        sd[j] += delta * delta;
      }
      sd[j] = std::sqrt(sd[j] / static_cast<double>(train_rows.size()));
      if (sd[j] == 0.0) sd[j] = 1.0;
    }
    auto standardized = [&](std::size_t row) {
      std::vector<double> x(d + 1);
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = (data.rows[row].features[kept_dims[j]] - mean[j]) / sd[j];
      }
      x[d] = 1.0;  // bias feature
      return x;
    };

    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    xs.reserve(train_rows.size());
    for (std::size_t i : train_rows) {
      xs.push_back(standardized(i));
      ys.push_back(data.rows[i].label > 0 ? 1.0 : -1.0);
    }

    const auto visit_order =
        random_permutation(derive_seed({seed, 2 + static_cast<std::uint64_t>(f)}), xs.size());
    std::vector<double> w(d + 1, 0.0);
    for (std::size_t t = 1; t <= iterations; ++t) {
      const std::size_t i = visit_order[(t - 1) % xs.size()];
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      double margin = 0.0;
      for (std::size_t j = 0; j <= d; ++j) margin += w[j] * xs[i][j];
      margin *= ys[i];
      const double keep = 1.0 - eta * lambda;
      for (std::size_t j = 0; j <= d; ++j) w[j] *= keep;
      if (margin < 1.0) {
        for (std::size_t j = 0; j <= d; ++j) w[j] += eta * ys[i] * xs[i][j];
      }
    }

    std::size_t tp_pos = 0, fp_pos = 0, fn_pos = 0;
    std::size_t tp_neg = 0, fp_neg = 0, fn_neg = 0;
    for (std::size_t i : test_rows) {
      const auto x = standardized(i);
      double dot = 0.0;
      for (std::size_t j = 0; j <= d; ++j) dot += w[j] * x[j];
      const int predicted = dot >= 0.0 ? 1 : -1;
      const int actual = data.rows[i].label;
      if (predicted == 1) {
        (actual == 1 ? tp_pos : fp_pos) += 1;
        if (actual != 1) fn_neg += 1;
      } else {
        (actual == -1 ? tp_neg : fp_neg) += 1;
        if (actual != -1) fn_pos += 1;
      }
    }
    auto f1 = [](std::size_t tp, std::size_t fp, std::size_t fn) {
      const double denom = static_cast<double>(2 * tp + fp + fn);
      return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
    };
    result.fold_f1.push_back((f1(tp_pos, fp_pos, fn_pos) + f1(tp_neg, fp_neg, fn_neg)) / 2.0);
  }

  result.mean_f1 = mean_of(result.fold_f1);
  result.sd_f1 =
      result.fold_f1.size() > 1
          ? std::sqrt(sample_variance(result.fold_f1, result.mean_f1))
          : 0.0;
  return result;
}

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("spearman inputs differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw ConfigError("spearman requires at least 3 observations");
  const auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
  };
  if (constant(x) || constant(y)) {
    throw OperationError("spearman undefined for a constant input vector");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mx = mean_of(rx), my = mean_of(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  SpearmanResult result;
  result.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  if (std::fabs(result.rho) >= 1.0) {
    result.p = 0.0;
  } else {
    const double t = result.rho * std::sqrt(df / (1.0 - result.rho * result.rho));
    result.p = student_t_two_sided_p(t, df);
  }
  return result;
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b,
                    std::size_t comparisons) {
  if (a.size() < 2 || b.size() < 2) {
    throw ConfigError("welch t-test requires at least 2 observations per sample");
  }
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = sample_variance(a, ma), vb = sample_variance(b, mb);
  if (va == 0.0 && vb == 0.0) {
    throw OperationError("welch t-test undefined: both samples have zero variance");
  }
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double sa = va / na, sb = vb / nb;
  WelchResult result;
  result.t = (ma - mb) / std::sqrt(sa + sb);
  result.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  result.p_raw = student_t_two_sided_p(result.t, result.df);
  result.p_bonferroni = std::min(1.0, static_cast<double>(comparisons) * result.p_raw);
  return result;
}

namespace {

void enumerate_subsets(const std::vector<double>& ranks, std::size_t next, std::size_t remaining,
                       double rank_sum, std::size_t na, double threshold, double mu,
                       std::uint64_t& total, std::uint64_t& extreme) {
  if (remaining == 0) {
    ++total;
    const double u = rank_sum - static_cast<double>(na * (na + 1)) / 2.0;
    if (std::fabs(u - mu) >= threshold - 1e-12) ++extreme;
    return;
  }
  if (ranks.size() - next < remaining) return;
  enumerate_subsets(ranks, next + 1, remaining - 1, rank_sum + ranks[next], na, threshold, mu,
                    total, extreme);
  enumerate_subsets(ranks, next + 1, remaining, rank_sum, na, threshold, mu, total, extreme);
}

}  // namespace

MannWhitneyResult mann_whitney(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) {
    throw ConfigError("mann-whitney requires non-empty samples");
  }
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  std::vector<double> pooled;
  pooled.reserve(n);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = average_ranks(pooled);

  MannWhitneyResult result;
  for (std::size_t i = 0; i < na; ++i) result.w_a += ranks[i];
  for (std::size_t i = na; i < n; ++i) result.w_b += ranks[i];
  result.u_a = result.w_a - static_cast<double>(na * (na + 1)) / 2.0;
  result.u_b = result.w_b - static_cast<double>(nb * (nb + 1)) / 2.0;
  const double mu = static_cast<double>(na) * static_cast<double>(nb) / 2.0;

  if (n <= 12) {
    result.exact = true;
    std::uint64_t total = 0, extreme = 0;
    enumerate_subsets(ranks, 0, na, 0.0, na, std::fabs(result.u_a - mu), mu, total, extreme);
    result.p = static_cast<double>(extreme) / static_cast<double>(total);
    return result;
  }

  // Normal approximation with tie correction and continuity correction.
  std::map<double, std::size_t> tie_groups;
  for (double v : pooled) ++tie_groups[v];
  double tie_term = 0.0;
  for (const auto& [value, count] : tie_groups) {
    const double t = static_cast<double>(count);
    tie_term += t * t * t - t;
  }
  const double nn = static_cast<double>(n);
  const double var = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                     ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0.0) {
    result.p = 1.0;
    return result;
  }
  const double z = std::max(0.0, std::fabs(result.u_a - mu) - 0.5) / std::sqrt(var);
  result.p = std::clamp(2.0 * (1.0 - normal_cdf(z)), 0.0, 1.0);
  return result;
}

}  // namespace langvar
