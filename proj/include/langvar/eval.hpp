#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "langvar/ngram.hpp"
#include "langvar/nptree.hpp"

namespace langvar {

// Generalization score over minimal pairs, linear-SVM separability over
// perplexity trajectories, and the rank/hypothesis statistics.

// One minimal pair with its four sentence log-probabilities: each model
// scores both the attested and the perturbed sentence.
struct ScoredPair {
  std::uint64_t id = 0;
  double att_on_att = 0.0;      // attested model, attested sentence
  double att_on_unatt = 0.0;    // attested model, perturbed sentence
  double unatt_on_unatt = 0.0;  // perturbed model, perturbed sentence
  double unatt_on_att = 0.0;    // perturbed model, attested sentence
};

// Matches pairs with two score files (one per model) on (sentence id,
// variant tag). A pair with any of its four scores missing is an error;
// non-finite scores survive the join and are excluded inside genscore.
std::vector<ScoredPair> join_genscore_inputs(const std::vector<MinimalPair>& pairs,
                                             const std::vector<ScoreRecord>& att_model_scores,
                                             const std::vector<ScoreRecord>& unatt_model_scores,
                                             const std::string& att_variant,
                                             const std::string& unatt_variant);

struct GenScoreResult {
  double genscore_att = 0.0;
  double genscore_unatt = 0.0;
  double delta = 0.0;  // genscore_att - genscore_unatt
  std::size_t n = 0;   // pairs actually scored
  std::size_t ties_att = 0;
  std::size_t ties_unatt = 0;
  std::size_t excluded = 0;  // pairs dropped for non-finite scores
  // Per scored pair: (id, attested-model indicator, perturbed-model indicator).
  std::vector<std::tuple<std::uint64_t, bool, bool>> indicators;
};

// genscore_att = (1/n) sum 1{P_att(s_att) > P_att(s_unatt)}, analogously
// for the perturbed model; strict inequality, ties count as failures.
GenScoreResult genscore(const std::vector<ScoredPair>& pairs);

struct TrajectorySample {
  std::string language;
  std::string variant;
  int label = 0;  // +1 attested, -1 impossible
  std::vector<double> features;
};

struct TrajectoryMatrix {
  std::vector<std::string> feature_names;
  std::vector<TrajectorySample> rows;
};

// Tab-separated; header "language variant label <feature names...>",
// labels "attested" / "impossible".
TrajectoryMatrix read_trajectories(const std::string& path);
TrajectoryMatrix trajectories_from_string(const std::string& data, const std::string& where);
std::string trajectories_to_tsv(const TrajectoryMatrix& data);

// Collapses ppl@<ckpt>_s<seed> feature groups to their per-checkpoint mean.
TrajectoryMatrix average_seed_features(const TrajectoryMatrix& data);

struct SeparabilityResult {
  double mean_f1 = 0.0;
  double sd_f1 = 0.0;  // sample sd over folds
  std::vector<double> fold_f1;
  std::vector<std::string> warnings;
};

// Deterministic K-fold cross-validation (stratified while both classes
// have >= folds members) of a linear SVM trained with Pegasos-style
// subgradient descent on hinge loss + lambda/2 ||w||^2. Features are
// standardized with training-fold statistics.
SeparabilityResult svm_separability(const TrajectoryMatrix& data, std::size_t folds,
                                    double lambda, std::uint64_t seed,
                                    std::size_t iterations = 100000);

struct SpearmanResult {
  double rho = 0.0;
  double p = 1.0;
};

// Average ranks for ties, Pearson on ranks, two-sided p from the
// t-approximation with n-2 degrees of freedom.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_raw = 1.0;
  double p_bonferroni = 1.0;
};

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b,
                    std::size_t comparisons = 1);

struct MannWhitneyResult {
  double u_a = 0.0;
  double u_b = 0.0;
  double w_a = 0.0;  // rank sum of a
  double w_b = 0.0;
  double p = 1.0;
  bool exact = false;  // exact enumeration used (|a|+|b| <= 12)
};

MannWhitneyResult mann_whitney(const std::vector<double>& a, const std::vector<double>& b);

// Shared numeric plumbing, exposed for direct verification.
double ibeta_reg(double a, double b, double x);
double student_t_two_sided_p(double t, double df);
double normal_cdf(double z);
std::vector<double> average_ranks(const std::vector<double>& values);

}  // namespace langvar
