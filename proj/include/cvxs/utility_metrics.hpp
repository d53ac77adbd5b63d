#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvxs/table.hpp"

namespace cvxs {

/// Two-sided p-value of a Student t statistic via the regularized incomplete
/// beta function.
double student_t_two_sided_p(double t, double df);

/// Mean over continuous features of the two-sided pooled-variance two-sample
/// t-test p-value. Optional per-feature output.
double ttest_mean_p(const Table& real, const Table& synth,
                    std::vector<std::pair<std::string, double>>* per_feature = nullptr);

/// Mean over categorical features of KL(real || synth) on category
/// histograms with add-one smoothing applied to both sides. Natural log.
double kl_mean(const Table& real, const Table& synth,
               std::vector<std::pair<std::string, double>>* per_feature = nullptr);

/// Mean squared deviation of predicted realness probabilities from 1/2.
double propensity_of_probs(const std::vector<double>& probs);

/// Label real rows 1 and synthetic rows 0, fit a logistic classifier on the
/// pooled encoded rows, score in-sample. 0 = indistinguishable, 0.25 =
/// perfectly separable.
double propensity(const Table& real, const Table& synth);

/// k-means on the pooled encoded rows; log of the mean squared deviation of
/// per-cluster real proportions from the global real share, floored at 1e-12.
double log_cluster(const Table& real, const Table& synth, std::size_t k = 2,
                   std::uint64_t seed = 0);

/// | mean cross-validated macro F1 of a GBT on real - same on synthetic |,
/// stratified folds, identical configuration both sides.
double cv_abs_diff(const Table& real_train, const Table& synth, std::size_t folds = 5,
                   std::uint64_t seed = 0);

/// | F1(GBT fit on real, holdout) - F1(GBT fit on synth, holdout) |.
double holdout_f1_abs_diff(const Table& real_train, const Table& synth,
                           const Table& holdout);

/// Per categorical feature t: predict t from the remaining features with a
/// GBT trained on real vs on synthetic, both scored on the holdout; mean
/// absolute F1 difference.
double crossclass_abs_diff(const Table& real_train, const Table& synth,
                           const Table& holdout,
                           std::vector<std::pair<std::string, double>>* per_feature =
                               nullptr);

struct Ks2dResult {
    double stat = 0.0;
    double p = 1.0;
};

/// Two-dimensional Kolmogorov-Smirnov (Peacock) test on the top two
/// principal components of the pooled encoded data; p-value from a
/// label-permutation null.
Ks2dResult ks2d(const Table& real, const Table& synth, std::size_t permutations = 200,
                std::uint64_t seed = 0);

struct UtilityReport {
    std::optional<double> ttest_mean_p;
    std::optional<double> kl_mean;
    std::optional<double> propensity;
    std::optional<double> log_cluster;
    std::optional<double> cv_abs_diff;
    std::optional<double> holdout_f1_abs_diff;
    std::optional<double> crossclass_abs_diff;
    std::optional<Ks2dResult> ks2d;
    std::vector<std::pair<std::string, double>> ttest_per_feature;
    std::vector<std::pair<std::string, double>> kl_per_feature;
    std::vector<std::pair<std::string, double>> crossclass_per_feature;
};

} // namespace cvxs
