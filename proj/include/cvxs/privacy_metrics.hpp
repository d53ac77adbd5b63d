#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvxs/matrix.hpp"
#include "cvxs/table.hpp"

namespace cvxs {

struct DistanceTrio {
    double euclid_mean = 0.0;
    double hausdorff = 0.0;   // symmetric (two-sided)
    double cosine_mean = 0.0; // zero vectors contribute similarity 0
};

/// Pairwise distance summaries between two row sets.
DistanceTrio distance_trio(const Matrix& real, const Matrix& synth);

/// Table form: rows are first encoded with transforms shared across both
/// tables.
DistanceTrio distance_trio(const Table& real, const Table& synth);

/// Percentage of synthetic rows exactly equal (raw values) to some real row.
double exact_match_pct(const Table& real, const Table& synth);

/// Fraction of mismatching features between two raw rows. Categorical
/// features mismatch on inequality; continuous features mismatch when they
/// differ by more than cont_tol times the observed range (ranges combined
/// over both tables, keeping the measure symmetric).
double mixed_hamming(const Table& table_a, std::size_t row_a, const Table& table_b,
                     std::size_t row_b, double cont_tol = 0.05);

struct MiaGrid {
    std::vector<double> access_fractions;
    std::vector<double> thresholds;
    /// precision[fraction][threshold]; NaN marks undefined cells (nothing
    /// flagged), mirrored in `defined`.
    std::vector<std::vector<double>> precision;
    std::vector<std::vector<bool>> defined;
};

inline const std::vector<double> kMiaDefaultThresholds = {0.1, 0.2, 0.3, 0.4};
inline const std::vector<double> kMiaDefaultAccessFractions = {0.2, 0.4, 0.6, 0.8, 1.0};

/// Membership inference: for each access fraction a seeded subsample of the
/// attacker's real records is compared against every synthetic row; records
/// whose minimum Hamming distance falls below the threshold are flagged as
/// suspected training members. Reports flagging precision per cell (the
/// subsample is shared across thresholds, so flagged counts are monotone in
/// the threshold).
MiaGrid mia(const Table& synth, const Table& attacker_real,
            const std::vector<bool>& train_membership,
            const std::vector<double>& thresholds = kMiaDefaultThresholds,
            const std::vector<double>& access_fractions = kMiaDefaultAccessFractions,
            std::uint64_t seed = 0, double cont_tol = 0.05);

struct AiaScore {
    std::string feature;
    bool categorical = false;
    double value = 0.0; // macro F1 for categorical, RMSE (raw units) otherwise
};

/// Attribute inference: for every sensitive feature (neither quasi-identifier
/// nor target), train a decision tree on the synthetic quasi-identifiers and
/// predict that feature for the real rows.
std::vector<AiaScore> aia(const Table& synth, const Table& real, std::uint64_t seed = 0);

struct PrivacyReport {
    std::optional<DistanceTrio> distance;
    std::optional<double> exact_match_pct;
    std::optional<MiaGrid> mia;
    std::optional<std::vector<AiaScore>> aia;
};

} // namespace cvxs
