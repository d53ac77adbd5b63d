#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvxs/matrix.hpp"
#include "cvxs/table.hpp"

namespace cvxs {

/// Reversible per-column transform.
///
/// Continuous columns min-max scale to [0,1]. A sorted (encoded, raw)
/// dictionary of the fitted values backs exact decoding: dividing by the
/// range and multiplying back is not bit-exact in IEEE arithmetic, so decode
/// looks the encoded value up first and falls back to the arithmetic inverse
/// only for values never seen at fit time (synthetic interpolants).
///
/// Ordinal/nominal columns map category rank r to r/(m-1); the rank grid
/// itself is the inverse.
struct ColumnCodec {
    FeatureKind kind = FeatureKind::continuous;
    // continuous
    double min = 0.0;
    double max = 0.0;
    bool degenerate = false; // min == max; the column encodes to constant 0
    std::vector<std::pair<double, double>> dictionary; // sorted by .first (encoded)
    // categorical
    std::int32_t category_count = 0;

    double encode_continuous(double raw) const;
    double decode_continuous(double encoded) const;
    /// Exact grid value for a category rank.
    double grid_value(std::int32_t rank) const;
    /// Nearest rank with ties toward the lower rank; input clamped to [0,1].
    std::int32_t nearest_rank(double encoded) const;
};

/// Normalized numeric view of a table: all entries in [0,1], plus the
/// transforms needed to reverse the mapping.
struct EncodedMatrix {
    Schema schema;
    std::vector<ColumnCodec> codecs;
    Matrix values; // n x f
    std::vector<std::string> warnings;

    std::size_t row_count() const noexcept { return values.rows(); }
    std::size_t feature_count() const noexcept { return values.cols(); }
};

/// Fit transforms on `t` and encode it.
EncodedMatrix encode(const Table& t);

/// Fit one shared set of transforms on the union of several tables, then
/// encode each with it. Metrics that compare tables use this so both sides
/// live on the same scale.
std::vector<EncodedMatrix> encode_jointly(const std::vector<const Table*>& tables);

/// Exact inverse of encode. Every categorical entry must lie exactly on its
/// rank grid (run snap_feature_types on synthetic rows first); otherwise
/// Error("NonSnappedCategorical").
Table decode(const EncodedMatrix& m);

/// Decode `candidate` rows using `reference`'s transforms (generation path).
Table decode_with(const EncodedMatrix& reference, const Matrix& candidate);

/// Feature-type correction: continuous entries clipped to [0,1], categorical
/// entries snapped to the nearest valid rank (ties toward the lower rank).
/// Idempotent.
Matrix snap_feature_types(const EncodedMatrix& reference, Matrix candidate);

} // namespace cvxs
