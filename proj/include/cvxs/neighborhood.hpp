#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cvxs/encode.hpp"
#include "cvxs/matrix.hpp"
#include "cvxs/rng.hpp"

namespace cvxs {

/// Where neighborhood geometry comes from: the built-in mixed-type distance
/// on the encoded data, or Euclidean distance in an externally computed
/// embedding (headerless CSV, one row per record).
struct EmbeddingSource {
    enum class Mode { mixed_distance, external_file };
    Mode mode = Mode::mixed_distance;
    double continuous_weight = 1.0;
    double ordinal_weight = 1.0;
    double nominal_weight = 1.0;
    std::string path; // external_file only

    void validate() const;
};

/// Per-row k-nearest-neighbor table. Row i's neighborhood always starts with
/// i itself; remaining slots hold the nearest other rows, distance ties
/// broken toward the lower row index.
struct NeighborhoodIndex {
    std::size_t k = 0;
    std::vector<std::vector<std::size_t>> neighbors; // n rows of k indices

    std::size_t row_count() const noexcept { return neighbors.size(); }
};

/// Weighted mean of per-feature dissimilarities between two encoded rows:
/// |a-b| for continuous/ordinal entries (already on the [0,1] scale),
/// equality mismatch for nominal entries. Weights apply per feature kind and
/// normalize by their total.
double mixed_distance(std::span<const double> a, std::span<const double> b,
                      const Schema& schema, const EmbeddingSource& source);

/// Exact k-NN per row (no approximation). With an external embedding the
/// metric is Euclidean in that space; the embedding must have one row per
/// data row.
NeighborhoodIndex build_index(const EncodedMatrix& m, std::size_t k,
                              const EmbeddingSource& source);

/// `count` encoded rows sampled uniformly without replacement from the rows
/// outside `neighborhood`.
Matrix outside_batch(const EncodedMatrix& m, std::span<const std::size_t> neighborhood,
                     std::size_t count, Rng& rng);

/// Row i's k neighbors in a fresh uniform random order.
Matrix shuffled_neighborhood(const NeighborhoodIndex& index, const EncodedMatrix& m,
                             std::size_t i, Rng& rng);

} // namespace cvxs
