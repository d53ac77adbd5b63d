#include "cvxs/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "cvxs/csv.hpp"
#include "cvxs/error.hpp"

namespace cvxs {

void EmbeddingSource::validate() const {
    if (continuous_weight < 0 || ordinal_weight < 0 || nominal_weight < 0) {
        fail("InvalidArgument", "feature-kind weights must be nonnegative");
    }
    if (continuous_weight + ordinal_weight + nominal_weight == 0.0) {
        fail("InvalidArgument", "feature-kind weights must not all be zero");
    }
    if (mode == Mode::external_file && path.empty()) {
        fail("InvalidArgument", "external embedding mode needs a file path");
    }
}

double mixed_distance(std::span<const double> a, std::span<const double> b,
                      const Schema& schema, const EmbeddingSource& source) {
    double total_weight = 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < schema.features.size(); ++j) {
        double w = 0.0;
        double d = 0.0;
        switch (schema.features[j].kind) {
            case FeatureKind::continuous:
                w = source.continuous_weight;
                d = std::abs(a[j] - b[j]);
                break;
            case FeatureKind::ordinal:
                w = source.ordinal_weight;
                d = std::abs(a[j] - b[j]);
                break;
            case FeatureKind::nominal:
                w = source.nominal_weight;
                d = a[j] == b[j] ? 0.0 : 1.0;
                break;
        }
        sum += w * d;
        total_weight += w;
    }
    return total_weight > 0.0 ? sum / total_weight : 0.0;
}

namespace {

std::size_t thread_budget(std::size_t n) {
    std::size_t budget = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CVXS_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed > 0) budget = static_cast<std::size_t>(parsed);
    }
    return std::min(budget, std::max<std::size_t>(1, n / 64));
}

/// Nearest-k selection for one row given a distance callable.
template <typename DistFn>
std::vector<std::size_t> nearest_of_row(std::size_t i, std::size_t n, std::size_t k,
                                        DistFn&& dist) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        order.emplace_back(dist(i, j), j);
    }
    const std::size_t take = k - 1; // slot 0 is the row itself
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                      order.end());
    std::vector<std::size_t> result;
    result.reserve(k);
    result.push_back(i);
    for (std::size_t s = 0; s < take; ++s) result.push_back(order[s].second);
    return result;
}

} // namespace

NeighborhoodIndex build_index(const EncodedMatrix& m, std::size_t k,
                              const EmbeddingSource& source) {
    source.validate();
    const std::size_t n = m.row_count();
    if (k < 2 || k > n) {
        fail("KTooLarge", "k must satisfy 2 <= k <= " + std::to_string(n));
    }

    Matrix embedding;
    const Matrix* points = &m.values;
    bool euclidean = false;
    if (source.mode == EmbeddingSource::Mode::external_file) {
        embedding = load_matrix_csv(source.path);
        if (embedding.rows() != n) {
            fail("EmbeddingShapeMismatch",
                 "embedding has " + std::to_string(embedding.rows()) + " rows, data has " +
                     std::to_string(n));
        }
        points = &embedding;
        euclidean = true;
    }

    const auto dist = [&](std::size_t i, std::size_t j) {
        const auto a = points->row(i);
        const auto b = points->row(j);
        if (!euclidean) return mixed_distance(a, b, m.schema, source);
        double s = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) {
            const double d = a[c] - b[c];
            s += d * d;
        }
        return std::sqrt(s);
    };

    NeighborhoodIndex index;
    index.k = k;
    index.neighbors.resize(n);

    const std::size_t threads = thread_budget(n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            index.neighbors[i] = nearest_of_row(i, n, k, dist);
        }
        return index;
    }
    // rows are independent; block partition keeps the result identical to the
    // sequential order
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                index.neighbors[i] = nearest_of_row(i, n, k, dist);
            }
        });
    }
    for (auto& th : pool) th.join();
    return index;
}

Matrix outside_batch(const EncodedMatrix& m, std::span<const std::size_t> neighborhood,
                     std::size_t count, Rng& rng) {
    const std::size_t n = m.row_count();
    std::vector<char> excluded(n, 0);
    for (const auto idx : neighborhood) excluded[idx] = 1;

    std::vector<std::size_t> complement;
    complement.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!excluded[i]) complement.push_back(i);
    }
    if (count > complement.size()) {
        fail("ComplementTooSmall", "requested " + std::to_string(count) +
                                       " rows but only " +
                                       std::to_string(complement.size()) +
                                       " lie outside the neighborhood");
    }
    // partial Fisher-Yates: the first `count` slots become the sample
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(
                               rng.uniform_int(complement.size() - i));
        std::swap(complement[i], complement[j]);
    }
    complement.resize(count);
    return m.values.gather_rows(complement);
}

Matrix shuffled_neighborhood(const NeighborhoodIndex& index, const EncodedMatrix& m,
                             std::size_t i, Rng& rng) {
    auto order = index.neighbors.at(i);
    rng.shuffle(order);
    return m.values.gather_rows(order);
}

} // namespace cvxs
