#include "cvxs/privacy_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "cvxs/baseline_ml.hpp"
#include "cvxs/encode.hpp"
#include "cvxs/error.hpp"
#include "cvxs/rng.hpp"

namespace cvxs {

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace

DistanceTrio distance_trio(const Matrix& a, const Matrix& b) {
    if (a.rows() == 0 || b.rows() == 0) {
        fail("EmptyTable", "distance metrics need non-empty tables");
    }
    DistanceTrio trio;
    double euclid_sum = 0.0;
    double cosine_sum = 0.0;
    std::vector<double> min_to_synth(a.rows(), std::numeric_limits<double>::max());
    std::vector<double> min_to_real(b.rows(), std::numeric_limits<double>::max());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double d = euclidean(a.row(i), b.row(j));
            euclid_sum += d;
            cosine_sum += cosine_similarity(a.row(i), b.row(j));
            min_to_synth[i] = std::min(min_to_synth[i], d);
            min_to_real[j] = std::min(min_to_real[j], d);
        }
    }
    const double pairs = static_cast<double>(a.rows()) * static_cast<double>(b.rows());
    trio.euclid_mean = euclid_sum / pairs;
    trio.cosine_mean = cosine_sum / pairs;
    trio.hausdorff =
        std::max(*std::max_element(min_to_synth.begin(), min_to_synth.end()),
                 *std::max_element(min_to_real.begin(), min_to_real.end()));
    return trio;
}

DistanceTrio distance_trio(const Table& real, const Table& synth) {
    const auto encoded = encode_jointly({&real, &synth});
    return distance_trio(encoded[0].values, encoded[1].values);
}

namespace {

std::size_t hash_row(const Table& t, std::size_t row) {
    std::size_t h = 0xcbf29ce484222325ULL;
    const auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    for (std::size_t j = 0; j < t.feature_count(); ++j) {
        if (t.schema().features[j].is_categorical()) {
            mix(static_cast<std::uint64_t>(t.category_at(row, j)));
        } else {
            std::uint64_t bits;
            const double v = t.continuous_at(row, j);
            std::memcpy(&bits, &v, sizeof bits);
            mix(bits);
        }
    }
    return h;
}

bool rows_equal(const Table& a, std::size_t ra, const Table& b, std::size_t rb) {
    for (std::size_t j = 0; j < a.feature_count(); ++j) {
        if (a.schema().features[j].is_categorical()) {
            if (a.category_at(ra, j) != b.category_at(rb, j)) return false;
        } else {
            if (a.continuous_at(ra, j) != b.continuous_at(rb, j)) return false;
        }
    }
    return true;
}

} // namespace

double exact_match_pct(const Table& real, const Table& synth) {
    if (synth.row_count() == 0) fail("EmptyTable", "no synthetic rows");
    if (!real.schema().same_structure(synth.schema())) {
        fail("SchemaParse", "tables have different schemas");
    }
    std::unordered_multimap<std::size_t, std::size_t> real_rows;
    real_rows.reserve(real.row_count());
    for (std::size_t r = 0; r < real.row_count(); ++r) {
        real_rows.emplace(hash_row(real, r), r);
    }
    std::size_t matches = 0;
    for (std::size_t s = 0; s < synth.row_count(); ++s) {
        const auto [lo, hi] = real_rows.equal_range(hash_row(synth, s));
        for (auto it = lo; it != hi; ++it) {
            if (rows_equal(synth, s, real, it->second)) {
                ++matches;
                break;
            }
        }
    }
    return 100.0 * static_cast<double>(matches) / static_cast<double>(synth.row_count());
}

double mixed_hamming(const Table& table_a, std::size_t row_a, const Table& table_b,
                     std::size_t row_b, double cont_tol) {
    const auto& schema_a = table_a.schema();
    const auto& schema_b = table_b.schema();
    std::size_t mismatches = 0;
    const std::size_t f = table_a.feature_count();
    for (std::size_t j = 0; j < f; ++j) {
        if (schema_a.features[j].is_categorical()) {
            if (table_a.category_at(row_a, j) != table_b.category_at(row_b, j)) {
                ++mismatches;
            }
        } else {
            const double lo = std::min(schema_a.features[j].observed_min,
                                       schema_b.features[j].observed_min);
            const double hi = std::max(schema_a.features[j].observed_max,
                                       schema_b.features[j].observed_max);
            const double tolerance = cont_tol * (hi - lo);
            if (std::abs(table_a.continuous_at(row_a, j) -
                         table_b.continuous_at(row_b, j)) > tolerance) {
                ++mismatches;
            }
        }
    }
    return static_cast<double>(mismatches) / static_cast<double>(f);
}

MiaGrid mia(const Table& synth, const Table& attacker_real,
            const std::vector<bool>& train_membership,
            const std::vector<double>& thresholds,
            const std::vector<double>& access_fractions, std::uint64_t seed,
            double cont_tol) {
    if (train_membership.size() != attacker_real.row_count()) {
        fail("InvalidArgument", "membership flags must cover every attacker row");
    }
    const std::size_t n = attacker_real.row_count();

    // nearest synthetic row per attacker record, computed once
    std::vector<double> min_distance(n, std::numeric_limits<double>::max());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < synth.row_count(); ++s) {
            min_distance[r] = std::min(
                min_distance[r], mixed_hamming(attacker_real, r, synth, s, cont_tol));
        }
    }

    MiaGrid grid;
    grid.access_fractions = access_fractions;
    grid.thresholds = thresholds;
    grid.precision.assign(access_fractions.size(),
                          std::vector<double>(thresholds.size(), 0.0));
    grid.defined.assign(access_fractions.size(),
                        std::vector<bool>(thresholds.size(), false));

    Rng root(seed);
    for (std::size_t fi = 0; fi < access_fractions.size(); ++fi) {
        Rng rng = root.fork();
        const auto sample_size = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(access_fractions[fi] * static_cast<double>(n))));
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
        for (std::size_t i = 0; i < sample_size; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.uniform_int(n - i));
            std::swap(rows[i], rows[j]);
        }
        rows.resize(sample_size);

        for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
            std::size_t flagged = 0;
            std::size_t correct = 0;
            for (const auto r : rows) {
                if (min_distance[r] < thresholds[ti]) {
                    ++flagged;
                    if (train_membership[r]) ++correct;
                }
            }
            if (flagged == 0) {
                grid.precision[fi][ti] = std::numeric_limits<double>::quiet_NaN();
                grid.defined[fi][ti] = false;
            } else {
                grid.precision[fi][ti] =
                    static_cast<double>(correct) / static_cast<double>(flagged);
                grid.defined[fi][ti] = true;
            }
        }
    }
    return grid;
}

std::vector<AiaScore> aia(const Table& synth, const Table& real, std::uint64_t seed) {
    (void)seed; // the attack is deterministic; parameter kept for interface stability
    const auto& schema = real.schema();
    if (schema.quasi_identifiers.empty()) {
        fail("NoQuasiIdentifiers", "schema declares no quasi-identifiers");
    }
    if (!schema.same_structure(synth.schema())) {
        fail("SchemaParse", "tables have different schemas");
    }

    const auto encoded = encode_jointly({&synth, &real});
    std::vector<std::size_t> qi_cols;
    for (const auto& name : schema.quasi_identifiers) {
        qi_cols.push_back(*schema.index_of(name));
    }
    const auto gather_qi = [&](const EncodedMatrix& m) {
        Matrix X(m.row_count(), qi_cols.size());
        for (std::size_t r = 0; r < m.row_count(); ++r) {
            for (std::size_t j = 0; j < qi_cols.size(); ++j) {
                X(r, j) = m.values(r, qi_cols[j]);
            }
        }
        return X;
    };
    const Matrix synth_X = gather_qi(encoded[0]);
    const Matrix real_X = gather_qi(encoded[1]);

    constexpr std::size_t kAttackTreeDepth = 16;
    std::vector<AiaScore> scores;
    for (std::size_t j = 0; j < schema.features.size(); ++j) {
        const auto& spec = schema.features[j];
        if (spec.name == schema.target || schema.is_quasi_identifier(spec.name)) {
            continue;
        }
        AiaScore score;
        score.feature = spec.name;
        score.categorical = spec.is_categorical();
        if (spec.is_categorical()) {
            std::vector<double> y(synth.row_count());
            for (std::size_t r = 0; r < synth.row_count(); ++r) {
                y[r] = static_cast<double>(synth.category_at(r, j));
            }
            const auto tree =
                cart_fit(synth_X, y, TreeKind::classify, kAttackTreeDepth,
                         static_cast<std::size_t>(spec.category_count()));
            std::vector<std::int32_t> truth(real.row_count()), pred(real.row_count());
            for (std::size_t r = 0; r < real.row_count(); ++r) {
                truth[r] = real.category_at(r, j);
                pred[r] = static_cast<std::int32_t>(tree.predict_class(real_X.row(r)));
            }
            score.value = macro_f1(truth, pred,
                                   static_cast<std::size_t>(spec.category_count()));
        } else {
            const auto tree = cart_fit(synth_X, synth.continuous(j), TreeKind::regress,
                                       kAttackTreeDepth);
            double sq_sum = 0.0;
            for (std::size_t r = 0; r < real.row_count(); ++r) {
                const double err =
                    tree.predict_value(real_X.row(r)) - real.continuous_at(r, j);
                sq_sum += err * err;
            }
            score.value = std::sqrt(sq_sum / static_cast<double>(real.row_count()));
        }
        scores.push_back(std::move(score));
    }
    return scores;
}

} // namespace cvxs
