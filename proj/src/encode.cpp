#include "cvxs/encode.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cvxs/error.hpp"

namespace cvxs {

double ColumnCodec::encode_continuous(double raw) const {
    if (degenerate) return 0.0;
    return (raw - min) / (max - min);
}

double ColumnCodec::decode_continuous(double encoded) const {
    const auto it = std::lower_bound(
        dictionary.begin(), dictionary.end(), encoded,
        [](const std::pair<double, double>& e, double v) { return e.first < v; });
    if (it != dictionary.end() && it->first == encoded) return it->second;
    if (degenerate) return min;
    return min + encoded * (max - min);
}

double ColumnCodec::grid_value(std::int32_t rank) const {
    if (category_count <= 1) return 0.0;
    return static_cast<double>(rank) / static_cast<double>(category_count - 1);
}

std::int32_t ColumnCodec::nearest_rank(double encoded) const {
    if (category_count <= 1) return 0;
    const double v = std::clamp(encoded, 0.0, 1.0);
    const double scaled = v * static_cast<double>(category_count - 1);
    auto rank = static_cast<std::int32_t>(std::ceil(scaled - 0.5));
    return std::clamp(rank, std::int32_t{0}, category_count - 1);
}

namespace {

std::vector<ColumnCodec> fit_codecs(const std::vector<const Table*>& tables,
                                    std::vector<std::string>& warnings) {
    if (tables.empty()) fail("EmptyTable", "no tables to fit transforms on");
    const Schema& schema = tables[0]->schema();
    for (const auto* t : tables) {
        if (!t->schema().same_structure(schema)) {
            fail("SchemaParse", "tables have different schemas");
        }
    }

    std::vector<ColumnCodec> codecs(schema.features.size());
    for (std::size_t j = 0; j < schema.features.size(); ++j) {
        const auto& spec = schema.features[j];
        auto& codec = codecs[j];
        codec.kind = spec.kind;
        if (spec.is_categorical()) {
            codec.category_count = spec.category_count();
            continue;
        }

        std::set<double> uniques;
        for (const auto* t : tables) {
            for (const auto v : t->continuous(j)) uniques.insert(v);
        }
        if (uniques.empty()) fail("EmptyTable", "cannot fit transform on empty column");
        codec.min = *uniques.begin();
        codec.max = *uniques.rbegin();
        codec.degenerate = codec.min == codec.max;
        if (codec.degenerate) {
            warnings.push_back("DegenerateContinuous: feature '" + spec.name +
                               "' is constant; encoding it to 0");
        }
        codec.dictionary.reserve(uniques.size());
        for (const auto raw : uniques) {
            codec.dictionary.emplace_back(codec.encode_continuous(raw), raw);
        }
        // encoding is monotone, so the dictionary is already sorted by .first
    }
    return codecs;
}

Matrix apply_codecs(const Table& t, const std::vector<ColumnCodec>& codecs) {
    Matrix values(t.row_count(), t.feature_count());
    for (std::size_t j = 0; j < t.feature_count(); ++j) {
        const auto& codec = codecs[j];
        if (codec.kind == FeatureKind::continuous) {
            const auto& col = t.continuous(j);
            for (std::size_t r = 0; r < col.size(); ++r) {
                values(r, j) = codec.encode_continuous(col[r]);
            }
        } else {
            const auto& col = t.categories(j);
            for (std::size_t r = 0; r < col.size(); ++r) {
                values(r, j) = codec.grid_value(col[r]);
            }
        }
    }
    return values;
}

} // namespace

EncodedMatrix encode(const Table& t) {
    EncodedMatrix m;
    m.schema = t.schema();
    m.codecs = fit_codecs({&t}, m.warnings);
    m.values = apply_codecs(t, m.codecs);
    return m;
}

std::vector<EncodedMatrix> encode_jointly(const std::vector<const Table*>& tables) {
    std::vector<std::string> warnings;
    const auto codecs = fit_codecs(tables, warnings);
    std::vector<EncodedMatrix> out;
    out.reserve(tables.size());
    for (const auto* t : tables) {
        EncodedMatrix m;
        m.schema = t->schema();
        m.codecs = codecs;
        m.values = apply_codecs(*t, codecs);
        m.warnings = warnings;
        out.push_back(std::move(m));
    }
    return out;
}

Table decode(const EncodedMatrix& m) {
    return decode_with(m, m.values);
}

Table decode_with(const EncodedMatrix& reference, const Matrix& candidate) {
    if (candidate.cols() != reference.feature_count()) {
        fail("EmbeddingShapeMismatch", "column count does not match the reference");
    }
    TableBuilder builder(reference.schema);
    for (std::size_t r = 0; r < candidate.rows(); ++r) {
        for (std::size_t j = 0; j < candidate.cols(); ++j) {
            const auto& codec = reference.codecs[j];
            const double v = candidate(r, j);
            if (codec.kind == FeatureKind::continuous) {
                builder.append_continuous(j, codec.decode_continuous(v));
            } else {
                const auto rank = codec.nearest_rank(v);
                if (v != codec.grid_value(rank)) {
                    fail("NonSnappedCategorical",
                         "entry " + std::to_string(v) + " in feature '" +
                             reference.schema.features[j].name +
                             "' is not an exact scaled rank");
                }
                builder.append_category(j, rank);
            }
        }
    }
    return std::move(builder).build();
}

Matrix snap_feature_types(const EncodedMatrix& reference, Matrix candidate) {
    if (candidate.cols() != reference.feature_count()) {
        fail("EmbeddingShapeMismatch", "column count does not match the reference");
    }
    for (std::size_t r = 0; r < candidate.rows(); ++r) {
        for (std::size_t j = 0; j < candidate.cols(); ++j) {
            const auto& codec = reference.codecs[j];
            double& v = candidate(r, j);
            if (codec.kind == FeatureKind::continuous) {
                v = std::clamp(v, 0.0, 1.0);
            } else {
                v = codec.grid_value(codec.nearest_rank(v));
            }
        }
    }
    return candidate;
}

} // namespace cvxs
