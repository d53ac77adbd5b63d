#pragma once

// shared fixtures for the test suites

#include <string>
#include <vector>

#include "cvxs/dataset_ops.hpp"
#include "cvxs/rng.hpp"
#include "cvxs/table.hpp"

namespace cvxs::testing {

/// Small mixed-type schema used across suites: one continuous, one 3-level
/// ordinal, one 2-level nominal target.
inline Schema mini_schema() {
    Schema schema;
    schema.features = {
        {"age", FeatureKind::continuous, {}, 0, 0},
        {"stage", FeatureKind::ordinal, {"low", "mid", "high"}, 0, 0},
        {"label", FeatureKind::nominal, {"neg", "pos"}, 0, 0},
    };
    schema.target = "label";
    schema.quasi_identifiers = {"age"};
    return schema;
}

inline Table mini_table(const std::vector<double>& age,
                        const std::vector<std::int32_t>& stage,
                        const std::vector<std::int32_t>& label) {
    return Table(mini_schema(), {Column(age), Column(stage), Column(label)});
}

/// Random mixed-type table for property checks: f_cont continuous columns
/// plus one ordinal and one nominal target.
inline Table random_mixed_table(std::size_t n, std::size_t f_cont, Rng& rng) {
    Schema schema;
    for (std::size_t j = 0; j < f_cont; ++j) {
        schema.features.push_back(
            {"c" + std::to_string(j), FeatureKind::continuous, {}, 0, 0});
    }
    schema.features.push_back({"ord", FeatureKind::ordinal, {"a", "b", "c", "d"}, 0, 0});
    schema.features.push_back({"cls", FeatureKind::nominal, {"x", "y"}, 0, 0});
    schema.target = "cls";
    schema.quasi_identifiers = {"c0"};

    std::vector<Column> columns;
    for (std::size_t j = 0; j < f_cont; ++j) {
        std::vector<double> col(n);
        for (auto& v : col) v = rng.normal(0.0, 2.0);
        columns.emplace_back(std::move(col));
    }
    std::vector<std::int32_t> ord(n), cls(n);
    for (auto& v : ord) v = static_cast<std::int32_t>(rng.uniform_int(4));
    for (auto& v : cls) v = static_cast<std::int32_t>(rng.uniform_int(2));
    columns.emplace_back(std::move(ord));
    columns.emplace_back(std::move(cls));
    return Table(std::move(schema), std::move(columns));
}

/// Copy-prone training data: pairs of rows sharing their continuous values
/// and nominal flag but sitting at opposite ends of the ordinal scale, plus
/// exact duplicates every fourth pair. With k = 2 each row's nearest
/// neighbor is its partner, so snapped convex combinations reproduce real
/// rows whenever one coefficient dominates.
inline Table copy_prone_dataset(std::size_t pairs, std::uint64_t seed) {
    Schema schema;
    schema.features = {
        {"v1", FeatureKind::continuous, {}, 0, 0},
        {"v2", FeatureKind::continuous, {}, 0, 0},
        {"grade", FeatureKind::ordinal, {"low", "mid", "high"}, 0, 0},
        {"flag", FeatureKind::nominal, {"off", "on"}, 0, 0},
        {"label", FeatureKind::nominal, {"neg", "pos"}, 0, 0},
    };
    schema.target = "label";
    schema.quasi_identifiers = {"v1"};

    Rng rng(seed);
    TableBuilder builder(schema);
    for (std::size_t p = 0; p < pairs; ++p) {
        const double v1 = rng.normal(0.0, 1.0);
        const double v2 = rng.normal(0.0, 1.0);
        const auto flag = static_cast<std::int32_t>(rng.uniform_int(2));
        const auto label = static_cast<std::int32_t>(rng.uniform_int(2));
        const bool duplicate = p % 4 == 0;
        for (int half = 0; half < 2; ++half) {
            builder.append_continuous(0, v1);
            builder.append_continuous(1, v2);
            builder.append_category(2, duplicate ? 2 : (half == 0 ? 0 : 2));
            builder.append_category(3, flag);
            builder.append_category(4, label);
        }
    }
    return std::move(builder).build();
}

/// Fixture for membership-inference checks: member rows carry severity in
/// {low, mid}, non-member rows severity == high, so every non-member differs
/// from every member in at least one categorical feature (Hamming >= 1/5).
inline std::pair<Table, Table> mia_member_fixture(std::size_t n, std::uint64_t seed) {
    const auto base = toy_dataset(2 * n, seed);
    const auto& schema = base.schema();
    TableBuilder members(schema);
    TableBuilder outsiders(schema);
    for (std::size_t r = 0; r < 2 * n; ++r) {
        auto& builder = r < n ? members : outsiders;
        builder.append_continuous(0, base.continuous_at(r, 0));
        builder.append_continuous(1, base.continuous_at(r, 1));
        const auto severity = base.category_at(r, 2);
        builder.append_category(2, r < n ? std::min(severity, 1) : 2);
        builder.append_category(3, base.category_at(r, 3));
        builder.append_category(4, base.category_at(r, 4));
    }
    return {std::move(members).build(), std::move(outsiders).build()};
}

} // namespace cvxs::testing
