#include <doctest.h>

#include <cmath>

#include "cvxs/dataset_ops.hpp"
#include "cvxs/error.hpp"
#include "cvxs/pipeline.hpp"
#include "cvxs/privacy_metrics.hpp"
#include "support.hpp"

using namespace cvxs;
using cvxs::testing::mini_table;

namespace {

Table qi_table(const std::vector<std::int32_t>& qi, const std::vector<std::int32_t>& s,
               const std::vector<double>& value) {
    Schema schema;
    schema.features = {
        {"qi", FeatureKind::nominal, {"a", "b"}, 0, 0},
        {"secret", FeatureKind::nominal, {"a", "b"}, 0, 0},
        {"amount", FeatureKind::continuous, {}, 0, 0},
        {"label", FeatureKind::nominal, {"x", "y"}, 0, 0},
    };
    schema.target = "label";
    schema.quasi_identifiers = {"qi"};
    std::vector<std::int32_t> label(qi.size(), 0);
    label.back() = 1;
    return Table(schema, {Column(qi), Column(s), Column(value), Column(label)});
}

} // namespace

TEST_CASE("distance trio on raw matrices follows the 3-4-5 triangle") {
    Matrix real(1, 2, 0.0);
    Matrix synth(1, 2);
    synth(0, 0) = 3.0;
    synth(0, 1) = 4.0;
    const auto trio = distance_trio(real, synth);
    CHECK(trio.euclid_mean == 5.0);
    CHECK(trio.hausdorff == 5.0);
    CHECK(trio.cosine_mean == 0.0); // zero vector convention

    const auto self = distance_trio(synth, synth);
    CHECK(self.euclid_mean == 0.0);
    CHECK(self.hausdorff == 0.0);
    CHECK(self.cosine_mean == 1.0);
}

TEST_CASE("distance trio on tables: self comparison has zero hausdorff") {
    const auto t = toy_dataset(40, 3);
    const auto trio = distance_trio(t, t);
    CHECK(trio.hausdorff == 0.0);
    CHECK(trio.euclid_mean > 0.0);

    try {
        distance_trio(Matrix(0, 2), Matrix(1, 2));
        FAIL("expected EmptyTable");
    } catch (const Error& e) {
        CHECK(e.code() == "EmptyTable");
    }
}

TEST_CASE("hausdorff is zero exactly when the row sets coincide") {
    const auto t = toy_dataset(30, 9);
    Rng rng(4);
    const auto reordered = t.select_rows(rng.permutation(t.row_count()));
    CHECK(distance_trio(t, reordered).hausdorff == 0.0);

    auto rows = rng.permutation(t.row_count());
    rows.resize(t.row_count() - 5); // drop some rows: sets differ
    CHECK(distance_trio(t, t.select_rows(rows)).hausdorff > 0.0);
}

TEST_CASE("exact match percentage") {
    const auto t = toy_dataset(50, 2);
    CHECK(exact_match_pct(t, t) == 100.0);

    const auto other = toy_dataset(50, 3);
    CHECK(exact_match_pct(t, other) == 0.0);

    Rng rng(5);
    const auto shuffled = t.select_rows(rng.permutation(t.row_count()));
    CHECK(exact_match_pct(shuffled, t) == 100.0);

    // half the synthetic rows are verbatim copies
    std::vector<std::size_t> half;
    for (std::size_t r = 0; r < 25; ++r) half.push_back(r);
    const auto mixed = concat_tables(t.select_rows(half), other.select_rows(half));
    CHECK(exact_match_pct(t, mixed) == 50.0);
}

TEST_CASE("mixed_hamming counts mismatching features") {
    const auto a = qi_table({0, 1}, {0, 1}, {10.0, 20.0});
    CHECK(mixed_hamming(a, 0, a, 0) == 0.0);
    CHECK(mixed_hamming(a, 0, a, 1) == 1.0); // every feature differs

    // one mismatch out of four features
    const auto b = qi_table({0, 0}, {0, 0}, {10.0, 10.2});
    CHECK(mixed_hamming(b, 0, b, 1) == doctest::Approx(0.25));

    // inside the 5% tolerance band the continuous feature matches
    const auto c = qi_table({0, 0, 0}, {0, 0, 0}, {10.0, 10.2, 20.0});
    CHECK(mixed_hamming(c, 0, c, 1) == 0.0);
    CHECK(mixed_hamming(c, 0, c, 1) == mixed_hamming(c, 1, c, 0));
}

TEST_CASE("mia: verbatim copies are caught with full precision") {
    const auto [train_part, holdout] = cvxs::testing::mia_member_fixture(40, 7);
    const auto attacker = concat_tables(train_part, holdout);
    std::vector<bool> member(attacker.row_count(), false);
    for (std::size_t r = 0; r < train_part.row_count(); ++r) member[r] = true;

    // synthetic data = the training rows verbatim; at a near-zero threshold
    // only true members sit at distance 0
    const auto grid = mia(train_part, attacker, member, {0.05}, {1.0}, 3);
    REQUIRE(grid.defined[0][0]);
    CHECK(grid.precision[0][0] == 1.0);
}

TEST_CASE("mia: maximally distant synthetic rows flag nothing") {
    const auto real = qi_table({0, 0, 1, 1}, {0, 1, 0, 1}, {1, 2, 3, 4});
    const auto synth = qi_table({1, 1, 0, 0}, {1, 0, 1, 0}, {100, 200, 300, 400});
    std::vector<bool> member{true, true, false, false};
    const auto grid = mia(synth, real, member);
    for (const auto& row : grid.defined) {
        for (const bool cell : row) CHECK_FALSE(cell);
    }
}

TEST_CASE("mia cells stay defined as the threshold grows") {
    const auto train_part = toy_dataset(30, 11);
    const auto holdout = toy_dataset(30, 12);
    const auto attacker = concat_tables(train_part, holdout);
    std::vector<bool> member(attacker.row_count(), false);
    for (std::size_t r = 0; r < train_part.row_count(); ++r) member[r] = true;

    const auto grid = mia(train_part, attacker, member);
    for (std::size_t fi = 0; fi < grid.access_fractions.size(); ++fi) {
        bool was_defined = false;
        for (std::size_t ti = 0; ti < grid.thresholds.size(); ++ti) {
            if (was_defined) CHECK(grid.defined[fi][ti]);
            was_defined = was_defined || grid.defined[fi][ti];
        }
    }
}

TEST_CASE("aia: learnable identity scores full disclosure risk") {
    // secret equals the quasi-identifier; tree trained on synthetic copies
    std::vector<std::int32_t> qi, secret;
    std::vector<double> amount;
    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        const auto v = static_cast<std::int32_t>(rng.uniform_int(2));
        qi.push_back(v);
        secret.push_back(v);
        amount.push_back(5.0);
    }
    const auto t = qi_table(qi, secret, amount);
    const auto scores = aia(t, t);
    REQUIRE(scores.size() == 2);
    for (const auto& s : scores) {
        if (s.feature == "secret") {
            CHECK(s.categorical);
            CHECK(s.value == 1.0);
        } else {
            CHECK(s.feature == "amount");
            CHECK_FALSE(s.categorical);
            CHECK(s.value == 0.0); // constant column predicts exactly
        }
    }
}

TEST_CASE("aia: independent secret hovers near coin-flip F1") {
    Schema schema;
    schema.features = {
        {"qi", FeatureKind::continuous, {}, 0, 0},
        {"secret", FeatureKind::nominal, {"a", "b"}, 0, 0},
        {"label", FeatureKind::nominal, {"x", "y"}, 0, 0},
    };
    schema.target = "label";
    schema.quasi_identifiers = {"qi"};

    Rng rng(7);
    const auto build = [&](std::uint64_t) {
        std::vector<double> qi(400);
        std::vector<std::int32_t> secret(400), label(400, 0);
        for (int i = 0; i < 400; ++i) {
            qi[i] = rng.next_double();
            secret[i] = static_cast<std::int32_t>(rng.uniform_int(2));
        }
        label[0] = 1;
        return Table(schema, {Column(qi), Column(secret), Column(label)});
    };
    const auto synth = build(1);
    const auto real = build(2);
    const auto scores = aia(synth, real);
    REQUIRE(scores.size() == 1);
    CHECK(scores[0].value > 0.4);
    CHECK(scores[0].value < 0.6);
}

TEST_CASE("aia requires quasi-identifiers") {
    auto t = toy_dataset(30, 1);
    Schema stripped = t.schema();
    stripped.quasi_identifiers.clear();
    std::vector<Column> columns;
    for (std::size_t j = 0; j < t.feature_count(); ++j) {
        if (t.schema().features[j].is_categorical()) {
            columns.emplace_back(t.categories(j));
        } else {
            columns.emplace_back(t.continuous(j));
        }
    }
    const Table no_qi(stripped, std::move(columns));
    try {
        aia(no_qi, no_qi);
        FAIL("expected NoQuasiIdentifiers");
    } catch (const Error& e) {
        CHECK(e.code() == "NoQuasiIdentifiers");
    }
}
