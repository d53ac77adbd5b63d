#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "cvxs/csv.hpp"
#include "cvxs/encode.hpp"
#include "cvxs/error.hpp"
#include "cvxs/neighborhood.hpp"
#include "support.hpp"

using namespace cvxs;
using cvxs::testing::mini_table;
using cvxs::testing::random_mixed_table;

namespace {

/// O(n^2) reference: sort every other row by (distance, index).
std::vector<std::size_t> brute_force_neighbors(const EncodedMatrix& m, std::size_t i,
                                               std::size_t k,
                                               const EmbeddingSource& source) {
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t j = 0; j < m.row_count(); ++j) {
        if (j == i) continue;
        order.emplace_back(
            mixed_distance(m.values.row(i), m.values.row(j), m.schema, source), j);
    }
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> result{i};
    for (std::size_t s = 0; s + 1 < k; ++s) result.push_back(order[s].second);
    return result;
}

} // namespace

TEST_CASE("mixed_distance worked examples") {
    Schema schema;
    schema.features = {
        {"c", FeatureKind::continuous, {}, 0, 0},
        {"n", FeatureKind::nominal, {"a", "b"}, 0, 0},
    };
    schema.target = "n";
    EmbeddingSource source;

    const std::vector<double> row_a{0.1, 0.0};
    const std::vector<double> row_b{0.5, 1.0};
    CHECK(mixed_distance(row_a, row_a, schema, source) == 0.0);
    // continuous diff 0.4 plus nominal mismatch, unit weights -> mean 0.7
    CHECK(mixed_distance(row_a, row_b, schema, source) == doctest::Approx(0.7));

    Schema all_nominal;
    all_nominal.features = {
        {"n1", FeatureKind::nominal, {"a", "b"}, 0, 0},
        {"n2", FeatureKind::nominal, {"a", "b"}, 0, 0},
    };
    all_nominal.target = "n1";
    CHECK(mixed_distance(std::vector<double>{0, 0}, std::vector<double>{1, 1},
                         all_nominal, source) == 1.0);
}

TEST_CASE("mixed_distance is a semimetric") {
    Rng rng(21);
    const auto t = random_mixed_table(30, 2, rng);
    const auto m = encode(t);
    EmbeddingSource source;
    source.ordinal_weight = 2.0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto i = rng.uniform_int(30);
        const auto j = rng.uniform_int(30);
        const double d_ij =
            mixed_distance(m.values.row(i), m.values.row(j), m.schema, source);
        const double d_ji =
            mixed_distance(m.values.row(j), m.values.row(i), m.schema, source);
        CHECK(d_ij == d_ji);
        CHECK(d_ij >= 0.0);
        CHECK(mixed_distance(m.values.row(i), m.values.row(i), m.schema, source) == 0.0);
    }
}

TEST_CASE("build_index on a 1-D line and with k = n") {
    // only the continuous column separates the rows
    const auto t = mini_table({0.0, 0.1, 0.9}, {0, 0, 0}, {0, 0, 0});
    const auto m = encode(t);
    EmbeddingSource source;
    const auto index = build_index(m, 2, source);
    CHECK(index.neighbors[0] == std::vector<std::size_t>{0, 1});
    CHECK(index.neighbors[2] == std::vector<std::size_t>{2, 1});

    const auto full = build_index(m, 3, source);
    for (std::size_t i = 0; i < 3; ++i) {
        auto sorted = full.neighbors[i];
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<std::size_t>{0, 1, 2});
        CHECK(full.neighbors[i][0] == i);
    }
}

TEST_CASE("build_index matches the brute-force oracle") {
    Rng rng(99);
    EmbeddingSource source;
    for (int rep = 0; rep < 10; ++rep) {
        const auto n = 20 + rng.uniform_int(60);
        const auto t = random_mixed_table(n, 3, rng);
        const auto m = encode(t);
        const std::size_t k = 2 + rng.uniform_int(6);
        const auto index = build_index(m, k, source);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(index.neighbors[i] == brute_force_neighbors(m, i, k, source));
        }
    }
}

TEST_CASE("chosen neighbors are never farther than excluded rows") {
    Rng rng(17);
    EmbeddingSource source;
    const auto t = random_mixed_table(60, 2, rng);
    const auto m = encode(t);
    const auto index = build_index(m, 5, source);
    for (std::size_t i = 0; i < m.row_count(); ++i) {
        std::set<std::size_t> chosen(index.neighbors[i].begin(),
                                     index.neighbors[i].end());
        double max_chosen = 0.0;
        for (const auto j : index.neighbors[i]) {
            max_chosen = std::max(
                max_chosen,
                mixed_distance(m.values.row(i), m.values.row(j), m.schema, source));
        }
        for (std::size_t j = 0; j < m.row_count(); ++j) {
            if (chosen.contains(j)) continue;
            CHECK(mixed_distance(m.values.row(i), m.values.row(j), m.schema, source) >=
                  max_chosen);
        }
    }
}

TEST_CASE("neighborhood membership survives row relabeling") {
    Rng rng(31);
    const auto t = random_mixed_table(40, 3, rng);
    const auto m = encode(t);
    EmbeddingSource source;
    const auto index = build_index(m, 4, source);

    std::vector<std::size_t> reversed(40);
    for (std::size_t i = 0; i < 40; ++i) reversed[i] = 39 - i;
    const auto m_rev = encode(t.select_rows(reversed));
    const auto index_rev = build_index(m_rev, 4, source);
    for (std::size_t i = 0; i < 40; ++i) {
        std::set<std::size_t> original(index.neighbors[i].begin(),
                                       index.neighbors[i].end());
        std::set<std::size_t> relabeled;
        for (const auto j : index_rev.neighbors[39 - i]) relabeled.insert(39 - j);
        CHECK(original == relabeled);
    }
}

TEST_CASE("build_index k bounds") {
    const auto m = encode(mini_table({1, 2, 3}, {0, 1, 2}, {0, 1, 0}));
    EmbeddingSource source;
    for (const std::size_t bad_k : {std::size_t{1}, std::size_t{4}}) {
        try {
            build_index(m, bad_k, source);
            FAIL("expected KTooLarge");
        } catch (const Error& e) {
            CHECK(e.code() == "KTooLarge");
        }
    }
}

TEST_CASE("external embedding mode drives the index") {
    namespace fs = std::filesystem;
    const auto t = mini_table({0, 1, 2, 3}, {0, 1, 2, 0}, {0, 1, 0, 1});
    const auto m = encode(t);

    // embedding reverses the natural geometry: rows 0 and 3 become closest
    const auto path = (fs::temp_directory_path() / "cvxs_embed_test.csv").string();
    write_text_file(path, "0\n5\n9\n0.1\n");
    EmbeddingSource source;
    source.mode = EmbeddingSource::Mode::external_file;
    source.path = path;
    const auto index = build_index(m, 2, source);
    CHECK(index.neighbors[0] == std::vector<std::size_t>{0, 3});
    CHECK(index.neighbors[2] == std::vector<std::size_t>{2, 1});

    write_text_file(path, "0\n5\n9\n");
    try {
        build_index(m, 2, source);
        FAIL("expected EmbeddingShapeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == "EmbeddingShapeMismatch");
    }
    fs::remove(path);
}

TEST_CASE("outside_batch samples the complement without replacement") {
    const auto t =
        mini_table({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                   {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
    const auto m = encode(t);
    const std::vector<std::size_t> nbh{0, 2, 4, 6, 8};

    Rng rng(5);
    const auto batch = outside_batch(m, nbh, 5, rng);
    std::multiset<double> got;
    for (std::size_t r = 0; r < 5; ++r) got.insert(batch(r, 0) * 9.0);
    CHECK(got == std::multiset<double>{1, 3, 5, 7, 9});

    Rng rng_a(7), rng_b(7);
    CHECK(outside_batch(m, nbh, 3, rng_a) == outside_batch(m, nbh, 3, rng_b));

    Rng rng_c(7);
    try {
        outside_batch(m, nbh, 6, rng_c);
        FAIL("expected ComplementTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == "ComplementTooSmall");
    }
}

TEST_CASE("shuffled_neighborhood permutes the neighbor rows uniformly") {
    const auto t = mini_table({0, 0.1, 0.9}, {0, 1, 2}, {0, 1, 0});
    const auto m = encode(t);
    EmbeddingSource source;
    const auto index = build_index(m, 2, source);

    Rng rng(3);
    std::size_t first_is_self = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto nbh = shuffled_neighborhood(index, m, 0, rng);
        std::multiset<double> rows_seen{nbh(0, 0), nbh(1, 0)};
        std::multiset<double> expected{m.values(0, 0), m.values(1, 0)};
        CHECK(rows_seen == expected);
        if (nbh(0, 0) == m.values(0, 0)) ++first_is_self;
    }
    // both orders of a k=2 neighborhood must occur; 100 fair flips stay
    // within [20, 80] with overwhelming probability
    CHECK(first_is_self > 20);
    CHECK(first_is_self < 80);

    Rng rng_a(9), rng_b(9);
    CHECK(shuffled_neighborhood(index, m, 1, rng_a) ==
          shuffled_neighborhood(index, m, 1, rng_b));
}
