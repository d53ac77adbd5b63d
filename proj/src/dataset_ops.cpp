#include "cvxs/dataset_ops.hpp"

#include <algorithm>
#include <cmath>

#include "cvxs/error.hpp"

namespace cvxs {

std::pair<Table, Table> split(const Table& t, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        fail("InvalidArgument", "train_fraction must be in (0, 1)");
    }
    const auto target = t.schema().target_index();
    const auto& classes = t.categories(target);
    const auto n_classes = t.schema().features[target].categories.size();

    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t r = 0; r < t.row_count(); ++r) {
        by_class[static_cast<std::size_t>(classes[r])].push_back(r);
    }

    Rng rng(seed);
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t c = 0; c < n_classes; ++c) {
        auto& rows = by_class[c];
        if (rows.empty()) continue;
        if (rows.size() < 2) {
            fail("ClassTooSmall",
                 "target class '" + t.schema().features[target].categories[c] +
                     "' has fewer than 2 rows");
        }
        const auto want =
            std::llround(train_fraction * static_cast<double>(rows.size()));
        const auto n_train = static_cast<std::size_t>(std::clamp<long long>(
            want, 1, static_cast<long long>(rows.size()) - 1));
        rng.shuffle(rows);
        train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + n_train);
        test_rows.insert(test_rows.end(), rows.begin() + n_train, rows.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {t.select_rows(train_rows), t.select_rows(test_rows)};
}

Table toy_dataset(std::size_t n, std::uint64_t seed) {
    if (n < 20) fail("InvalidArgument", "toy_dataset needs n >= 20");

    Schema schema;
    schema.features = {
        {"biomarker_a", FeatureKind::continuous, {}, 0, 0},
        {"biomarker_b", FeatureKind::continuous, {}, 0, 0},
        {"severity", FeatureKind::ordinal, {"low", "mid", "high"}, 0, 0},
        {"smoker", FeatureKind::nominal, {"no", "yes"}, 0, 0},
        {"outcome", FeatureKind::nominal, {"neg", "pos"}, 0, 0},
    };
    schema.target = "outcome";
    schema.quasi_identifiers = {"biomarker_a", "smoker"};

    Rng rng(seed);
    TableBuilder builder(schema);
    for (std::size_t i = 0; i < n; ++i) {
        const bool component = rng.next_double() < 0.5;
        builder.append_continuous(0, rng.normal(component ? 1.5 : -1.5, 1.0));
        builder.append_continuous(1, rng.normal(component ? 1.0 : -1.0, 1.0));

        const double u_sev = rng.next_double();
        std::int32_t severity;
        if (component) {
            severity = u_sev < 0.2 ? 0 : (u_sev < 0.5 ? 1 : 2);
        } else {
            severity = u_sev < 0.5 ? 0 : (u_sev < 0.8 ? 1 : 2);
        }
        builder.append_category(2, severity);

        const double p_smoker = component ? 0.7 : 0.3;
        builder.append_category(3, rng.next_double() < p_smoker ? 1 : 0);

        // target follows the mixture component with a 10% label flip
        const bool flip = rng.next_double() < 0.1;
        builder.append_category(4, (component != flip) ? 1 : 0);
    }
    return std::move(builder).build();
}

} // namespace cvxs
