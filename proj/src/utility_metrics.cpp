#include "cvxs/utility_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cvxs/baseline_ml.hpp"
#include "cvxs/encode.hpp"
#include "cvxs/error.hpp"
#include "cvxs/rng.hpp"

namespace cvxs {

namespace {

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double reg_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

std::pair<double, double> mean_and_var(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return {mean, v.size() > 1 ? ss / (n - 1.0) : 0.0};
}

Matrix stack(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() + b.rows(), a.cols());
    std::copy(a.data().begin(), a.data().end(), out.data().begin());
    std::copy(b.data().begin(), b.data().end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(a.data().size()));
    return out;
}

/// Encoded feature block (target column dropped) and target codes.
struct SupervisedView {
    Matrix X;
    std::vector<std::int32_t> y;
    std::size_t n_classes = 0;
};

SupervisedView supervised_view(const EncodedMatrix& m, const Table& t,
                               std::size_t target_col) {
    SupervisedView view;
    const std::size_t f = m.feature_count();
    view.X = Matrix(m.row_count(), f - 1);
    for (std::size_t r = 0; r < m.row_count(); ++r) {
        std::size_t out = 0;
        for (std::size_t j = 0; j < f; ++j) {
            if (j == target_col) continue;
            view.X(r, out++) = m.values(r, j);
        }
    }
    view.y = t.categories(target_col);
    view.n_classes = t.schema().features[target_col].categories.size();
    return view;
}

constexpr GbtConfig kEfficacyGbt{}; // 100 trees, depth 3, lr 0.1 everywhere

} // namespace

double student_t_two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    return reg_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double ttest_mean_p(const Table& real, const Table& synth,
                    std::vector<std::pair<std::string, double>>* per_feature) {
    if (real.row_count() < 2 || synth.row_count() < 2) {
        fail("EmptyTable", "t-test needs at least two rows per table");
    }
    if (!real.schema().same_structure(synth.schema())) {
        fail("SchemaParse", "tables have different schemas");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < real.feature_count(); ++j) {
        const auto& spec = real.schema().features[j];
        if (spec.is_categorical()) continue;
        const auto [m1, v1] = mean_and_var(real.continuous(j));
        const auto [m2, v2] = mean_and_var(synth.continuous(j));
        const double n1 = static_cast<double>(real.row_count());
        const double n2 = static_cast<double>(synth.row_count());
        const double df = n1 + n2 - 2.0;
        const double pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / df;
        double p;
        if (pooled <= 0.0) {
            p = m1 == m2 ? 1.0 : 0.0;
        } else {
            const double se = std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
            p = student_t_two_sided_p((m1 - m2) / se, df);
        }
        if (per_feature) per_feature->emplace_back(spec.name, p);
        sum += p;
        ++count;
    }
    if (count == 0) fail("NoContinuousFeatures", "t-test needs a continuous feature");
    return sum / static_cast<double>(count);
}

double kl_mean(const Table& real, const Table& synth,
               std::vector<std::pair<std::string, double>>* per_feature) {
    if (!real.schema().same_structure(synth.schema())) {
        fail("SchemaParse", "tables have different schemas");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < real.feature_count(); ++j) {
        const auto& spec = real.schema().features[j];
        if (!spec.is_categorical()) continue;
        const auto m = static_cast<std::size_t>(spec.category_count());
        std::vector<double> p(m, 1.0), q(m, 1.0); // add-one smoothing
        for (const auto code : real.categories(j)) p[static_cast<std::size_t>(code)] += 1.0;
        for (const auto code : synth.categories(j)) q[static_cast<std::size_t>(code)] += 1.0;
        const double p_total = static_cast<double>(real.row_count() + m);
        const double q_total = static_cast<double>(synth.row_count() + m);
        double kl = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            const double pc = p[c] / p_total;
            const double qc = q[c] / q_total;
            kl += pc * std::log(pc / qc);
        }
        if (per_feature) per_feature->emplace_back(spec.name, kl);
        sum += kl;
        ++count;
    }
    if (count == 0) fail("NoCategoricalFeatures", "KL needs a categorical feature");
    return sum / static_cast<double>(count);
}

double propensity_of_probs(const std::vector<double>& probs) {
    double sum = 0.0;
    for (const double p : probs) sum += (p - 0.5) * (p - 0.5);
    return probs.empty() ? 0.0 : sum / static_cast<double>(probs.size());
}

double propensity(const Table& real, const Table& synth) {
    const auto encoded = encode_jointly({&real, &synth});
    const Matrix pooled = stack(encoded[0].values, encoded[1].values);
    std::vector<double> labels(pooled.rows(), 0.0);
    for (std::size_t r = 0; r < real.row_count(); ++r) labels[r] = 1.0;

    const auto model = logistic_fit(pooled, labels, 1e-3, 500);
    std::vector<double> probs(pooled.rows());
    for (std::size_t r = 0; r < pooled.rows(); ++r) {
        probs[r] = model.predict_probability(pooled.row(r));
    }
    return propensity_of_probs(probs);
}

double log_cluster(const Table& real, const Table& synth, std::size_t k,
                   std::uint64_t seed) {
    const auto encoded = encode_jointly({&real, &synth});
    const Matrix pooled = stack(encoded[0].values, encoded[1].values);
    const auto model = kmeans_fit(pooled, k, seed);

    const double n_real = static_cast<double>(real.row_count());
    const double c = n_real / static_cast<double>(pooled.rows());
    std::vector<double> real_count(k, 0.0), total_count(k, 0.0);
    for (std::size_t r = 0; r < pooled.rows(); ++r) {
        total_count[model.labels[r]] += 1.0;
        if (r < real.row_count()) real_count[model.labels[r]] += 1.0;
    }
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double prop = total_count[i] > 0.0 ? real_count[i] / total_count[i] : c;
        mean_sq += (prop - c) * (prop - c);
    }
    mean_sq /= static_cast<double>(k);
    return std::log(std::max(mean_sq, 1e-12));
}

namespace {

double cv_mean_f1(const SupervisedView& view, std::size_t folds, std::uint64_t seed) {
    std::vector<std::size_t> class_count(view.n_classes, 0);
    for (const auto c : view.y) class_count[static_cast<std::size_t>(c)]++;
    for (std::size_t c = 0; c < view.n_classes; ++c) {
        if (class_count[c] > 0 && class_count[c] < folds) {
            fail("ClassTooSmall", "a target class has fewer rows than folds");
        }
    }
    const auto fold_of = stratified_folds(view.y, view.n_classes, folds, seed);
    double f1_sum = 0.0;
    for (std::size_t fold = 0; fold < folds; ++fold) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t r = 0; r < view.y.size(); ++r) {
            (fold_of[r] == fold ? test_rows : train_rows).push_back(r);
        }
        const Matrix train_X = view.X.gather_rows(train_rows);
        std::vector<std::int32_t> train_y, test_y;
        for (const auto r : train_rows) train_y.push_back(view.y[r]);
        for (const auto r : test_rows) test_y.push_back(view.y[r]);

        const auto model = gbt_fit(train_X, train_y, view.n_classes, kEfficacyGbt);
        std::vector<std::int32_t> pred;
        pred.reserve(test_rows.size());
        for (const auto r : test_rows) {
            pred.push_back(static_cast<std::int32_t>(model.predict_class(view.X.row(r))));
        }
        f1_sum += macro_f1(test_y, pred, view.n_classes);
    }
    return f1_sum / static_cast<double>(folds);
}

} // namespace

double cv_abs_diff(const Table& real_train, const Table& synth, std::size_t folds,
                   std::uint64_t seed) {
    const auto encoded = encode_jointly({&real_train, &synth});
    const auto target = real_train.schema().target_index();
    const auto real_view = supervised_view(encoded[0], real_train, target);
    const auto synth_view = supervised_view(encoded[1], synth, target);
    return std::abs(cv_mean_f1(real_view, folds, seed) -
                    cv_mean_f1(synth_view, folds, seed));
}

namespace {

double fit_and_score(const SupervisedView& train, const SupervisedView& test) {
    const auto model = gbt_fit(train.X, train.y, train.n_classes, kEfficacyGbt);
    std::vector<std::int32_t> pred;
    pred.reserve(test.y.size());
    for (std::size_t r = 0; r < test.X.rows(); ++r) {
        pred.push_back(static_cast<std::int32_t>(model.predict_class(test.X.row(r))));
    }
    return macro_f1(test.y, pred, train.n_classes);
}

} // namespace

double holdout_f1_abs_diff(const Table& real_train, const Table& synth,
                           const Table& holdout) {
    const auto encoded = encode_jointly({&real_train, &synth, &holdout});
    const auto target = real_train.schema().target_index();

    const auto holdout_counts = holdout.target_class_counts();
    const auto train_counts = real_train.target_class_counts();
    for (std::size_t c = 0; c < train_counts.size(); ++c) {
        if (train_counts[c] > 0 && holdout_counts[c] == 0) {
            fail("TargetClassMissing",
                 "holdout lacks target class '" +
                     real_train.schema().features[target].categories[c] + "'");
        }
    }

    const auto real_view = supervised_view(encoded[0], real_train, target);
    const auto synth_view = supervised_view(encoded[1], synth, target);
    const auto holdout_view = supervised_view(encoded[2], holdout, target);
    return std::abs(fit_and_score(real_view, holdout_view) -
                    fit_and_score(synth_view, holdout_view));
}

double crossclass_abs_diff(const Table& real_train, const Table& synth,
                           const Table& holdout,
                           std::vector<std::pair<std::string, double>>* per_feature) {
    const auto encoded = encode_jointly({&real_train, &synth, &holdout});
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < real_train.feature_count(); ++j) {
        const auto& spec = real_train.schema().features[j];
        if (!spec.is_categorical()) continue;
        const auto real_view = supervised_view(encoded[0], real_train, j);
        const auto synth_view = supervised_view(encoded[1], synth, j);
        const auto holdout_view = supervised_view(encoded[2], holdout, j);
        const double diff = std::abs(fit_and_score(real_view, holdout_view) -
                                     fit_and_score(synth_view, holdout_view));
        if (per_feature) per_feature->emplace_back(spec.name, diff);
        sum += diff;
        ++count;
    }
    if (count == 0) {
        fail("NoCategoricalFeatures", "cross-classification needs a categorical feature");
    }
    return sum / static_cast<double>(count);
}

namespace {

/// Peacock statistic: the largest |F_real - F_synth| over all four quadrant
/// orientations anchored at every sample point.
double peacock_stat(const Matrix& points, const std::vector<char>& is_real,
                    std::size_t n_real, std::size_t n_synth) {
    const std::size_t n = points.rows();
    double stat = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double px = points(a, 0);
        const double py = points(a, 1);
        // quadrant counts: (<=, <=), (<=, >), (>, <=), (>, >)
        double real_q[4] = {0, 0, 0, 0};
        double synth_q[4] = {0, 0, 0, 0};
        for (std::size_t r = 0; r < n; ++r) {
            const int qx = points(r, 0) <= px ? 0 : 1;
            const int qy = points(r, 1) <= py ? 0 : 1;
            (is_real[r] ? real_q : synth_q)[qx * 2 + qy] += 1.0;
        }
        for (int q = 0; q < 4; ++q) {
            const double diff = std::abs(real_q[q] / static_cast<double>(n_real) -
                                         synth_q[q] / static_cast<double>(n_synth));
            stat = std::max(stat, diff);
        }
    }
    return stat;
}

} // namespace

Ks2dResult ks2d(const Table& real, const Table& synth, std::size_t permutations,
                std::uint64_t seed) {
    const auto encoded = encode_jointly({&real, &synth});
    const Matrix pooled = stack(encoded[0].values, encoded[1].values);
    const Matrix points = pca2(pooled).scores;

    const std::size_t n_real = real.row_count();
    const std::size_t n_synth = synth.row_count();
    std::vector<char> is_real(points.rows(), 0);
    for (std::size_t r = 0; r < n_real; ++r) is_real[r] = 1;

    Ks2dResult result;
    result.stat = peacock_stat(points, is_real, n_real, n_synth);

    Rng rng(seed);
    std::size_t at_least = 0;
    std::vector<char> shuffled = is_real;
    for (std::size_t p = 0; p < permutations; ++p) {
        rng.shuffle(shuffled);
        if (peacock_stat(points, shuffled, n_real, n_synth) >= result.stat) {
            ++at_least;
        }
    }
    result.p = static_cast<double>(1 + at_least) / static_cast<double>(1 + permutations);
    return result;
}

} // namespace cvxs
