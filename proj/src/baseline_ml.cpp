#include "cvxs/baseline_ml.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cvxs/error.hpp"
#include "cvxs/rng.hpp"

namespace cvxs {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

// ---------------------------------------------------------------------------
// logistic regression
// ---------------------------------------------------------------------------

double LogisticModel::predict_probability(std::span<const double> x) const {
    double z = weights.back();
    for (std::size_t i = 0; i < x.size(); ++i) z += weights[i] * x[i];
    return sigmoid(z);
}

namespace {

double logistic_objective(const Matrix& X, const std::vector<double>& y, double l2,
                          const std::vector<double>& w) {
    const std::size_t n = X.rows();
    double loss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const auto x = X.row(r);
        double z = w.back();
        for (std::size_t i = 0; i < x.size(); ++i) z += w[i] * x[i];
        // numerically stable -log-likelihood of a Bernoulli with logit z
        const double soft = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        loss += soft - y[r] * z;
    }
    loss /= static_cast<double>(n);
    double reg = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) reg += w[i] * w[i];
    return loss + l2 * reg;
}

std::vector<double> logistic_gradient(const Matrix& X, const std::vector<double>& y,
                                      double l2, const std::vector<double>& w) {
    const std::size_t n = X.rows();
    std::vector<double> grad(w.size(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto x = X.row(r);
        double z = w.back();
        for (std::size_t i = 0; i < x.size(); ++i) z += w[i] * x[i];
        const double err = sigmoid(z) - y[r];
        for (std::size_t i = 0; i < x.size(); ++i) grad[i] += err * x[i];
        grad.back() += err;
    }
    for (auto& g : grad) g /= static_cast<double>(n);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) grad[i] += 2.0 * l2 * w[i];
    return grad;
}

} // namespace

LogisticModel logistic_fit(const Matrix& X, const std::vector<double>& y, double l2,
                           std::size_t max_iter) {
    if (X.rows() == 0) fail("EmptyTable", "cannot fit a logistic model on no rows");
    LogisticModel model;
    model.weights.assign(X.cols() + 1, 0.0);

    double step = 1.0;
    double objective = logistic_objective(X, y, l2, model.weights);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        const auto grad = logistic_gradient(X, y, l2, model.weights);
        double inf_norm = 0.0;
        for (const auto g : grad) inf_norm = std::max(inf_norm, std::abs(g));
        if (inf_norm < 1e-6) {
            model.converged = true;
            return model;
        }
        // backtracking: halve until the move decreases the objective
        std::vector<double> trial(model.weights.size());
        for (;;) {
            for (std::size_t i = 0; i < trial.size(); ++i) {
                trial[i] = model.weights[i] - step * grad[i];
            }
            const double trial_objective = logistic_objective(X, y, l2, trial);
            if (trial_objective < objective) {
                model.weights = trial;
                objective = trial_objective;
                step *= 1.1;
                break;
            }
            step *= 0.5;
            if (step < 1e-16) return model; // flat to machine precision
        }
    }
    return model;
}

// ---------------------------------------------------------------------------
// k-means
// ---------------------------------------------------------------------------

std::size_t KMeansModel::assign(std::span<const double> x) const {
    std::size_t best = 0;
    double best_d = squared_distance(x, centroids.row(0));
    for (std::size_t c = 1; c < centroids.rows(); ++c) {
        const double d = squared_distance(x, centroids.row(c));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

KMeansModel kmeans_fit(const Matrix& X, std::size_t k, std::uint64_t seed) {
    const std::size_t n = X.rows();
    if (k == 0 || k > n) fail("InvalidArgument", "k-means needs 1 <= k <= n");
    Rng rng(seed);

    KMeansModel model;
    model.centroids = Matrix(k, X.cols());

    // k-means++ seeding
    std::vector<double> d2(n, std::numeric_limits<double>::max());
    std::size_t first = static_cast<std::size_t>(rng.uniform_int(n));
    std::copy(X.row(first).begin(), X.row(first).end(), model.centroids.row(0).begin());
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            d2[r] = std::min(d2[r], squared_distance(X.row(r), model.centroids.row(c - 1)));
            total += d2[r];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double target = rng.next_double() * total;
            for (std::size_t r = 0; r < n; ++r) {
                target -= d2[r];
                if (target <= 0.0) {
                    pick = r;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(rng.uniform_int(n));
        }
        std::copy(X.row(pick).begin(), X.row(pick).end(), model.centroids.row(c).begin());
    }

    model.labels.assign(n, 0);
    for (std::size_t iter = 0; iter < 300; ++iter) {
        bool changed = iter == 0;
        for (std::size_t r = 0; r < n; ++r) {
            const auto best = model.assign(X.row(r));
            if (best != model.labels[r]) {
                model.labels[r] = best;
                changed = true;
            }
        }
        if (!changed) break;

        Matrix sums(k, X.cols(), 0.0);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t r = 0; r < n; ++r) {
            const auto x = X.row(r);
            auto acc = sums.row(model.labels[r]);
            for (std::size_t j = 0; j < x.size(); ++j) acc[j] += x[j];
            counts[model.labels[r]]++;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // re-seed an empty cluster with the worst-fit point
                std::size_t worst = 0;
                double worst_d = -1.0;
                for (std::size_t r = 0; r < n; ++r) {
                    const double d =
                        squared_distance(X.row(r), model.centroids.row(model.labels[r]));
                    if (d > worst_d) {
                        worst_d = d;
                        worst = r;
                    }
                }
                std::copy(X.row(worst).begin(), X.row(worst).end(),
                          model.centroids.row(c).begin());
                model.labels[worst] = c;
                continue;
            }
            auto centroid = model.centroids.row(c);
            const auto acc = sums.row(c);
            for (std::size_t j = 0; j < centroid.size(); ++j) {
                centroid[j] = acc[j] / static_cast<double>(counts[c]);
            }
        }
    }

    model.inertia = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        model.inertia += squared_distance(X.row(r), model.centroids.row(model.labels[r]));
    }
    return model;
}

// ---------------------------------------------------------------------------
// CART
// ---------------------------------------------------------------------------

std::size_t CartTree::leaf_for(std::span<const double> x) const {
    std::size_t node = 0;
    while (!nodes_[node].leaf) {
        node = x[nodes_[node].feature] <= nodes_[node].threshold ? nodes_[node].left
                                                                 : nodes_[node].right;
    }
    return node;
}

double CartTree::predict_value(std::span<const double> x) const {
    return nodes_[leaf_for(x)].value;
}

std::size_t CartTree::predict_class(std::span<const double> x) const {
    return nodes_[leaf_for(x)].majority;
}

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

double gini_impurity(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double sum_sq = 0.0;
    for (const double c : counts) sum_sq += c * c;
    return 1.0 - sum_sq / (total * total);
}

struct NodeStats {
    // classify
    std::vector<double> counts;
    // regress
    double sum = 0.0;
    double sum_sq = 0.0;
    double n = 0.0;
};

} // namespace

CartTree cart_fit(const Matrix& X, const std::vector<double>& y, TreeKind kind,
                  std::size_t max_depth, std::size_t n_classes) {
    if (X.rows() == 0) fail("EmptyTable", "cannot fit a tree on no rows");
    if (kind == TreeKind::classify && n_classes == 0) {
        fail("InvalidArgument", "classification tree needs n_classes");
    }

    CartTree tree;
    std::vector<std::size_t> all_rows(X.rows());
    std::iota(all_rows.begin(), all_rows.end(), 0);

    struct Pending {
        std::size_t node;
        std::vector<std::size_t> rows;
        std::size_t depth;
    };

    const auto make_leaf = [&](CartTree::Node& node, const std::vector<std::size_t>& rows) {
        node.leaf = true;
        if (kind == TreeKind::classify) {
            node.histogram.assign(n_classes, 0.0);
            for (const auto r : rows) {
                node.histogram[static_cast<std::size_t>(y[r])] += 1.0;
            }
            node.majority = 0;
            for (std::size_t c = 1; c < n_classes; ++c) {
                if (node.histogram[c] > node.histogram[node.majority]) node.majority = c;
            }
            node.value = static_cast<double>(node.majority);
        } else {
            double sum = 0.0;
            for (const auto r : rows) sum += y[r];
            node.value = sum / static_cast<double>(rows.size());
        }
    };

    const auto best_split = [&](const std::vector<std::size_t>& rows) {
        SplitChoice choice;
        const double total = static_cast<double>(rows.size());

        NodeStats parent;
        if (kind == TreeKind::classify) {
            parent.counts.assign(n_classes, 0.0);
            for (const auto r : rows) parent.counts[static_cast<std::size_t>(y[r])] += 1.0;
        } else {
            for (const auto r : rows) {
                parent.sum += y[r];
                parent.sum_sq += y[r] * y[r];
            }
        }
        const double parent_impurity =
            kind == TreeKind::classify
                ? gini_impurity(parent.counts, total)
                : parent.sum_sq / total - (parent.sum / total) * (parent.sum / total);

        std::vector<std::pair<double, double>> ordered(rows.size()); // (x, y)
        for (std::size_t j = 0; j < X.cols(); ++j) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                ordered[i] = {X(rows[i], j), y[rows[i]]};
            }
            std::sort(ordered.begin(), ordered.end());
            if (ordered.front().first == ordered.back().first) continue;

            NodeStats left;
            if (kind == TreeKind::classify) left.counts.assign(n_classes, 0.0);
            for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
                if (kind == TreeKind::classify) {
                    left.counts[static_cast<std::size_t>(ordered[i].second)] += 1.0;
                } else {
                    left.sum += ordered[i].second;
                    left.sum_sq += ordered[i].second * ordered[i].second;
                }
                if (ordered[i].first == ordered[i + 1].first) continue;

                const double n_left = static_cast<double>(i + 1);
                const double n_right = total - n_left;
                double weighted;
                if (kind == TreeKind::classify) {
                    std::vector<double> right_counts(n_classes);
                    for (std::size_t c = 0; c < n_classes; ++c) {
                        right_counts[c] = parent.counts[c] - left.counts[c];
                    }
                    weighted = (n_left * gini_impurity(left.counts, n_left) +
                                n_right * gini_impurity(right_counts, n_right)) /
                               total;
                } else {
                    const double right_sum = parent.sum - left.sum;
                    const double right_sq = parent.sum_sq - left.sum_sq;
                    const double var_left =
                        left.sum_sq / n_left - (left.sum / n_left) * (left.sum / n_left);
                    const double var_right = right_sq / n_right -
                                             (right_sum / n_right) * (right_sum / n_right);
                    weighted = (n_left * var_left + n_right * var_right) / total;
                }
                const double gain = parent_impurity - weighted;
                // strict improvement keeps the first (lowest feature, lowest
                // threshold) among ties
                if (gain > choice.gain + 1e-15 && gain > 1e-12) {
                    choice.found = true;
                    choice.feature = j;
                    choice.threshold =
                        ordered[i].first + 0.5 * (ordered[i + 1].first - ordered[i].first);
                    choice.gain = gain;
                }
            }
        }
        return choice;
    };

    tree.nodes_.emplace_back();
    std::vector<Pending> stack{{0, std::move(all_rows), 0}};
    while (!stack.empty()) {
        Pending item = std::move(stack.back());
        stack.pop_back();
        auto& node = tree.nodes_[item.node];

        bool pure = true;
        for (std::size_t i = 1; i < item.rows.size(); ++i) {
            if (y[item.rows[i]] != y[item.rows[0]]) {
                pure = false;
                break;
            }
        }
        if (pure || item.depth >= max_depth || item.rows.size() < 2) {
            make_leaf(node, item.rows);
            continue;
        }
        const auto choice = best_split(item.rows);
        if (!choice.found) {
            make_leaf(node, item.rows);
            continue;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (const auto r : item.rows) {
            (X(r, choice.feature) <= choice.threshold ? left_rows : right_rows)
                .push_back(r);
        }
        node.leaf = false;
        node.feature = choice.feature;
        node.threshold = choice.threshold;
        node.left = tree.nodes_.size();
        node.right = tree.nodes_.size() + 1;
        tree.nodes_.emplace_back();
        tree.nodes_.emplace_back();
        const auto left_id = tree.nodes_[item.node].left;
        const auto right_id = tree.nodes_[item.node].right;
        stack.push_back({right_id, std::move(right_rows), item.depth + 1});
        stack.push_back({left_id, std::move(left_rows), item.depth + 1});
    }
    return tree;
}

// ---------------------------------------------------------------------------
// gradient boosting
// ---------------------------------------------------------------------------

double GbtModel::score(std::span<const double> x, std::size_t chain) const {
    double s = initial_scores[chain];
    for (const auto& tree : chains[chain]) {
        s += learning_rate * tree.predict_value(x);
    }
    return s;
}

std::size_t GbtModel::predict_class(std::span<const double> x) const {
    if (chains.size() == 1) return score(x, 0) > 0.0 ? 1 : 0;
    std::size_t best = 0;
    double best_score = score(x, 0);
    for (std::size_t c = 1; c < chains.size(); ++c) {
        const double s = score(x, c);
        if (s > best_score) {
            best_score = s;
            best = c;
        }
    }
    return best;
}

namespace {

double prior_logit(double positives, double total) {
    const double p = std::clamp(positives / total, 1e-6, 1.0 - 1e-6);
    return std::log(p / (1.0 - p));
}

std::vector<CartTree> boost_binary_chain(const Matrix& X, const std::vector<char>& is_pos,
                                         double initial_score, const GbtConfig& config) {
    const std::size_t n = X.rows();
    std::vector<double> scores(n, initial_score);
    std::vector<double> residuals(n);
    std::vector<CartTree> chain;
    chain.reserve(config.n_trees);

    for (std::size_t t = 0; t < config.n_trees; ++t) {
        for (std::size_t r = 0; r < n; ++r) {
            residuals[r] = (is_pos[r] ? 1.0 : 0.0) - sigmoid(scores[r]);
        }
        CartTree tree = cart_fit(X, residuals, TreeKind::regress, config.max_depth);

        // Newton leaf values: sum(residual) / sum(p(1-p)) per leaf
        std::vector<double> num(tree.nodes().size(), 0.0);
        std::vector<double> den(tree.nodes().size(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const auto leaf = tree.leaf_for(X.row(r));
            const double p = sigmoid(scores[r]);
            num[leaf] += residuals[r];
            den[leaf] += p * (1.0 - p);
        }
        for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
            if (!tree.nodes()[i].leaf) continue;
            const double v = den[i] > 1e-12 ? num[i] / den[i] : 0.0;
            tree.nodes()[i].value = std::clamp(v, -20.0, 20.0);
        }
        for (std::size_t r = 0; r < n; ++r) {
            scores[r] += config.learning_rate * tree.predict_value(X.row(r));
        }
        chain.push_back(std::move(tree));
    }
    return chain;
}

} // namespace

GbtModel gbt_fit(const Matrix& X, const std::vector<std::int32_t>& y,
                 std::size_t n_classes, const GbtConfig& config) {
    if (X.rows() == 0) fail("EmptyTable", "cannot fit a GBT model on no rows");
    if (n_classes < 2) fail("InvalidArgument", "GBT needs at least two classes");

    GbtModel model;
    model.n_classes = n_classes;
    model.learning_rate = config.learning_rate;

    const double total = static_cast<double>(y.size());
    const std::size_t n_chains = n_classes == 2 ? 1 : n_classes;
    for (std::size_t chain = 0; chain < n_chains; ++chain) {
        const auto positive_class =
            n_classes == 2 ? 1 : static_cast<std::int32_t>(chain);
        std::vector<char> is_pos(y.size());
        double positives = 0.0;
        for (std::size_t r = 0; r < y.size(); ++r) {
            is_pos[r] = y[r] == positive_class;
            positives += is_pos[r] ? 1.0 : 0.0;
        }
        const double f0 = prior_logit(positives, total);
        model.initial_scores.push_back(f0);
        model.chains.push_back(boost_binary_chain(X, is_pos, f0, config));
    }
    return model;
}

double gbt_staged_log_loss(const GbtModel& model, const Matrix& X,
                           const std::vector<std::int32_t>& y, std::size_t n_trees) {
    double loss = 0.0;
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const auto x = X.row(r);
        if (model.chains.size() == 1) {
            double s = model.initial_scores[0];
            for (std::size_t t = 0; t < n_trees; ++t) {
                s += model.learning_rate * model.chains[0][t].predict_value(x);
            }
            const double p = std::clamp(sigmoid(s), 1e-12, 1.0 - 1e-12);
            loss -= y[r] == 1 ? std::log(p) : std::log(1.0 - p);
        } else {
            // one-vs-rest: softmax over chain scores
            std::vector<double> s(model.chains.size());
            for (std::size_t c = 0; c < model.chains.size(); ++c) {
                s[c] = model.initial_scores[c];
                for (std::size_t t = 0; t < n_trees; ++t) {
                    s[c] += model.learning_rate * model.chains[c][t].predict_value(x);
                }
            }
            const double hi = *std::max_element(s.begin(), s.end());
            double denom = 0.0;
            for (const double v : s) denom += std::exp(v - hi);
            const double p = std::exp(s[static_cast<std::size_t>(y[r])] - hi) / denom;
            loss -= std::log(std::max(p, 1e-12));
        }
    }
    return loss / static_cast<double>(X.rows());
}

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

void Pca2::project(std::span<const double> x, double& s1, double& s2) const {
    s1 = 0.0;
    s2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double centered = x[j] - mean[j];
        s1 += centered * component1[j];
        s2 += centered * component2[j];
    }
}

namespace {

/// Leading eigenpair of a symmetric nonnegative-definite matrix by power
/// iteration; returns eigenvalue (0 for the zero matrix, with a
/// deterministic unit vector).
double power_iteration(const Matrix& C, std::vector<double>& v) {
    const std::size_t f = C.rows();
    v.assign(f, 1.0 / std::sqrt(static_cast<double>(f)));
    std::vector<double> next(f);
    double eigenvalue = 0.0;
    for (std::size_t iter = 0; iter < 10000; ++iter) {
        for (std::size_t i = 0; i < f; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < f; ++j) acc += C(i, j) * v[j];
            next[i] = acc;
        }
        double norm = 0.0;
        for (const double x : next) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-300) {
            eigenvalue = 0.0;
            break;
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < f; ++i) {
            next[i] /= norm;
            delta = std::max(delta, std::abs(next[i] - v[i]));
        }
        v = next;
        eigenvalue = norm;
        if (delta < 1e-15) break;
    }
    // fix the sign: largest-magnitude loading positive
    std::size_t arg = 0;
    for (std::size_t i = 1; i < f; ++i) {
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    }
    if (v[arg] < 0.0) {
        for (auto& x : v) x = -x;
    }
    return eigenvalue;
}

} // namespace

Pca2 pca2(const Matrix& X) {
    const std::size_t n = X.rows();
    const std::size_t f = X.cols();
    if (n < 2) fail("EmptyTable", "PCA needs at least two rows");

    Pca2 result;
    result.mean.assign(f, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = X.row(r);
        for (std::size_t j = 0; j < f; ++j) result.mean[j] += row[j];
    }
    for (auto& m : result.mean) m /= static_cast<double>(n);

    Matrix cov(f, f, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = X.row(r);
        for (std::size_t i = 0; i < f; ++i) {
            const double ci = row[i] - result.mean[i];
            for (std::size_t j = i; j < f; ++j) {
                cov(i, j) += ci * (row[j] - result.mean[j]);
            }
        }
    }
    for (std::size_t i = 0; i < f; ++i) {
        for (std::size_t j = i; j < f; ++j) {
            cov(i, j) /= static_cast<double>(n - 1);
            cov(j, i) = cov(i, j);
        }
    }

    result.eigenvalue1 = power_iteration(cov, result.component1);
    Matrix deflated = cov;
    for (std::size_t i = 0; i < f; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            deflated(i, j) -=
                result.eigenvalue1 * result.component1[i] * result.component1[j];
        }
    }
    result.eigenvalue2 = power_iteration(deflated, result.component2);
    if (result.eigenvalue2 <= 0.0) {
        // degenerate spectrum: pick a deterministic unit vector orthogonal to
        // the first component
        std::size_t pivot = 0;
        for (std::size_t i = 1; i < f; ++i) {
            if (std::abs(result.component1[i]) < std::abs(result.component1[pivot])) {
                pivot = i;
            }
        }
        std::vector<double> e(f, 0.0);
        e[pivot] = 1.0;
        double dot = 0.0;
        for (std::size_t i = 0; i < f; ++i) dot += e[i] * result.component1[i];
        double norm = 0.0;
        for (std::size_t i = 0; i < f; ++i) {
            e[i] -= dot * result.component1[i];
            norm += e[i] * e[i];
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (auto& x : e) x /= norm;
        }
        result.component2 = e;
        result.eigenvalue2 = 0.0;
    }

    result.scores = Matrix(n, 2);
    for (std::size_t r = 0; r < n; ++r) {
        result.project(X.row(r), result.scores(r, 0), result.scores(r, 1));
    }
    return result;
}

// ---------------------------------------------------------------------------
// scoring helpers
// ---------------------------------------------------------------------------

double macro_f1(const std::vector<std::int32_t>& y_true,
                const std::vector<std::int32_t>& y_pred, std::size_t n_classes) {
    std::vector<double> tp(n_classes, 0.0), fp(n_classes, 0.0), fn(n_classes, 0.0);
    std::vector<char> present(n_classes, 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const auto t = static_cast<std::size_t>(y_true[i]);
        const auto p = static_cast<std::size_t>(y_pred[i]);
        present[t] = 1;
        if (t == p) {
            tp[t] += 1.0;
        } else {
            fn[t] += 1.0;
            fp[p] += 1.0;
        }
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (!present[c]) continue;
        const double denom = 2.0 * tp[c] + fp[c] + fn[c];
        sum += denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
        ++count;
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

std::vector<std::size_t> stratified_folds(const std::vector<std::int32_t>& y,
                                          std::size_t n_classes, std::size_t folds,
                                          std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> fold_of(y.size(), 0);
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (static_cast<std::size_t>(y[i]) == c) rows.push_back(i);
        }
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            fold_of[rows[i]] = i % folds;
        }
    }
    return fold_of;
}

} // namespace cvxs
