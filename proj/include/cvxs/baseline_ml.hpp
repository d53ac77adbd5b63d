#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvxs/matrix.hpp"

namespace cvxs {

// ---------------------------------------------------------------------------
// logistic regression
// ---------------------------------------------------------------------------

struct LogisticModel {
    std::vector<double> weights; // one per feature, intercept last
    bool converged = false;

    double predict_probability(std::span<const double> x) const;
};

/// Gradient descent on L2-regularized mean log loss with a backtracking step
/// size. Stops when the gradient infinity-norm drops below 1e-6 or after
/// max_iter steps (best iterate returned with converged = false).
LogisticModel logistic_fit(const Matrix& X, const std::vector<double>& y, double l2,
                           std::size_t max_iter);

// ---------------------------------------------------------------------------
// k-means
// ---------------------------------------------------------------------------

struct KMeansModel {
    Matrix centroids; // k x f
    std::vector<std::size_t> labels;
    double inertia = 0.0;

    std::size_t assign(std::span<const double> x) const;
};

/// Lloyd iterations from a k-means++-style seeded init, run to an assignment
/// fixpoint or 300 iterations. Empty clusters are re-seeded with the point
/// farthest from its centroid.
KMeansModel kmeans_fit(const Matrix& X, std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// CART
// ---------------------------------------------------------------------------

enum class TreeKind { classify, regress };

/// Binary tree of axis-aligned splits. Splits are chosen greedily by Gini
/// decrease (classify) or variance reduction (regress); ties go to the lower
/// feature index, then lower threshold. Left branch takes x[feature] <=
/// threshold.
class CartTree {
public:
    struct Node {
        bool leaf = true;
        std::size_t feature = 0;
        double threshold = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
        double value = 0.0;                 // regress mean / boosted leaf value
        std::vector<double> histogram;      // classify: per-class counts
        std::size_t majority = 0;
    };

    std::size_t leaf_for(std::span<const double> x) const;
    double predict_value(std::span<const double> x) const;
    std::size_t predict_class(std::span<const double> x) const;

    std::vector<Node>& nodes() noexcept { return nodes_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

private:
    friend CartTree cart_fit(const Matrix&, const std::vector<double>&, TreeKind,
                             std::size_t, std::size_t);
    std::vector<Node> nodes_;
};

/// kind == classify: y holds class codes in [0, n_classes).
/// kind == regress: y holds targets; n_classes is ignored.
CartTree cart_fit(const Matrix& X, const std::vector<double>& y, TreeKind kind,
                  std::size_t max_depth, std::size_t n_classes = 0);

// ---------------------------------------------------------------------------
// gradient boosting
// ---------------------------------------------------------------------------

/// Logistic boosting on CART regressors fit to negative gradients; binary
/// uses a single score chain, multiclass one-vs-rest chains. Leaf values are
/// Newton steps.
struct GbtModel {
    std::size_t n_classes = 2;
    double learning_rate = 0.1;
    std::vector<double> initial_scores;        // one per chain
    std::vector<std::vector<CartTree>> chains; // binary: 1 chain; ovr: per class

    double score(std::span<const double> x, std::size_t chain) const;
    std::size_t predict_class(std::span<const double> x) const;
};

struct GbtConfig {
    std::size_t n_trees = 100;
    double learning_rate = 0.1;
    std::size_t max_depth = 3;
};

GbtModel gbt_fit(const Matrix& X, const std::vector<std::int32_t>& y,
                 std::size_t n_classes, const GbtConfig& config);

/// Training-set mean log loss of the staged model using the first `n_trees`
/// trees of every chain (monotonicity checks).
double gbt_staged_log_loss(const GbtModel& model, const Matrix& X,
                           const std::vector<std::int32_t>& y, std::size_t n_trees);

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

struct Pca2 {
    std::vector<double> mean;       // column means
    std::vector<double> component1; // unit loading vectors
    std::vector<double> component2;
    double eigenvalue1 = 0.0;
    double eigenvalue2 = 0.0;
    Matrix scores; // n x 2

    void project(std::span<const double> x, double& s1, double& s2) const;
};

/// Top-2 principal components via power iteration with deflation on the
/// column-centered covariance. Sign convention: the largest-magnitude
/// loading of each component is positive.
Pca2 pca2(const Matrix& X);

// ---------------------------------------------------------------------------
// shared scoring helpers
// ---------------------------------------------------------------------------

/// Macro F1 over the classes present in y_true; per-class F1 is 0 when the
/// denominator vanishes.
double macro_f1(const std::vector<std::int32_t>& y_true,
                const std::vector<std::int32_t>& y_pred, std::size_t n_classes);

/// Deterministic stratified fold assignment: per class, seeded shuffle then
/// round-robin deal.
std::vector<std::size_t> stratified_folds(const std::vector<std::int32_t>& y,
                                          std::size_t n_classes, std::size_t folds,
                                          std::uint64_t seed);

} // namespace cvxs
