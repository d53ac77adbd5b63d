#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cvxs/matrix.hpp"
#include "cvxs/rng.hpp"

namespace cvxs {

/// Generator: one shared affine map (f inputs -> k logits) applied to each
/// neighborhood row, followed by a row softmax. Row r of the resulting k x k
/// coefficient matrix holds the convex weights for synthetic sample r.
struct GeneratorNet {
    std::size_t feature_dim = 0;
    std::size_t k = 0;
    double clip_fraction = 0.0; // delta

    /// W (f x k, row-major) followed by b (k).
    std::vector<double> params;

    static GeneratorNet init(std::size_t feature_dim, std::size_t k,
                             double clip_fraction, Rng& rng);

    std::span<double> weight() { return {params.data(), feature_dim * k}; }
    std::span<const double> weight() const { return {params.data(), feature_dim * k}; }
    std::span<double> bias() { return {params.data() + feature_dim * k, k}; }
    std::span<const double> bias() const { return {params.data() + feature_dim * k, k}; }
};

/// Discriminator: dense f -> 250 -> 125 -> 75 -> 2, leaky-ReLU hidden
/// activations, softmax output over the two classes.
struct DiscriminatorNet {
    static constexpr std::array<std::size_t, 3> kHidden = {250, 125, 75};

    std::size_t feature_dim = 0;
    std::vector<std::size_t> layer_sizes; // {f, 250, 125, 75, 2}
    std::vector<double> params;           // W1,b1,W2,b2,... row-major (in x out)

    static DiscriminatorNet init(std::size_t feature_dim, Rng& rng);

    struct LayerView {
        std::size_t w_offset = 0;
        std::size_t b_offset = 0;
        std::size_t in = 0;
        std::size_t out = 0;
    };
    std::size_t layer_count() const noexcept { return layer_sizes.size() - 1; }
    LayerView layer(std::size_t l) const;
};

/// Raw convex coefficients: row r = softmax(W^T nbh_r + b).
Matrix coefficients(const GeneratorNet& g, const Matrix& nbh);

/// Per row: the maximum entry loses fraction `delta` of its value and the
/// minimum entry gains it (ties resolved toward the lower column index; the
/// minimum is searched outside the chosen maximum position). Keeps rows
/// stochastic and, for delta in (0,1), bounds every entry strictly below 1.
Matrix alpha_clip(Matrix coefficient_rows, double delta);

/// Full generator forward: clipped coefficients applied to the neighborhood.
/// Every output coordinate is clamped to the neighborhood's bounding box, so
/// the convex-hull guarantee holds bit-exactly under floating point.
Matrix synthesize(const GeneratorNet& g, const Matrix& nbh);

/// Row-stochastic class probabilities for a batch.
Matrix discriminate(const DiscriminatorNet& d, const Matrix& batch);

/// Mean categorical cross-entropy with a 1e-12 underflow guard.
double loss_disc(const Matrix& pred, const Matrix& labels);

/// Mean squared error over all entries.
double loss_gen(const Matrix& pred, const Matrix& labels);

enum class LossKind { disc, final_mse };

/// Cached forward pass. Records either a discriminator-only forward (for the
/// discriminator update) or the full generator -> frozen-discriminator chain
/// (for the generator update), then produces exact analytic gradients.
class GradientTape {
public:
    GradientTape() = default;

    /// Discriminator forward on a constant batch.
    void record_disc(const DiscriminatorNet& d, const Matrix& batch);

    /// Generator chain (coefficients -> clip -> combine) on `nbh`, then the
    /// discriminator on [synthetic ; outside].
    void record_generator(const GeneratorNet& g, const DiscriminatorNet& d,
                          const Matrix& nbh, const Matrix& outside);

    const Matrix& predictions() const;
    const Matrix& synthetic_rows() const;

    double loss(LossKind kind, const Matrix& labels) const;

    /// LossKind::disc -> gradients for the discriminator parameters.
    /// LossKind::final_mse -> gradients for the generator parameters, with
    /// the discriminator treated as a frozen function.
    std::vector<double> backward(LossKind kind, const Matrix& labels) const;

private:
    struct DiscTrace {
        const DiscriminatorNet* net = nullptr;
        Matrix input;
        std::vector<Matrix> pre;  // z per layer
        std::vector<Matrix> post; // activations per hidden layer
        Matrix probs;
    };
    struct GenTrace {
        const GeneratorNet* net = nullptr;
        Matrix nbh;
        Matrix raw;  // softmax coefficients
        Matrix clipped;
        std::vector<std::size_t> arg_max; // per row
        std::vector<std::size_t> arg_min;
        Matrix combo; // clipped * nbh before the bounding-box clamp
        std::vector<char> clamped;
        double delta = 0.0;
    };

    bool has_disc_ = false;
    bool has_gen_ = false;
    DiscTrace disc_;
    GenTrace gen_;
};

struct OptimizerConfig {
    enum class Kind { sgd, adam };
    Kind kind = Kind::adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// SGD or Adam with bias correction. Moment state is addressed by parameter
/// position, so it serializes alongside the parameter block.
class Optimizer {
public:
    Optimizer() = default;
    Optimizer(OptimizerConfig config, std::size_t param_count);

    void step(std::span<double> params, std::span<const double> grads);

    const OptimizerConfig& config() const noexcept { return config_; }
    std::uint64_t step_count() const noexcept { return step_count_; }
    std::vector<double>& first_moment() noexcept { return m_; }
    std::vector<double>& second_moment() noexcept { return v_; }
    const std::vector<double>& first_moment() const noexcept { return m_; }
    const std::vector<double>& second_moment() const noexcept { return v_; }
    void restore(std::uint64_t step_count, std::vector<double> m, std::vector<double> v);

private:
    OptimizerConfig config_;
    std::uint64_t step_count_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

} // namespace cvxs
