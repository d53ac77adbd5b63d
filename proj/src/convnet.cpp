#include "cvxs/convnet.hpp"

#include <algorithm>
#include <cmath>

#include "cvxs/error.hpp"

namespace cvxs {

namespace {

constexpr double kLeakySlope = 0.01;
constexpr double kLogGuard = 1e-12;

double leaky(double z) { return z > 0.0 ? z : kLeakySlope * z; }
double leaky_grad(double z) { return z > 0.0 ? 1.0 : kLeakySlope; }

void softmax_row(std::span<double> row) {
    double hi = row[0];
    for (const double v : row) hi = std::max(hi, v);
    double sum = 0.0;
    for (double& v : row) {
        v = std::exp(v - hi);
        sum += v;
    }
    for (double& v : row) v /= sum;
}

/// dz = P (*) (dP - <dP, P>) per row; the full softmax Jacobian product.
void softmax_backward_row(std::span<const double> probs, std::span<const double> d_probs,
                          std::span<double> d_logits) {
    double dot = 0.0;
    for (std::size_t c = 0; c < probs.size(); ++c) dot += d_probs[c] * probs[c];
    for (std::size_t c = 0; c < probs.size(); ++c) {
        d_logits[c] = probs[c] * (d_probs[c] - dot);
    }
}

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void fill_glorot(std::span<double> w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double a = glorot_bound(fan_in, fan_out);
    for (double& x : w) x = (2.0 * rng.next_double() - 1.0) * a;
}

} // namespace

GeneratorNet GeneratorNet::init(std::size_t feature_dim, std::size_t k,
                                double clip_fraction, Rng& rng) {
    if (clip_fraction < 0.0 || clip_fraction > 1.0) {
        fail("InvalidArgument", "clip fraction must lie in [0, 1]");
    }
    GeneratorNet g;
    g.feature_dim = feature_dim;
    g.k = k;
    g.clip_fraction = clip_fraction;
    g.params.assign(feature_dim * k + k, 0.0);
    fill_glorot(g.weight(), feature_dim, k, rng);
    return g;
}

DiscriminatorNet DiscriminatorNet::init(std::size_t feature_dim, Rng& rng) {
    DiscriminatorNet d;
    d.feature_dim = feature_dim;
    d.layer_sizes = {feature_dim, kHidden[0], kHidden[1], kHidden[2], 2};
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < d.layer_sizes.size(); ++l) {
        total += d.layer_sizes[l] * d.layer_sizes[l + 1] + d.layer_sizes[l + 1];
    }
    d.params.assign(total, 0.0);
    for (std::size_t l = 0; l < d.layer_count(); ++l) {
        const auto view = d.layer(l);
        fill_glorot({d.params.data() + view.w_offset, view.in * view.out}, view.in,
                    view.out, rng);
    }
    return d;
}

DiscriminatorNet::LayerView DiscriminatorNet::layer(std::size_t l) const {
    LayerView view;
    std::size_t offset = 0;
    for (std::size_t i = 0; i <= l; ++i) {
        view.in = layer_sizes[i];
        view.out = layer_sizes[i + 1];
        view.w_offset = offset;
        view.b_offset = offset + view.in * view.out;
        offset = view.b_offset + view.out;
    }
    return view;
}

Matrix coefficients(const GeneratorNet& g, const Matrix& nbh) {
    const std::size_t k = g.k;
    const std::size_t f = g.feature_dim;
    Matrix logits(nbh.rows(), k);
    const auto w = g.weight();
    const auto b = g.bias();
    for (std::size_t r = 0; r < nbh.rows(); ++r) {
        const auto x = nbh.row(r);
        auto out = logits.row(r);
        for (std::size_t j = 0; j < k; ++j) out[j] = b[j];
        for (std::size_t i = 0; i < f; ++i) {
            const double xi = x[i];
            for (std::size_t j = 0; j < k; ++j) out[j] += xi * w[i * k + j];
        }
        softmax_row(out);
    }
    return logits;
}

namespace {

void clip_row(std::span<double> row, double delta, std::size_t& arg_max,
              std::size_t& arg_min) {
    arg_max = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
        if (row[j] > row[arg_max]) arg_max = j;
    }
    arg_min = arg_max == 0 ? 1 : 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j == arg_max) continue;
        if (row[j] < row[arg_min]) arg_min = j;
    }
    const double moved = delta * row[arg_max];
    row[arg_max] -= moved;
    row[arg_min] += moved;
}

} // namespace

Matrix alpha_clip(Matrix coefficient_rows, double delta) {
    if (delta == 0.0) return coefficient_rows;
    if (coefficient_rows.cols() < 2) {
        fail("InvalidArgument", "alpha clipping needs at least two coefficients per row");
    }
    for (std::size_t r = 0; r < coefficient_rows.rows(); ++r) {
        std::size_t arg_max = 0, arg_min = 0;
        clip_row(coefficient_rows.row(r), delta, arg_max, arg_min);
    }
    return coefficient_rows;
}

namespace {

/// C = K * nbh with every coordinate clamped to the neighborhood's
/// per-column [min, max]. The clamp only corrects floating-point rounding of
/// the convex combination; `clamped`, when given, records where it engaged.
Matrix combine_into_hull(const Matrix& coeff, const Matrix& nbh,
                         std::vector<char>* clamped) {
    const std::size_t f = nbh.cols();
    std::vector<double> lo(f), hi(f);
    for (std::size_t j = 0; j < f; ++j) {
        lo[j] = hi[j] = nbh(0, j);
        for (std::size_t r = 1; r < nbh.rows(); ++r) {
            lo[j] = std::min(lo[j], nbh(r, j));
            hi[j] = std::max(hi[j], nbh(r, j));
        }
    }
    Matrix out(coeff.rows(), f, 0.0);
    if (clamped) clamped->assign(coeff.rows() * f, 0);
    for (std::size_t s = 0; s < coeff.rows(); ++s) {
        for (std::size_t r = 0; r < nbh.rows(); ++r) {
            const double w = coeff(s, r);
            const auto src = nbh.row(r);
            for (std::size_t j = 0; j < f; ++j) out(s, j) += w * src[j];
        }
        for (std::size_t j = 0; j < f; ++j) {
            const double v = out(s, j);
            const double c = std::clamp(v, lo[j], hi[j]);
            if (c != v) {
                out(s, j) = c;
                if (clamped) (*clamped)[s * f + j] = 1;
            }
        }
    }
    return out;
}

} // namespace

Matrix synthesize(const GeneratorNet& g, const Matrix& nbh) {
    const Matrix clipped = alpha_clip(coefficients(g, nbh), g.clip_fraction);
    return combine_into_hull(clipped, nbh, nullptr);
}

Matrix discriminate(const DiscriminatorNet& d, const Matrix& batch) {
    Matrix current = batch;
    for (std::size_t l = 0; l < d.layer_count(); ++l) {
        const auto view = d.layer(l);
        Matrix next(current.rows(), view.out);
        for (std::size_t r = 0; r < current.rows(); ++r) {
            const auto x = current.row(r);
            auto out = next.row(r);
            for (std::size_t o = 0; o < view.out; ++o) out[o] = d.params[view.b_offset + o];
            for (std::size_t i = 0; i < view.in; ++i) {
                const double xi = x[i];
                const double* wrow = d.params.data() + view.w_offset + i * view.out;
                for (std::size_t o = 0; o < view.out; ++o) out[o] += xi * wrow[o];
            }
            if (l + 1 < d.layer_count()) {
                for (std::size_t o = 0; o < view.out; ++o) out[o] = leaky(out[o]);
            } else {
                softmax_row(out);
            }
        }
        current = std::move(next);
    }
    return current;
}

double loss_disc(const Matrix& pred, const Matrix& labels) {
    double sum = 0.0;
    for (std::size_t r = 0; r < pred.rows(); ++r) {
        for (std::size_t c = 0; c < pred.cols(); ++c) {
            const double p = std::min(pred(r, c) + kLogGuard, 1.0);
            sum -= labels(r, c) * std::log(p);
        }
    }
    return sum / static_cast<double>(pred.rows());
}

double loss_gen(const Matrix& pred, const Matrix& labels) {
    double sum = 0.0;
    for (std::size_t r = 0; r < pred.rows(); ++r) {
        for (std::size_t c = 0; c < pred.cols(); ++c) {
            const double d = pred(r, c) - labels(r, c);
            sum += d * d;
        }
    }
    return sum / static_cast<double>(pred.rows() * pred.cols());
}

void GradientTape::record_disc(const DiscriminatorNet& d, const Matrix& batch) {
    disc_ = DiscTrace{};
    disc_.net = &d;
    disc_.input = batch;
    Matrix current = batch;
    for (std::size_t l = 0; l < d.layer_count(); ++l) {
        const auto view = d.layer(l);
        Matrix z(current.rows(), view.out);
        for (std::size_t r = 0; r < current.rows(); ++r) {
            const auto x = current.row(r);
            auto out = z.row(r);
            for (std::size_t o = 0; o < view.out; ++o) out[o] = d.params[view.b_offset + o];
            for (std::size_t i = 0; i < view.in; ++i) {
                const double xi = x[i];
                const double* wrow = d.params.data() + view.w_offset + i * view.out;
                for (std::size_t o = 0; o < view.out; ++o) out[o] += xi * wrow[o];
            }
        }
        disc_.pre.push_back(z);
        if (l + 1 < d.layer_count()) {
            for (std::size_t r = 0; r < z.rows(); ++r) {
                auto row = z.row(r);
                for (double& v : row) v = leaky(v);
            }
            disc_.post.push_back(z);
            current = std::move(z);
        } else {
            for (std::size_t r = 0; r < z.rows(); ++r) softmax_row(z.row(r));
            disc_.probs = std::move(z);
        }
    }
    has_disc_ = true;
}

void GradientTape::record_generator(const GeneratorNet& g, const DiscriminatorNet& d,
                                    const Matrix& nbh, const Matrix& outside) {
    gen_ = GenTrace{};
    gen_.net = &g;
    gen_.nbh = nbh;
    gen_.delta = g.clip_fraction;
    gen_.raw = coefficients(g, nbh);
    gen_.clipped = gen_.raw;
    gen_.arg_max.assign(gen_.raw.rows(), 0);
    gen_.arg_min.assign(gen_.raw.rows(), 0);
    if (gen_.delta != 0.0) {
        for (std::size_t r = 0; r < gen_.clipped.rows(); ++r) {
            clip_row(gen_.clipped.row(r), gen_.delta, gen_.arg_max[r], gen_.arg_min[r]);
        }
    }
    gen_.combo = combine_into_hull(gen_.clipped, nbh, &gen_.clamped);
    has_gen_ = true;

    Matrix batch(gen_.combo.rows() + outside.rows(), nbh.cols());
    for (std::size_t r = 0; r < gen_.combo.rows(); ++r) {
        const auto src = gen_.combo.row(r);
        std::copy(src.begin(), src.end(), batch.row(r).begin());
    }
    for (std::size_t r = 0; r < outside.rows(); ++r) {
        const auto src = outside.row(r);
        std::copy(src.begin(), src.end(), batch.row(gen_.combo.rows() + r).begin());
    }
    record_disc(d, batch);
}

const Matrix& GradientTape::predictions() const {
    if (!has_disc_) fail("TapeEmpty", "no forward pass recorded");
    return disc_.probs;
}

const Matrix& GradientTape::synthetic_rows() const {
    if (!has_gen_) fail("TapeEmpty", "no generator forward recorded");
    return gen_.combo;
}

double GradientTape::loss(LossKind kind, const Matrix& labels) const {
    const auto& probs = predictions();
    return kind == LossKind::disc ? loss_disc(probs, labels) : loss_gen(probs, labels);
}

std::vector<double> GradientTape::backward(LossKind kind, const Matrix& labels) const {
    if (!has_disc_) fail("TapeEmpty", "no forward pass recorded");
    if (kind == LossKind::final_mse && !has_gen_) {
        fail("TapeEmpty", "no generator forward recorded");
    }
    const auto& d = *disc_.net;
    const auto& probs = disc_.probs;
    const auto m = static_cast<double>(probs.rows());

    // gradient of the loss in probability space
    Matrix d_probs(probs.rows(), probs.cols());
    for (std::size_t r = 0; r < probs.rows(); ++r) {
        for (std::size_t c = 0; c < probs.cols(); ++c) {
            if (kind == LossKind::disc) {
                const double guarded = probs(r, c) + kLogGuard;
                d_probs(r, c) = guarded < 1.0 ? -labels(r, c) / guarded / m : 0.0;
            } else {
                d_probs(r, c) =
                    (probs(r, c) - labels(r, c)) / (m * static_cast<double>(probs.cols()));
                d_probs(r, c) *= 2.0;
            }
        }
    }

    Matrix dz(probs.rows(), probs.cols());
    for (std::size_t r = 0; r < probs.rows(); ++r) {
        softmax_backward_row(probs.row(r), d_probs.row(r), dz.row(r));
    }

    std::vector<double> disc_grads(kind == LossKind::disc ? d.params.size() : 0, 0.0);
    const bool want_input_grad = kind == LossKind::final_mse;
    Matrix d_input;

    for (std::size_t l = d.layer_count(); l-- > 0;) {
        const auto view = d.layer(l);
        const Matrix& activation_in = l == 0 ? disc_.input : disc_.post[l - 1];
        if (kind == LossKind::disc) {
            for (std::size_t r = 0; r < dz.rows(); ++r) {
                const auto x = activation_in.row(r);
                const auto g = dz.row(r);
                for (std::size_t i = 0; i < view.in; ++i) {
                    double* wg = disc_grads.data() + view.w_offset + i * view.out;
                    const double xi = x[i];
                    for (std::size_t o = 0; o < view.out; ++o) wg[o] += xi * g[o];
                }
                for (std::size_t o = 0; o < view.out; ++o) {
                    disc_grads[view.b_offset + o] += g[o];
                }
            }
        }
        const bool need_below = l > 0 || want_input_grad;
        if (!need_below) break;
        Matrix dx(dz.rows(), view.in, 0.0);
        for (std::size_t r = 0; r < dz.rows(); ++r) {
            const auto g = dz.row(r);
            auto out = dx.row(r);
            for (std::size_t i = 0; i < view.in; ++i) {
                const double* wrow = d.params.data() + view.w_offset + i * view.out;
                double acc = 0.0;
                for (std::size_t o = 0; o < view.out; ++o) acc += wrow[o] * g[o];
                out[i] = acc;
            }
        }
        if (l > 0) {
            const Matrix& z_below = disc_.pre[l - 1];
            for (std::size_t r = 0; r < dx.rows(); ++r) {
                for (std::size_t i = 0; i < view.in; ++i) {
                    dx(r, i) *= leaky_grad(z_below(r, i));
                }
            }
            dz = std::move(dx);
        } else {
            d_input = std::move(dx);
        }
    }

    if (kind == LossKind::disc) return disc_grads;

    // generator side: only the synthetic block of the batch depends on it
    const auto& g = *gen_.net;
    const std::size_t k = g.k;
    const std::size_t f = g.feature_dim;

    Matrix d_combo(k, f);
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t j = 0; j < f; ++j) {
            d_combo(s, j) = gen_.clamped[s * f + j] ? 0.0 : d_input(s, j);
        }
    }

    Matrix d_clipped(k, k, 0.0);
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t r = 0; r < k; ++r) {
            double acc = 0.0;
            const auto src = gen_.nbh.row(r);
            for (std::size_t j = 0; j < f; ++j) acc += d_combo(s, j) * src[j];
            d_clipped(s, r) = acc;
        }
    }

    Matrix d_raw = d_clipped;
    if (gen_.delta != 0.0) {
        for (std::size_t s = 0; s < k; ++s) {
            const auto hi = gen_.arg_max[s];
            const auto lo = gen_.arg_min[s];
            d_raw(s, hi) = d_clipped(s, hi) * (1.0 - gen_.delta) +
                           d_clipped(s, lo) * gen_.delta;
        }
    }

    Matrix d_logits(k, k);
    for (std::size_t s = 0; s < k; ++s) {
        softmax_backward_row(gen_.raw.row(s), d_raw.row(s), d_logits.row(s));
    }

    std::vector<double> gen_grads(g.params.size(), 0.0);
    for (std::size_t r = 0; r < k; ++r) {
        const auto x = gen_.nbh.row(r);
        const auto gl = d_logits.row(r);
        for (std::size_t i = 0; i < f; ++i) {
            double* wg = gen_grads.data() + i * k;
            const double xi = x[i];
            for (std::size_t j = 0; j < k; ++j) wg[j] += xi * gl[j];
        }
        double* bg = gen_grads.data() + f * k;
        for (std::size_t j = 0; j < k; ++j) bg[j] += gl[j];
    }
    return gen_grads;
}

Optimizer::Optimizer(OptimizerConfig config, std::size_t param_count)
    : config_(config) {
    if (config_.kind == OptimizerConfig::Kind::adam) {
        m_.assign(param_count, 0.0);
        v_.assign(param_count, 0.0);
    }
}

void Optimizer::step(std::span<double> params, std::span<const double> grads) {
    ++step_count_;
    if (config_.kind == OptimizerConfig::Kind::sgd) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i] -= config_.learning_rate * grads[i];
        }
        return;
    }
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = b1 * m_[i] + (1.0 - b1) * grads[i];
        v_[i] = b2 * v_[i] + (1.0 - b2) * grads[i] * grads[i];
        const double m_hat = m_[i] / correction1;
        const double v_hat = v_[i] / correction2;
        params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
}

void Optimizer::restore(std::uint64_t step_count, std::vector<double> m,
                        std::vector<double> v) {
    step_count_ = step_count;
    m_ = std::move(m);
    v_ = std::move(v);
}

} // namespace cvxs
