#include <doctest.h>

#include <cmath>

#include "cvxs/convnet.hpp"
#include "cvxs/error.hpp"
#include "cvxs/trainer.hpp"

using namespace cvxs;

namespace {

Matrix random_neighborhood(std::size_t k, std::size_t f, Rng& rng) {
    Matrix nbh(k, f);
    for (auto& v : nbh.data()) v = rng.next_double();
    return nbh;
}

double relative_error(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
    return std::abs(a - b) / scale;
}

double disc_loss_at(DiscriminatorNet d, const Matrix& batch, const Matrix& labels,
                    std::size_t param, double value) {
    d.params[param] = value;
    GradientTape tape;
    tape.record_disc(d, batch);
    return tape.loss(LossKind::disc, labels);
}

double gen_loss_at(GeneratorNet g, const DiscriminatorNet& d, const Matrix& nbh,
                   const Matrix& outside, const Matrix& labels, std::size_t param,
                   double value) {
    g.params[param] = value;
    GradientTape tape;
    tape.record_generator(g, d, nbh, outside);
    return tape.loss(LossKind::final_mse, labels);
}

} // namespace

TEST_CASE("coefficients: uniform at zero weights and softmax closed form") {
    Rng rng(1);
    auto g = GeneratorNet::init(4, 3, 0.0, rng);
    std::fill(g.params.begin(), g.params.end(), 0.0);
    const auto K = coefficients(g, random_neighborhood(3, 4, rng));
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(K(r, c) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        }
    }

    // k=2 with logits (ln 3, 0): softmax = (0.75, 0.25)
    GeneratorNet g2;
    g2.feature_dim = 1;
    g2.k = 2;
    g2.params = {0.0, 0.0, std::log(3.0), 0.0}; // W zero, bias (ln 3, 0)
    Matrix nbh(2, 1, 0.5);
    const auto K2 = coefficients(g2, nbh);
    CHECK(K2(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(K2(0, 1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("coefficient rows are stochastic for many random draws") {
    Rng rng(2);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t k = 2 + rng.uniform_int(5);
        const std::size_t f = 1 + rng.uniform_int(6);
        const auto g = GeneratorNet::init(f, k, 0.0, rng);
        const auto K = coefficients(g, random_neighborhood(k, f, rng));
        for (std::size_t r = 0; r < k; ++r) {
            double sum = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                CHECK(K(r, c) > 0.0);
                sum += K(r, c);
            }
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("alpha_clip worked examples") {
    Matrix one_hot(1, 3, 0.0);
    one_hot(0, 0) = 1.0;
    const auto clipped = alpha_clip(one_hot, 0.1);
    CHECK(clipped(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(clipped(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(clipped(0, 2) == 0.0);

    Matrix uniform(1, 3, 1.0 / 3.0);
    const auto same = alpha_clip(uniform, 0.0);
    CHECK(same == uniform);

    // ties resolve to the lowest index: max at column 0, min at column 1
    const auto spread = alpha_clip(uniform, 0.3);
    CHECK(spread(0, 0) == doctest::Approx((1.0 / 3.0) * 0.7).epsilon(1e-15));
    CHECK(spread(0, 1) == doctest::Approx(1.0 / 3.0 + 0.1).epsilon(1e-15));
    CHECK(spread(0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("alpha_clip keeps rows stochastic and bounds the maximum") {
    Rng rng(3);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t k = 2 + rng.uniform_int(5);
        const auto g = GeneratorNet::init(3, k, 0.0, rng);
        const auto K = coefficients(g, random_neighborhood(k, 3, rng));
        const double delta = 0.05 + 0.9 * rng.next_double();
        const auto clipped = alpha_clip(K, delta);
        for (std::size_t r = 0; r < k; ++r) {
            double sum = 0.0;
            double row_max = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                CHECK(clipped(r, c) >= 0.0);
                sum += clipped(r, c);
                row_max = std::max(row_max, clipped(r, c));
            }
            CHECK(std::abs(sum - 1.0) < 1e-6);
            CHECK(row_max < 1.0);
        }
    }
}

TEST_CASE("synthesize: column means, hull bound, degenerate neighborhood") {
    Rng rng(4);
    const std::size_t k = 4, f = 3;
    auto g = GeneratorNet::init(f, k, 0.0, rng);
    std::fill(g.params.begin(), g.params.end(), 0.0); // uniform coefficients
    const auto nbh = random_neighborhood(k, f, rng);
    const auto C = synthesize(g, nbh);
    for (std::size_t j = 0; j < f; ++j) {
        double mean = 0.0;
        for (std::size_t r = 0; r < k; ++r) mean += nbh(r, j);
        mean /= static_cast<double>(k);
        for (std::size_t s = 0; s < k; ++s) {
            CHECK(C(s, j) == doctest::Approx(mean).epsilon(1e-12));
        }
    }

    for (int rep = 0; rep < 200; ++rep) {
        const auto gr = GeneratorNet::init(f, k, 0.351, rng);
        const auto neighborhood = random_neighborhood(k, f, rng);
        const auto out = synthesize(gr, neighborhood);
        for (std::size_t j = 0; j < f; ++j) {
            double lo = neighborhood(0, j), hi = neighborhood(0, j);
            for (std::size_t r = 1; r < k; ++r) {
                lo = std::min(lo, neighborhood(r, j));
                hi = std::max(hi, neighborhood(r, j));
            }
            for (std::size_t s = 0; s < k; ++s) {
                CHECK(out(s, j) >= lo);
                CHECK(out(s, j) <= hi);
            }
        }
    }

    // identical neighborhood rows reproduce that row bit-exactly
    Matrix constant(k, f);
    for (std::size_t r = 0; r < k; ++r) {
        constant(r, 0) = 0.1;
        constant(r, 1) = 0.7;
        constant(r, 2) = 0.3;
    }
    const auto g2 = GeneratorNet::init(f, k, 0.351, rng);
    const auto dup = synthesize(g2, constant);
    for (std::size_t s = 0; s < k; ++s) {
        CHECK(dup(s, 0) == 0.1);
        CHECK(dup(s, 1) == 0.7);
        CHECK(dup(s, 2) == 0.3);
    }
}

TEST_CASE("discriminate: zero head gives coin-flip output, rows stochastic") {
    Rng rng(5);
    auto d = DiscriminatorNet::init(6, rng);
    const auto head = d.layer(d.layer_count() - 1);
    for (std::size_t i = 0; i < head.in * head.out; ++i) d.params[head.w_offset + i] = 0;
    for (std::size_t o = 0; o < head.out; ++o) d.params[head.b_offset + o] = 0;

    Matrix batch(5, 6);
    for (auto& v : batch.data()) v = rng.next_double();
    const auto probs = discriminate(d, batch);
    for (std::size_t r = 0; r < probs.rows(); ++r) {
        CHECK(probs(r, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(probs(r, 1) == doctest::Approx(0.5).epsilon(1e-12));
    }

    const auto d2 = DiscriminatorNet::init(6, rng);
    const auto probs2 = discriminate(d2, batch);
    for (std::size_t r = 0; r < probs2.rows(); ++r) {
        CHECK(std::abs(probs2(r, 0) + probs2(r, 1) - 1.0) < 1e-9);
    }

    // permuting rows permutes outputs identically
    std::vector<std::size_t> perm{4, 2, 0, 3, 1};
    const auto permuted = discriminate(d2, batch.gather_rows(perm));
    for (std::size_t r = 0; r < perm.size(); ++r) {
        CHECK(permuted.row(r)[0] == probs2.row(perm[r])[0]);
        CHECK(permuted.row(r)[1] == probs2.row(perm[r])[1]);
    }
}

TEST_CASE("loss_disc closed forms") {
    const auto labels = make_labels(2);
    CHECK(loss_disc(labels, labels) >= 0.0);
    CHECK(loss_disc(labels, labels) <= 1e-11);

    Matrix half(4, 2, 0.5);
    CHECK(loss_disc(half, labels) == doctest::Approx(std::log(2.0)).epsilon(1e-9));

    double previous = 1e9;
    for (double p = 0.1; p < 1.0; p += 0.1) {
        Matrix pred(1, 2);
        pred(0, 0) = p;
        pred(0, 1) = 1.0 - p;
        Matrix label(1, 2);
        label(0, 0) = 1.0;
        const double value = loss_disc(pred, label);
        CHECK(value < previous);
        previous = value;
    }
}

TEST_CASE("loss_gen closed forms and symmetry") {
    const auto labels = make_labels(2);
    CHECK(loss_gen(labels, labels) == 0.0);

    Matrix half(4, 2, 0.5);
    CHECK(loss_gen(half, labels) == doctest::Approx(0.25).epsilon(1e-12));

    Rng rng(6);
    Matrix pred(4, 2);
    for (auto& v : pred.data()) v = rng.next_double();
    std::vector<std::size_t> perm{2, 0, 3, 1};
    CHECK(loss_gen(pred.gather_rows(perm), labels.gather_rows(perm)) ==
          doctest::Approx(loss_gen(pred, labels)).epsilon(1e-15));
}

TEST_CASE("backward matches central finite differences on micro-networks") {
    constexpr double kStep = 1e-5;
    constexpr double kTolerance = 1e-4;
    Rng rng(7);
    for (int net = 0; net < 3; ++net) {
        const std::size_t k = 3, f = 4;
        auto g = GeneratorNet::init(f, k, 0.351, rng);
        auto d = DiscriminatorNet::init(f, rng);
        const auto nbh = random_neighborhood(k, f, rng);
        const auto outside = random_neighborhood(k, f, rng);
        const auto labels = make_labels(k);

        // discriminator path
        Matrix batch(2 * k, f);
        for (std::size_t r = 0; r < k; ++r) {
            const auto src = nbh.row(r);
            std::copy(src.begin(), src.end(), batch.row(r).begin());
            const auto out = outside.row(r);
            std::copy(out.begin(), out.end(), batch.row(k + r).begin());
        }
        GradientTape disc_tape;
        disc_tape.record_disc(d, batch);
        const auto disc_grads = disc_tape.backward(LossKind::disc, labels);
        for (int probe = 0; probe < 150; ++probe) {
            const auto p = rng.uniform_int(d.params.size());
            const double saved = d.params[p];
            const double plus = disc_loss_at(d, batch, labels, p, saved + kStep);
            const double minus = disc_loss_at(d, batch, labels, p, saved - kStep);
            const double fd = (plus - minus) / (2.0 * kStep);
            CHECK(relative_error(disc_grads[p], fd) < kTolerance);
        }

        // generator path through the frozen discriminator
        GradientTape gen_tape;
        gen_tape.record_generator(g, d, nbh, outside);
        const auto gen_grads = gen_tape.backward(LossKind::final_mse, labels);
        for (std::size_t p = 0; p < g.params.size(); ++p) {
            const double saved = g.params[p];
            const double plus = gen_loss_at(g, d, nbh, outside, labels, p, saved + kStep);
            const double minus =
                gen_loss_at(g, d, nbh, outside, labels, p, saved - kStep);
            const double fd = (plus - minus) / (2.0 * kStep);
            CHECK(relative_error(gen_grads[p], fd) < kTolerance);
        }
    }
}

TEST_CASE("backward: zero loss gives zero gradient, gradients scale linearly") {
    Rng rng(8);
    const std::size_t k = 3, f = 4;
    const auto g = GeneratorNet::init(f, k, 0.2, rng);
    const auto d = DiscriminatorNet::init(f, rng);
    const auto nbh = random_neighborhood(k, f, rng);
    const auto outside = random_neighborhood(k, f, rng);

    GradientTape tape;
    tape.record_generator(g, d, nbh, outside);
    // labels equal to the predictions put the MSE at its minimum
    const auto grads_at_zero = tape.backward(LossKind::final_mse, tape.predictions());
    for (const auto v : grads_at_zero) CHECK(v == 0.0);

    const auto labels = make_labels(k);
    const auto grads = tape.backward(LossKind::final_mse, labels);
    // labels2 = 2*labels - P doubles (P - labels) entry-wise
    Matrix labels2(labels.rows(), labels.cols());
    for (std::size_t r = 0; r < labels.rows(); ++r) {
        for (std::size_t c = 0; c < labels.cols(); ++c) {
            labels2(r, c) = 2.0 * labels(r, c) - tape.predictions()(r, c);
        }
    }
    const auto doubled = tape.backward(LossKind::final_mse, labels2);
    for (std::size_t i = 0; i < grads.size(); ++i) {
        CHECK(doubled[i] == doctest::Approx(2.0 * grads[i]).epsilon(1e-9));
    }
}

TEST_CASE("backward on an empty tape reports TapeEmpty") {
    GradientTape tape;
    try {
        tape.backward(LossKind::disc, make_labels(2));
        FAIL("expected TapeEmpty");
    } catch (const Error& e) {
        CHECK(e.code() == "TapeEmpty");
    }

    Rng rng(9);
    const auto d = DiscriminatorNet::init(3, rng);
    Matrix batch(2, 3, 0.5);
    GradientTape disc_only;
    disc_only.record_disc(d, batch);
    try {
        disc_only.backward(LossKind::final_mse, make_labels(1));
        FAIL("expected TapeEmpty");
    } catch (const Error& e) {
        CHECK(e.code() == "TapeEmpty");
    }
}

TEST_CASE("optimizer steps") {
    OptimizerConfig sgd;
    sgd.kind = OptimizerConfig::Kind::sgd;
    sgd.learning_rate = 0.1;
    Optimizer opt(sgd, 1);
    std::vector<double> p{1.0};
    opt.step(p, std::vector<double>{2.0});
    CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-15));
    opt.step(p, std::vector<double>{0.0});
    CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-15));

    OptimizerConfig adam;
    Optimizer aopt(adam, 1);
    std::vector<double> q{5.0};
    aopt.step(q, std::vector<double>{1.0});
    // first bias-corrected step moves by almost exactly the learning rate
    CHECK(q[0] == doctest::Approx(5.0 - adam.learning_rate).epsilon(1e-6));

    Optimizer fresh(adam, 1);
    std::vector<double> r{3.0};
    fresh.step(r, std::vector<double>{0.0});
    CHECK(r[0] == 3.0);
}

TEST_CASE("flat Dirichlet combinations preserve mean and shrink variance") {
    // quick check of the k = 5 case; the acceptance suite runs the full grid
    constexpr std::size_t k = 5;
    constexpr std::size_t draws = 20000;
    const double mu = 2.0, sigma = 1.5;
    Rng rng(10);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        double alpha[k];
        double total = 0.0;
        for (auto& a : alpha) {
            a = -std::log(1.0 - rng.next_double());
            total += a;
        }
        double s = 0.0;
        for (auto& a : alpha) s += (a / total) * rng.normal(mu, sigma);
        sum += s;
        sum_sq += s * s;
    }
    const double mean = sum / draws;
    const double var = sum_sq / draws - mean * mean;
    const double expected_var = 2.0 * sigma * sigma / (k + 1);
    CHECK(std::abs(mean - mu) < 4.0 * std::sqrt(expected_var / draws));
    CHECK(std::abs(var - expected_var) / expected_var < 0.1);
}
