#include "cvxs/trainer.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "cvxs/csv.hpp"
#include "cvxs/error.hpp"

namespace cvxs {

void TrainConfig::validate(std::size_t n_rows) const {
    if (k < 2) fail("InvalidArgument", "k must be at least 2");
    if (effective_gen() != k) {
        fail("InvalidArgument",
             "gen must equal k: the generator emits one synthetic row per "
             "neighborhood row");
    }
    if (neb_epochs < 1) fail("InvalidArgument", "neb_epochs must be at least 1");
    if (alpha_clip < 0.0 || alpha_clip > 1.0) {
        fail("InvalidArgument", "alpha_clip must lie in [0, 1]");
    }
    if (n_rows <= effective_gen() + k) {
        fail("ComplementTooSmall",
             "need more than gen + k = " + std::to_string(effective_gen() + k) +
                 " rows to sample outside batches, got " + std::to_string(n_rows));
    }
}

Matrix make_labels(std::size_t gen) {
    Matrix labels(2 * gen, 2, 0.0);
    for (std::size_t r = 0; r < gen; ++r) labels(r, 0) = 1.0;
    for (std::size_t r = gen; r < 2 * gen; ++r) labels(r, 1) = 1.0;
    return labels;
}

namespace {

void check_finite(double loss, const char* phase) {
    if (!std::isfinite(loss)) {
        fail("NonFiniteLoss", std::string(phase) + " loss became non-finite; "
                                                   "try a smaller learning rate");
    }
}

} // namespace

Trainer::Trainer(const EncodedMatrix& data, const NeighborhoodIndex& index,
                 TrainConfig cfg)
    : data_(data), index_(index), cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate(data.row_count());
    if (index_.k != cfg_.k) {
        fail("InvalidArgument", "neighborhood index was built with a different k");
    }
    Rng init_rng = rng_.fork();
    generator_ = GeneratorNet::init(data.feature_count(), cfg_.k, cfg_.alpha_clip,
                                    init_rng);
    discriminator_ = DiscriminatorNet::init(data.feature_count(), init_rng);
    gen_opt_ = Optimizer(cfg_.optimizer, generator_.params.size());
    disc_opt_ = Optimizer(cfg_.optimizer, discriminator_.params.size());
    labels_ = make_labels(cfg_.effective_gen());
}

Trainer::Trainer(const EncodedMatrix& data, const NeighborhoodIndex& index,
                 TrainConfig cfg, GeneratorNet gen, DiscriminatorNet disc,
                 Optimizer gen_opt, Optimizer disc_opt, Rng loop_rng,
                 std::uint64_t epochs_done, std::uint64_t disc_updates,
                 std::uint64_t gen_updates)
    : data_(data),
      index_(index),
      cfg_(cfg),
      generator_(std::move(gen)),
      discriminator_(std::move(disc)),
      gen_opt_(std::move(gen_opt)),
      disc_opt_(std::move(disc_opt)),
      rng_(loop_rng),
      epochs_done_(epochs_done),
      disc_updates_(disc_updates),
      gen_updates_(gen_updates) {
    cfg_.validate(data.row_count());
    labels_ = make_labels(cfg_.effective_gen());
}

double Trainer::disc_phase() {
    const std::size_t n = data_.row_count();
    const std::size_t gen_count = cfg_.effective_gen();
    double loss_sum = 0.0;
    std::size_t loss_count = 0;

    for (std::size_t pass = 0; pass < cfg_.disc_train_count; ++pass) {
        const auto order = rng_.permutation(n);
        for (const auto x : order) {
            const Matrix nbh = shuffled_neighborhood(index_, data_, x, rng_);
            const Matrix outside =
                outside_batch(data_, index_.neighbors[x], gen_count, rng_);

            Matrix synthetic = synthesize(generator_, nbh);
            synthetic = snap_feature_types(data_, std::move(synthetic));

            Matrix batch(2 * gen_count, data_.feature_count());
            for (std::size_t r = 0; r < gen_count; ++r) {
                const auto src = synthetic.row(r);
                std::copy(src.begin(), src.end(), batch.row(r).begin());
            }
            for (std::size_t r = 0; r < gen_count; ++r) {
                const auto src = outside.row(r);
                std::copy(src.begin(), src.end(), batch.row(gen_count + r).begin());
            }

            GradientTape tape;
            tape.record_disc(discriminator_, batch);
            const double loss = tape.loss(LossKind::disc, labels_);
            check_finite(loss, "discriminator");
            const auto grads = tape.backward(LossKind::disc, labels_);
            disc_opt_.step(discriminator_.params, grads);
            ++disc_updates_;
            loss_sum += loss;
            ++loss_count;
        }
    }
    return loss_count > 0 ? loss_sum / static_cast<double>(loss_count) : 0.0;
}

double Trainer::gen_phase() {
    const std::size_t n = data_.row_count();
    const std::size_t gen_count = cfg_.effective_gen();
    double loss_sum = 0.0;

    const auto order = rng_.permutation(n);
    for (const auto x : order) {
        const Matrix nbh = shuffled_neighborhood(index_, data_, x, rng_);
        const Matrix outside =
            outside_batch(data_, index_.neighbors[x], gen_count, rng_);

        // no feature-type snapping here: the generator update needs the
        // differentiable chain
        GradientTape tape;
        tape.record_generator(generator_, discriminator_, nbh, outside);
        const double loss = tape.loss(LossKind::final_mse, labels_);
        check_finite(loss, "generator");
        const auto grads = tape.backward(LossKind::final_mse, labels_);
        gen_opt_.step(generator_.params, grads);
        ++gen_updates_;
        loss_sum += loss;
    }
    return n > 0 ? loss_sum / static_cast<double>(n) : 0.0;
}

EpochStats Trainer::run_epoch() {
    EpochStats stats;
    stats.mean_loss_disc = disc_phase();
    stats.mean_loss_gen = gen_phase();
    ++epochs_done_;
    return stats;
}

void Trainer::run_epochs(std::size_t count, TrainReport& report,
                         std::ostream* progress) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t e = 0; e < count; ++e) {
        const auto stats = run_epoch();
        report.epochs.push_back(stats);
        if (progress) {
            (*progress) << "epoch " << epochs_done_ << " mean_L_D "
                        << format_double(stats.mean_loss_disc) << " mean_L_Final "
                        << format_double(stats.mean_loss_gen) << '\n';
        }
    }
    report.disc_updates = disc_updates_;
    report.gen_updates = gen_updates_;
    report.wall_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

TrainResult train(const EncodedMatrix& data, const NeighborhoodIndex& index,
                  const TrainConfig& cfg, std::ostream* progress) {
    Trainer trainer(data, index, cfg);
    TrainResult result;
    trainer.run_epochs(cfg.neb_epochs, result.report, progress);
    result.generator = trainer.generator();
    result.discriminator = trainer.discriminator();
    result.gen_opt = trainer.generator_optimizer();
    result.disc_opt = trainer.discriminator_optimizer();
    result.rng_state = trainer.loop_rng().state();
    result.epochs_done = trainer.epochs_done();
    return result;
}

} // namespace cvxs
