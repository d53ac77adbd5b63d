#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cvxs/convnet.hpp"
#include "cvxs/encode.hpp"
#include "cvxs/neighborhood.hpp"
#include "cvxs/rng.hpp"

namespace cvxs {

struct TrainConfig {
    std::size_t k = 5;
    /// Synthetic points per neighborhood. 0 means "same as k", which is also
    /// the only supported value: the generator emits exactly k rows.
    std::size_t gen = 0;
    std::size_t disc_train_count = 5;
    std::size_t neb_epochs = 10;
    double alpha_clip = 0.351;
    OptimizerConfig optimizer;
    std::uint64_t seed = 42;

    std::size_t effective_gen() const noexcept { return gen == 0 ? k : gen; }
    void validate(std::size_t n_rows) const;
};

struct EpochStats {
    double mean_loss_disc = 0.0;
    double mean_loss_gen = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    std::uint64_t disc_updates = 0;
    std::uint64_t gen_updates = 0;
    /// Wall time is informational only; it is never written into report
    /// files so outputs stay byte-identical across reruns.
    double wall_seconds = 0.0;
};

/// First `gen` rows labeled (1,0) (inside/synthetic), next `gen` rows (0,1)
/// (outside batch).
Matrix make_labels(std::size_t gen);

/// The cooperative training loop. Exposed as a class so the two phases can
/// be driven (and observed) individually; `train` below is the plain
/// entry point.
///
/// One seeded stream drives every random decision in a fixed order (pass
/// shuffle, then per row: neighborhood shuffle, outside sample), which makes
/// runs bit-reproducible and lets a saved stream state resume exactly where
/// it left off.
class Trainer {
public:
    Trainer(const EncodedMatrix& data, const NeighborhoodIndex& index, TrainConfig cfg);

    /// Resume path: all mutable state restored from a bundle.
    Trainer(const EncodedMatrix& data, const NeighborhoodIndex& index, TrainConfig cfg,
            GeneratorNet gen, DiscriminatorNet disc, Optimizer gen_opt,
            Optimizer disc_opt, Rng loop_rng, std::uint64_t epochs_done,
            std::uint64_t disc_updates, std::uint64_t gen_updates);

    /// disc_train_count passes over all rows, updating only the
    /// discriminator. Returns the mean discriminator loss (0 when no pass
    /// runs).
    double disc_phase();

    /// One pass over all rows updating only the generator through the frozen
    /// discriminator. Returns the mean generator loss.
    double gen_phase();

    EpochStats run_epoch();
    void run_epochs(std::size_t count, TrainReport& report, std::ostream* progress);

    const GeneratorNet& generator() const noexcept { return generator_; }
    const DiscriminatorNet& discriminator() const noexcept { return discriminator_; }
    const Optimizer& generator_optimizer() const noexcept { return gen_opt_; }
    const Optimizer& discriminator_optimizer() const noexcept { return disc_opt_; }
    const Rng& loop_rng() const noexcept { return rng_; }
    std::uint64_t epochs_done() const noexcept { return epochs_done_; }
    std::uint64_t disc_updates() const noexcept { return disc_updates_; }
    std::uint64_t gen_updates() const noexcept { return gen_updates_; }

private:
    const EncodedMatrix& data_;
    const NeighborhoodIndex& index_;
    TrainConfig cfg_;
    GeneratorNet generator_;
    DiscriminatorNet discriminator_;
    Optimizer gen_opt_;
    Optimizer disc_opt_;
    Rng rng_;
    Matrix labels_;
    std::uint64_t epochs_done_ = 0;
    std::uint64_t disc_updates_ = 0;
    std::uint64_t gen_updates_ = 0;
};

struct TrainResult {
    GeneratorNet generator;
    DiscriminatorNet discriminator;
    TrainReport report;
    Optimizer gen_opt;
    Optimizer disc_opt;
    Rng::State rng_state{};
    std::uint64_t epochs_done = 0;
};

TrainResult train(const EncodedMatrix& data, const NeighborhoodIndex& index,
                  const TrainConfig& cfg, std::ostream* progress = nullptr);

} // namespace cvxs
