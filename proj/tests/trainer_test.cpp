#include <doctest.h>

#include <cmath>

#include "cvxs/dataset_ops.hpp"
#include "cvxs/error.hpp"
#include "cvxs/trainer.hpp"
#include "support.hpp"

using namespace cvxs;
using cvxs::testing::random_mixed_table;

namespace {

struct Prepared {
    EncodedMatrix data;
    NeighborhoodIndex index;
};

Prepared prepare(const Table& t, std::size_t k) {
    Prepared p;
    p.data = encode(t);
    p.index = build_index(p.data, k, EmbeddingSource{});
    return p;
}

} // namespace

TEST_CASE("make_labels layout") {
    const auto single = make_labels(1);
    CHECK(single.rows() == 2);
    CHECK(single(0, 0) == 1.0);
    CHECK(single(0, 1) == 0.0);
    CHECK(single(1, 0) == 0.0);
    CHECK(single(1, 1) == 1.0);

    const auto triple = make_labels(3);
    CHECK(triple.rows() == 6);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(triple(r, 0) == 1.0);
        CHECK(triple(r + 3, 1) == 1.0);
    }
    double col0 = 0.0, col1 = 0.0;
    for (std::size_t r = 0; r < 6; ++r) {
        col0 += triple(r, 0);
        col1 += triple(r, 1);
    }
    CHECK(col0 == 3.0);
    CHECK(col1 == 3.0);
}

TEST_CASE("update counters follow the loop structure") {
    Rng rng(12);
    const auto t = random_mixed_table(20, 3, rng);
    const auto p = prepare(t, 4);

    TrainConfig cfg;
    cfg.k = 4;
    cfg.neb_epochs = 2;
    cfg.disc_train_count = 5;
    cfg.seed = 3;
    const auto result = train(p.data, p.index, cfg);
    CHECK(result.report.disc_updates == 2 * 5 * 20);
    CHECK(result.report.gen_updates == 2 * 20);
    CHECK(result.report.epochs.size() == 2);
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
    Rng rng(13);
    const auto t = random_mixed_table(24, 2, rng);
    const auto p = prepare(t, 3);

    TrainConfig cfg;
    cfg.k = 3;
    cfg.neb_epochs = 2;
    cfg.seed = 17;
    const auto a = train(p.data, p.index, cfg);
    const auto b = train(p.data, p.index, cfg);
    CHECK(a.generator.params == b.generator.params);
    CHECK(a.discriminator.params == b.discriminator.params);
    CHECK(a.rng_state == b.rng_state);

    cfg.seed = 18;
    const auto c = train(p.data, p.index, cfg);
    CHECK(a.generator.params != c.generator.params);
}

TEST_CASE("each phase freezes the other network") {
    Rng rng(14);
    const auto t = random_mixed_table(20, 2, rng);
    const auto p = prepare(t, 3);

    TrainConfig cfg;
    cfg.k = 3;
    cfg.seed = 5;
    Trainer trainer(p.data, p.index, cfg);

    const auto gen_before = trainer.generator().params;
    const auto disc_before = trainer.discriminator().params;
    trainer.disc_phase();
    CHECK(trainer.generator().params == gen_before);
    CHECK(trainer.discriminator().params != disc_before);

    const auto disc_after_phase = trainer.discriminator().params;
    trainer.gen_phase();
    CHECK(trainer.discriminator().params == disc_after_phase);
    CHECK(trainer.generator().params != gen_before);
}

TEST_CASE("config validation") {
    Rng rng(15);
    const auto t = random_mixed_table(12, 2, rng);
    const auto p = prepare(t, 5);

    TrainConfig cfg;
    cfg.k = 5;
    try {
        // 12 rows cannot host gen + k = 10 plus an anchor's complement
        TrainConfig small = cfg;
        small.k = 6;
        Trainer trainer(p.data, p.index, small);
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK((e.code() == "ComplementTooSmall" || e.code() == "InvalidArgument"));
    }
    try {
        TrainConfig bad = cfg;
        bad.gen = 7; // generator emits exactly k rows
        Trainer trainer(p.data, p.index, bad);
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.code() == "InvalidArgument");
    }
}

TEST_CASE("diverging training reports NonFiniteLoss") {
    Rng rng(16);
    const auto t = random_mixed_table(20, 2, rng);
    const auto p = prepare(t, 3);

    TrainConfig cfg;
    cfg.k = 3;
    cfg.neb_epochs = 3;
    cfg.optimizer.kind = OptimizerConfig::Kind::sgd;
    cfg.optimizer.learning_rate = 1e280; // overflow the parameters on purpose
    try {
        train(p.data, p.index, cfg);
        FAIL("expected NonFiniteLoss");
    } catch (const Error& e) {
        CHECK(e.code() == "NonFiniteLoss");
    }
}

TEST_CASE("generator loss improves over training on the toy data") {
    // 5-seed majority: the epoch-10 mean generator loss must undercut epoch 1
    // in at least 3 of 5 runs, and every loss stays finite
    const auto t = toy_dataset(200, 77);
    const auto p = prepare(t, 5);
    int improved = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        TrainConfig cfg;
        cfg.k = 5;
        cfg.neb_epochs = 10;
        cfg.seed = seed;
        const auto result = train(p.data, p.index, cfg);
        for (const auto& epoch : result.report.epochs) {
            CHECK(std::isfinite(epoch.mean_loss_disc));
            CHECK(std::isfinite(epoch.mean_loss_gen));
        }
        if (result.report.epochs.back().mean_loss_gen <
            result.report.epochs.front().mean_loss_gen) {
            ++improved;
        }
    }
    CHECK(improved >= 3);
}
