#include "cvxs/synthesizer.hpp"

#include <algorithm>
#include <cmath>

#include "cvxs/error.hpp"

namespace cvxs {

SynthesizerBundle make_bundle(EncodedMatrix data, NeighborhoodIndex index,
                              TrainConfig config, TrainResult result) {
    SynthesizerBundle bundle;
    bundle.data = std::move(data);
    bundle.index = std::move(index);
    bundle.config = config;
    bundle.generator = std::move(result.generator);
    bundle.discriminator = std::move(result.discriminator);
    bundle.gen_opt = std::move(result.gen_opt);
    bundle.disc_opt = std::move(result.disc_opt);
    bundle.rng_state = result.rng_state;
    bundle.epochs_done = result.epochs_done;
    bundle.disc_updates = result.report.disc_updates;
    bundle.gen_updates = result.report.gen_updates;
    return bundle;
}

SyntheticSet generate(SynthesizerBundle& bundle, const GenerateOptions& options) {
    if (options.multiplier <= 0.0) {
        fail("InvalidArgument", "multiplier must be positive");
    }
    const std::size_t n = bundle.data.row_count();
    const std::size_t f = bundle.data.feature_count();
    const std::size_t target_col = bundle.data.schema.target_index();
    const auto total = static_cast<std::size_t>(
        std::ceil(options.multiplier * static_cast<double>(n)));

    Rng rng = Rng::from_state(bundle.rng_state);
    Matrix rows(total, f);
    std::vector<RowProvenance> provenance(total);

    std::size_t emitted = 0;
    for (std::size_t pass = 0; emitted < total; ++pass) {
        const auto anchor_order = rng.permutation(n);
        for (const auto anchor : anchor_order) {
            if (emitted >= total) break;
            Matrix nbh;
            if (options.reshuffle_neighborhoods) {
                nbh = shuffled_neighborhood(bundle.index, bundle.data, anchor, rng);
            } else {
                nbh = bundle.data.values.gather_rows(bundle.index.neighbors[anchor]);
            }
            Matrix batch = snap_feature_types(
                bundle.data, synthesize(bundle.generator, nbh));
            for (std::size_t s = 0; s < batch.rows() && emitted < total; ++s) {
                auto dst = rows.row(emitted);
                const auto src = batch.row(s);
                std::copy(src.begin(), src.end(), dst.begin());
                // synthetic rows inherit the anchor's target label
                dst[target_col] = bundle.data.values(anchor, target_col);
                provenance[emitted] = {anchor, pass};
                ++emitted;
            }
        }
    }
    bundle.rng_state = rng.state();

    SyntheticSet result;
    result.table = decode_with(bundle.data, rows);
    result.provenance = std::move(provenance);
    return result;
}

Table match_target_cardinality(const SyntheticSet& synthetic, const Table& real_train,
                               Rng& rng) {
    const auto& schema = real_train.schema();
    if (!schema.same_structure(synthetic.table.schema())) {
        fail("SchemaParse", "synthetic and real tables have different schemas");
    }
    const auto target = schema.target_index();
    const auto& class_names = schema.features[target].categories;
    const auto real_counts = real_train.target_class_counts();

    std::vector<std::vector<std::size_t>> synth_by_class(class_names.size());
    const auto& synth_classes = synthetic.table.categories(target);
    for (std::size_t r = 0; r < synth_classes.size(); ++r) {
        synth_by_class[static_cast<std::size_t>(synth_classes[r])].push_back(r);
    }

    std::vector<std::size_t> selected;
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        auto& pool = synth_by_class[c];
        if (pool.size() < real_counts[c]) {
            fail("CardinalityUnmatchable",
                 "class '" + class_names[c] + "' has " + std::to_string(pool.size()) +
                     " synthetic rows but needs " + std::to_string(real_counts[c]));
        }
        for (std::size_t i = 0; i < real_counts[c]; ++i) {
            const auto j =
                i + static_cast<std::size_t>(rng.uniform_int(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        selected.insert(selected.end(), pool.begin(),
                        pool.begin() + static_cast<std::ptrdiff_t>(real_counts[c]));
    }
    std::sort(selected.begin(), selected.end());
    return synthetic.table.select_rows(selected);
}

TrainReport resume(SynthesizerBundle& bundle, std::size_t extra_epochs,
                   std::ostream* progress) {
    TrainReport report;
    report.disc_updates = bundle.disc_updates;
    report.gen_updates = bundle.gen_updates;
    if (extra_epochs == 0) return report;

    Trainer trainer(bundle.data, bundle.index, bundle.config, bundle.generator,
                    bundle.discriminator, bundle.gen_opt, bundle.disc_opt,
                    Rng::from_state(bundle.rng_state), bundle.epochs_done,
                    bundle.disc_updates, bundle.gen_updates);
    trainer.run_epochs(extra_epochs, report, progress);

    bundle.generator = trainer.generator();
    bundle.discriminator = trainer.discriminator();
    bundle.gen_opt = trainer.generator_optimizer();
    bundle.disc_opt = trainer.discriminator_optimizer();
    bundle.rng_state = trainer.loop_rng().state();
    bundle.epochs_done = trainer.epochs_done();
    bundle.disc_updates = trainer.disc_updates();
    bundle.gen_updates = trainer.gen_updates();
    return report;
}

} // namespace cvxs
