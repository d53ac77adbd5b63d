#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvxs/encode.hpp"
#include "cvxs/neighborhood.hpp"
#include "cvxs/table.hpp"
#include "cvxs/trainer.hpp"

namespace cvxs {

/// Everything needed to keep generating from a trained model: schema and
/// transforms, the encoded training data (generation draws real
/// neighborhoods), the neighborhood index, both networks, optimizer state
/// and the RNG stream position.
///
/// Note the privacy implication: the bundle embeds the training data, so a
/// bundle file is exactly as sensitive as the data it was trained on.
struct SynthesizerBundle {
    static constexpr std::uint16_t kCurrentVersion = 1;

    std::uint16_t version = kCurrentVersion;
    EncodedMatrix data;
    NeighborhoodIndex index;
    TrainConfig config;
    GeneratorNet generator;
    DiscriminatorNet discriminator;
    Optimizer gen_opt;
    Optimizer disc_opt;
    Rng::State rng_state{};
    std::uint64_t epochs_done = 0;
    std::uint64_t disc_updates = 0;
    std::uint64_t gen_updates = 0;
    /// Filled by load() when an older supported format was migrated.
    std::vector<std::string> migration_notes;
};

SynthesizerBundle make_bundle(EncodedMatrix data, NeighborhoodIndex index,
                              TrainConfig config, TrainResult result);

struct RowProvenance {
    std::size_t anchor = 0;
    std::size_t pass = 0;
};

struct SyntheticSet {
    Table table;
    std::vector<RowProvenance> provenance;
};

struct GenerateOptions {
    /// Rows to emit as a multiple of the training size (ceiling applied).
    double multiplier = 5.0;
    /// Reshuffle each neighborhood on every visit (a fixed order otherwise).
    bool reshuffle_neighborhoods = true;
};

/// Walks seeded shuffled passes over the anchors, emitting `gen` snapped and
/// decoded rows per anchor until ceil(multiplier * n) rows exist. Synthetic
/// rows inherit their anchor's target label. Consumes the bundle's RNG
/// stream, so repeated calls continue the sequence.
SyntheticSet generate(SynthesizerBundle& bundle, const GenerateOptions& options);

/// Uniform per-class downsample so synthetic class counts equal the real
/// training counts. Throws Error("CardinalityUnmatchable") naming the first
/// class with too few synthetic rows.
Table match_target_cardinality(const SyntheticSet& synthetic, const Table& real_train,
                               Rng& rng);

/// Bundle file: "CVXS" magic, version u16, sizes, zlib-compressed payload,
/// trailing CRC32 of the compressed bytes. Load verifies the checksum before
/// touching the payload.
void save(const SynthesizerBundle& bundle, const std::string& path);
SynthesizerBundle load(const std::string& path);

std::string bundle_to_bytes(const SynthesizerBundle& bundle);
SynthesizerBundle bundle_from_bytes(const std::string& bytes);

/// Continues training in place with restored optimizer and RNG state;
/// counters accumulate. Returns the report for the extra epochs.
TrainReport resume(SynthesizerBundle& bundle, std::size_t extra_epochs,
                   std::ostream* progress = nullptr);

} // namespace cvxs
