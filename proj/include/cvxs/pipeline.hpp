#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>

#include "cvxs/dataset_ops.hpp"
#include "cvxs/privacy_metrics.hpp"
#include "cvxs/synthesizer.hpp"
#include "cvxs/utility_metrics.hpp"

namespace cvxs {

// Shared command implementations. The CLI is a thin argument-parsing layer
// over these so tests can drive the exact same flows in-process.

struct FitOptions {
    TrainConfig config;
    EmbeddingSource embedding;
};

struct FitResult {
    SynthesizerBundle bundle;
    TrainReport report;
};

/// encode -> build_index -> train -> bundle.
FitResult run_fit(const Table& train, const FitOptions& options,
                  std::ostream* progress = nullptr);

/// Metric-name tokens accepted by run_evaluate: ttest, kl, propensity,
/// log_cluster, cv, holdout, crossclass, ks2d, distance, exact_match, mia,
/// aia. An empty selection means "everything".
struct EvaluateOptions {
    std::set<std::string> metrics;
    std::uint64_t seed = 42;
    std::size_t folds = 5;
    std::size_t ks2d_permutations = 200;
    double mia_cont_tol = 0.05;
};

struct EvaluateResult {
    UtilityReport utility;
    PrivacyReport privacy;
};

/// Full battery against (real train, synthetic, holdout). The membership
/// inference attacker sees train plus holdout rows, with the train rows as
/// the true members.
EvaluateResult run_evaluate(const Table& real_train, const Table& synth,
                            const Table& holdout, const EvaluateOptions& options);

/// Report JSON. `provenance` fields (free-form label -> value) identify the
/// compared inputs; callers should pass stable labels (file basenames, seeds)
/// so reruns stay byte-identical.
std::string evaluate_report_json(const EvaluateResult& result,
                                 const std::vector<std::pair<std::string, std::string>>&
                                     provenance);

/// MIA grid as CSV: rows = access fractions, columns = thresholds, undefined
/// cells rendered as NA.
std::string mia_grid_csv(const MiaGrid& grid);

std::string train_report_json(const TrainReport& report);

struct DemoOptions {
    std::uint64_t seed = 1;
    std::string out_dir;
    std::size_t rows = 200;
    double train_fraction = 0.7;
    double multiplier = 5.0;
};

/// toy data -> split -> fit -> generate 5x -> match cardinality -> evaluate.
/// Writes every artifact (CSVs, schema, bundle, reports, summary) under
/// out_dir and returns the summary text.
std::string run_demo(const DemoOptions& options, std::ostream* progress = nullptr);

/// Two-table concatenation (same schema), rows of `a` first.
Table concat_tables(const Table& a, const Table& b);

} // namespace cvxs
