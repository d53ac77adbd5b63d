#include "cvxs/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cvxs/csv.hpp"
#include "cvxs/error.hpp"

namespace cvxs {

using nlohmann::json;

Table concat_tables(const Table& a, const Table& b) {
    if (!a.schema().same_structure(b.schema())) {
        fail("SchemaParse", "cannot concatenate tables with different schemas");
    }
    std::vector<Column> columns;
    for (std::size_t j = 0; j < a.feature_count(); ++j) {
        if (a.schema().features[j].is_categorical()) {
            auto col = a.categories(j);
            const auto& other = b.categories(j);
            col.insert(col.end(), other.begin(), other.end());
            columns.emplace_back(std::move(col));
        } else {
            auto col = a.continuous(j);
            const auto& other = b.continuous(j);
            col.insert(col.end(), other.begin(), other.end());
            columns.emplace_back(std::move(col));
        }
    }
    return Table(a.schema(), std::move(columns));
}

FitResult run_fit(const Table& train_table, const FitOptions& options,
                  std::ostream* progress) {
    EncodedMatrix data = encode(train_table);
    NeighborhoodIndex index = build_index(data, options.config.k, options.embedding);
    TrainResult result = train(data, index, options.config, progress);
    FitResult fit;
    fit.report = result.report;
    fit.bundle = make_bundle(std::move(data), std::move(index), options.config,
                             std::move(result));
    return fit;
}

namespace {

bool wants(const EvaluateOptions& options, const std::string& token) {
    return options.metrics.empty() || options.metrics.contains(token);
}

json mia_to_json(const MiaGrid& grid) {
    json out;
    out["access_fractions"] = grid.access_fractions;
    out["thresholds"] = grid.thresholds;
    json rows = json::array();
    for (std::size_t fi = 0; fi < grid.access_fractions.size(); ++fi) {
        json row = json::array();
        for (std::size_t ti = 0; ti < grid.thresholds.size(); ++ti) {
            if (grid.defined[fi][ti]) {
                row.push_back(grid.precision[fi][ti]);
            } else {
                row.push_back(nullptr);
            }
        }
        rows.push_back(std::move(row));
    }
    out["precision"] = std::move(rows);
    out["interpretation"] =
        "precision below 0.5 indicates good privacy preservation";
    return out;
}

json per_feature_json(const std::vector<std::pair<std::string, double>>& values) {
    json out;
    for (const auto& [name, value] : values) out[name] = value;
    return out;
}

} // namespace

EvaluateResult run_evaluate(const Table& real_train, const Table& synth,
                            const Table& holdout, const EvaluateOptions& options) {
    EvaluateResult result;
    auto& u = result.utility;
    auto& p = result.privacy;

    if (wants(options, "ttest")) {
        u.ttest_mean_p = ttest_mean_p(real_train, synth, &u.ttest_per_feature);
    }
    if (wants(options, "kl")) {
        u.kl_mean = kl_mean(real_train, synth, &u.kl_per_feature);
    }
    if (wants(options, "propensity")) {
        u.propensity = propensity(real_train, synth);
    }
    if (wants(options, "log_cluster")) {
        u.log_cluster = log_cluster(real_train, synth, 2, options.seed);
    }
    if (wants(options, "cv")) {
        u.cv_abs_diff = cv_abs_diff(real_train, synth, options.folds, options.seed);
    }
    if (wants(options, "holdout")) {
        u.holdout_f1_abs_diff = holdout_f1_abs_diff(real_train, synth, holdout);
    }
    if (wants(options, "crossclass")) {
        u.crossclass_abs_diff =
            crossclass_abs_diff(real_train, synth, holdout, &u.crossclass_per_feature);
    }
    if (wants(options, "ks2d")) {
        u.ks2d = ks2d(real_train, synth, options.ks2d_permutations, options.seed);
    }

    if (wants(options, "distance")) {
        p.distance = distance_trio(real_train, synth);
    }
    if (wants(options, "exact_match")) {
        p.exact_match_pct = exact_match_pct(real_train, synth);
    }
    if (wants(options, "mia")) {
        const Table attacker = concat_tables(real_train, holdout);
        std::vector<bool> membership(attacker.row_count(), false);
        for (std::size_t r = 0; r < real_train.row_count(); ++r) membership[r] = true;
        p.mia = mia(synth, attacker, membership, kMiaDefaultThresholds,
                    kMiaDefaultAccessFractions, options.seed, options.mia_cont_tol);
    }
    if (wants(options, "aia")) {
        p.aia = aia(synth, real_train, options.seed);
    }
    return result;
}

std::string evaluate_report_json(
    const EvaluateResult& result,
    const std::vector<std::pair<std::string, std::string>>& provenance) {
    const auto& u = result.utility;
    const auto& p = result.privacy;
    json doc;
    for (const auto& [key, value] : provenance) doc["provenance"][key] = value;

    json& uj = doc["utility"];
    uj = json::object();
    if (u.ttest_mean_p) {
        uj["ttest_mean_p"] = *u.ttest_mean_p;
        uj["ttest_per_feature"] = per_feature_json(u.ttest_per_feature);
    }
    if (u.kl_mean) {
        uj["kl_mean"] = *u.kl_mean;
        uj["kl_per_feature"] = per_feature_json(u.kl_per_feature);
    }
    if (u.propensity) uj["propensity"] = *u.propensity;
    if (u.log_cluster) uj["log_cluster"] = *u.log_cluster;
    if (u.cv_abs_diff) uj["cv_abs_diff"] = *u.cv_abs_diff;
    if (u.holdout_f1_abs_diff) uj["holdout_f1_abs_diff"] = *u.holdout_f1_abs_diff;
    if (u.crossclass_abs_diff) {
        uj["crossclass_abs_diff"] = *u.crossclass_abs_diff;
        uj["crossclass_per_feature"] = per_feature_json(u.crossclass_per_feature);
    }
    if (u.ks2d) {
        uj["ks2d_stat"] = u.ks2d->stat;
        uj["ks2d_p"] = u.ks2d->p;
    }

    json& pj = doc["privacy"];
    pj = json::object();
    if (p.distance) {
        pj["euclid_mean"] = p.distance->euclid_mean;
        pj["hausdorff"] = p.distance->hausdorff;
        pj["cosine_mean"] = p.distance->cosine_mean;
    }
    if (p.exact_match_pct) pj["exact_match_pct"] = *p.exact_match_pct;
    if (p.mia) pj["mia"] = mia_to_json(*p.mia);
    if (p.aia) {
        json scores = json::array();
        for (const auto& s : *p.aia) {
            json entry;
            entry["feature"] = s.feature;
            entry["metric"] = s.categorical ? "macro_f1" : "rmse";
            entry["value"] = s.value;
            scores.push_back(std::move(entry));
        }
        pj["aia"] = std::move(scores);
    }
    return doc.dump(2) + "\n";
}

std::string mia_grid_csv(const MiaGrid& grid) {
    std::string out = "access_fraction";
    for (const auto t : grid.thresholds) {
        out += ",threshold_" + format_double(t);
    }
    out += "\n";
    for (std::size_t fi = 0; fi < grid.access_fractions.size(); ++fi) {
        out += format_double(grid.access_fractions[fi]);
        for (std::size_t ti = 0; ti < grid.thresholds.size(); ++ti) {
            out += ",";
            out += grid.defined[fi][ti] ? format_double(grid.precision[fi][ti]) : "NA";
        }
        out += "\n";
    }
    return out;
}

std::string train_report_json(const TrainReport& report) {
    // wall time stays out of serialized reports so outputs are reproducible
    json doc;
    doc["disc_updates"] = report.disc_updates;
    doc["gen_updates"] = report.gen_updates;
    json epochs = json::array();
    for (const auto& e : report.epochs) {
        json entry;
        entry["mean_loss_disc"] = e.mean_loss_disc;
        entry["mean_loss_gen"] = e.mean_loss_gen;
        epochs.push_back(std::move(entry));
    }
    doc["epochs"] = std::move(epochs);
    return doc.dump(2) + "\n";
}

std::string run_demo(const DemoOptions& options, std::ostream* progress) {
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);
    const auto path = [&](const std::string& name) {
        return (fs::path(options.out_dir) / name).string();
    };

    const Table toy = toy_dataset(options.rows, options.seed);
    save_csv(toy, path("toy.csv"));
    save_schema(toy.schema(), path("schema.json"));

    const auto [train_table, holdout] = split(toy, options.train_fraction, options.seed);
    save_csv(train_table, path("train.csv"));
    save_csv(holdout, path("holdout.csv"));

    FitOptions fit_options;
    fit_options.config.seed = options.seed;
    SynthesizerBundle bundle = run_fit(train_table, fit_options, progress).bundle;
    save(bundle, path("model.cvxs"));

    GenerateOptions gen_options;
    gen_options.multiplier = options.multiplier;
    const SyntheticSet synthetic = generate(bundle, gen_options);
    save_csv(synthetic.table, path("synthetic_full.csv"));

    Rng match_rng = Rng::from_state(bundle.rng_state).fork();
    const Table matched = match_target_cardinality(synthetic, train_table, match_rng);
    save_csv(matched, path("synthetic.csv"));

    EvaluateOptions eval_options;
    eval_options.seed = options.seed;
    const EvaluateResult result = run_evaluate(train_table, matched, holdout, eval_options);
    write_text_file(
        path("report.json"),
        evaluate_report_json(result,
                             {{"real", "train.csv"},
                              {"synthetic", "synthetic.csv"},
                              {"holdout", "holdout.csv"},
                              {"seed", std::to_string(options.seed)}}));
    write_text_file(path("mia_grid.csv"), mia_grid_csv(*result.privacy.mia));

    std::ostringstream summary;
    const auto line = [&](const std::string& name, double value) {
        summary << name << " " << format_double(value) << "\n";
    };
    summary << "demo seed " << options.seed << " rows " << options.rows << "\n";
    line("ttest_mean_p", *result.utility.ttest_mean_p);
    line("kl_mean", *result.utility.kl_mean);
    line("propensity", *result.utility.propensity);
    line("log_cluster", *result.utility.log_cluster);
    line("cv_abs_diff", *result.utility.cv_abs_diff);
    line("holdout_f1_abs_diff", *result.utility.holdout_f1_abs_diff);
    line("crossclass_abs_diff", *result.utility.crossclass_abs_diff);
    line("ks2d_stat", result.utility.ks2d->stat);
    line("ks2d_p", result.utility.ks2d->p);
    line("euclid_mean", result.privacy.distance->euclid_mean);
    line("hausdorff", result.privacy.distance->hausdorff);
    line("cosine_mean", result.privacy.distance->cosine_mean);
    line("exact_match_pct", *result.privacy.exact_match_pct);
    const std::string text = summary.str();
    write_text_file(path("summary.txt"), text);
    return text;
}

} // namespace cvxs
