#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvxs/csv.hpp"
#include "cvxs/error.hpp"
#include "cvxs/pipeline.hpp"

namespace {

using nlohmann::json;

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct FitArgs {
    std::string data_path;
    std::string schema_path;
    std::string out_path;
    std::string report_path;
    std::string embedding_path;
    cvxs::FitOptions options;
    std::string optimizer = "adam";
};

int cmd_fit(const FitArgs& args) {
    FitArgs a = args;
    a.options.config.optimizer.kind = a.optimizer == "sgd"
                                          ? cvxs::OptimizerConfig::Kind::sgd
                                          : cvxs::OptimizerConfig::Kind::adam;
    if (!a.embedding_path.empty()) {
        a.options.embedding.mode = cvxs::EmbeddingSource::Mode::external_file;
        a.options.embedding.path = a.embedding_path;
    }
    const auto schema = cvxs::load_schema(a.schema_path);
    const auto train_table = cvxs::load_csv(a.data_path, schema);

    const cvxs::FitResult result = cvxs::run_fit(train_table, a.options, &std::cerr);
    print_warnings(result.bundle.data.warnings);
    cvxs::save(result.bundle, a.out_path);
    std::cerr << "trained in " << result.report.wall_seconds << " s\n";

    const std::string report = cvxs::train_report_json(result.report);
    std::cout << report;
    if (!a.report_path.empty()) cvxs::write_text_file(a.report_path, report);
    return 0;
}

struct GenerateArgs {
    std::string model_path;
    std::string out_path;
    double multiplier = 5.0;
    bool match_cardinality = false;
    bool fixed_neighborhood_order = false;
};

int cmd_generate(const GenerateArgs& args) {
    cvxs::SynthesizerBundle bundle = cvxs::load(args.model_path);
    for (const auto& note : bundle.migration_notes) std::cerr << "note: " << note << "\n";

    cvxs::GenerateOptions options;
    options.multiplier = args.multiplier;
    options.reshuffle_neighborhoods = !args.fixed_neighborhood_order;
    const cvxs::SyntheticSet synthetic = cvxs::generate(bundle, options);

    if (args.match_cardinality) {
        const cvxs::Table real_train = cvxs::decode(bundle.data);
        cvxs::Rng rng = cvxs::Rng::from_state(bundle.rng_state).fork();
        cvxs::save_csv(cvxs::match_target_cardinality(synthetic, real_train, rng),
                       args.out_path);
    } else {
        cvxs::save_csv(synthetic.table, args.out_path);
    }
    return 0;
}

struct EvaluateArgs {
    std::string real_path;
    std::string holdout_path;
    std::string synthetic_path;
    std::string schema_path;
    std::string report_path;
    std::string mia_grid_path;
    std::string metrics; // comma-separated tokens
    cvxs::EvaluateOptions options;
};

int cmd_evaluate(const EvaluateArgs& args, bool attack_only) {
    EvaluateArgs a = args;
    if (attack_only) {
        a.options.metrics = {"mia", "aia"};
    } else if (!a.metrics.empty()) {
        std::string token;
        for (const char c : a.metrics + ",") {
            if (c == ',') {
                if (!token.empty()) a.options.metrics.insert(token);
                token.clear();
            } else {
                token.push_back(c);
            }
        }
    }
    const auto schema = cvxs::load_schema(a.schema_path);
    const auto real_train = cvxs::load_csv(a.real_path, schema);
    const auto holdout = cvxs::load_csv(a.holdout_path, schema);
    const auto synthetic = cvxs::load_csv(a.synthetic_path, schema);

    const auto result = cvxs::run_evaluate(real_train, synthetic, holdout, a.options);

    const auto basename = [](const std::string& path) {
        const auto pos = path.find_last_of("/\\");
        return pos == std::string::npos ? path : path.substr(pos + 1);
    };
    const std::string report = cvxs::evaluate_report_json(
        result, {{"real", basename(a.real_path)},
                 {"synthetic", basename(a.synthetic_path)},
                 {"holdout", basename(a.holdout_path)},
                 {"seed", std::to_string(a.options.seed)}});
    cvxs::write_text_file(a.report_path, report);
    if (!a.mia_grid_path.empty() && result.privacy.mia) {
        cvxs::write_text_file(a.mia_grid_path, cvxs::mia_grid_csv(*result.privacy.mia));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex space learning synthetic tabular data toolkit"};
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "train a synthesizer on a CSV dataset");
    fit->add_option("--data", fit_args.data_path, "training CSV")->required();
    fit->add_option("--schema", fit_args.schema_path, "schema JSON")->required();
    fit->add_option("--out", fit_args.out_path, "output bundle file")->required();
    fit->add_option("--k", fit_args.options.config.k, "neighborhood size")
        ->default_val(5);
    fit->add_option("--gen", fit_args.options.config.gen,
                    "synthetic rows per neighborhood (0 = k)");
    fit->add_option("--alpha-clip", fit_args.options.config.alpha_clip,
                    "coefficient clipping fraction")
        ->default_val(0.351);
    fit->add_option("--epochs", fit_args.options.config.neb_epochs, "training epochs")
        ->default_val(10);
    fit->add_option("--disc-steps", fit_args.options.config.disc_train_count,
                    "extra discriminator passes per epoch")
        ->default_val(5);
    fit->add_option("--seed", fit_args.options.config.seed, "RNG seed")->default_val(42);
    fit->add_option("--optimizer", fit_args.optimizer, "adam or sgd")
        ->check(CLI::IsMember({"adam", "sgd"}));
    fit->add_option("--lr", fit_args.options.config.optimizer.learning_rate,
                    "learning rate")
        ->default_val(1e-3);
    fit->add_option("--embedding", fit_args.embedding_path,
                    "precomputed embedding CSV (headerless, one row per record)");
    fit->add_option("--weight-continuous",
                    fit_args.options.embedding.continuous_weight,
                    "mixed-distance weight for continuous features");
    fit->add_option("--weight-ordinal", fit_args.options.embedding.ordinal_weight,
                    "mixed-distance weight for ordinal features");
    fit->add_option("--weight-nominal", fit_args.options.embedding.nominal_weight,
                    "mixed-distance weight for nominal features");
    fit->add_option("--train-report", fit_args.report_path,
                    "also write the training report JSON here");

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "sample synthetic rows from a bundle");
    gen->add_option("--model", gen_args.model_path, "bundle file")->required();
    gen->add_option("--out", gen_args.out_path, "output CSV")->required();
    gen->add_option("--multiplier", gen_args.multiplier,
                    "rows to generate as a multiple of the training size")
        ->default_val(5.0);
    gen->add_flag("--match-target-cardinality", gen_args.match_cardinality,
                  "downsample so target class counts equal the training data");
    gen->add_flag("--fixed-neighborhood-order", gen_args.fixed_neighborhood_order,
                  "do not reshuffle neighborhoods between generation passes");

    EvaluateArgs eval_args;
    auto* eval = app.add_subcommand("evaluate", "utility and privacy report");
    eval->add_option("--real", eval_args.real_path, "real training CSV")->required();
    eval->add_option("--holdout", eval_args.holdout_path, "holdout CSV")->required();
    eval->add_option("--synthetic", eval_args.synthetic_path, "synthetic CSV")
        ->required();
    eval->add_option("--schema", eval_args.schema_path, "schema JSON")->required();
    eval->add_option("--report", eval_args.report_path, "output report JSON")
        ->required();
    eval->add_option("--metrics", eval_args.metrics,
                     "comma-separated subset: ttest,kl,propensity,log_cluster,cv,"
                     "holdout,crossclass,ks2d,distance,exact_match,mia,aia");
    eval->add_option("--seed", eval_args.options.seed, "RNG seed")->default_val(42);
    eval->add_option("--mia-grid", eval_args.mia_grid_path,
                     "also write the MIA precision grid as CSV here");

    EvaluateArgs attack_args;
    auto* attack = app.add_subcommand(
        "attack", "membership and attribute inference attacks only");
    attack->add_option("--real", attack_args.real_path, "real training CSV")->required();
    attack->add_option("--holdout", attack_args.holdout_path,
                       "holdout CSV (non-member records)")
        ->required();
    attack->add_option("--synthetic", attack_args.synthetic_path, "synthetic CSV")
        ->required();
    attack->add_option("--schema", attack_args.schema_path, "schema JSON")->required();
    attack->add_option("--report", attack_args.report_path, "output report JSON")
        ->required();
    attack->add_option("--seed", attack_args.options.seed, "RNG seed")->default_val(42);
    attack->add_option("--mia-grid", attack_args.mia_grid_path,
                       "also write the MIA precision grid as CSV here");

    cvxs::DemoOptions demo_options;
    auto* demo = app.add_subcommand("demo", "end-to-end run on the bundled toy data");
    demo->add_option("--seed", demo_options.seed, "RNG seed")->default_val(1);
    demo->add_option("--out", demo_options.out_dir, "output directory")->required();
    demo->add_option("--rows", demo_options.rows, "toy dataset size")->default_val(200);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        json err;
        err["code"] = "UsageError";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    }

    try {
        if (fit->parsed()) return cmd_fit(fit_args);
        if (gen->parsed()) return cmd_generate(gen_args);
        if (eval->parsed()) return cmd_evaluate(eval_args, false);
        if (attack->parsed()) return cmd_evaluate(attack_args, true);
        if (demo->parsed()) {
            std::cout << cvxs::run_demo(demo_options, &std::cerr);
            return 0;
        }
    } catch (const cvxs::Error& e) {
        json err;
        err["code"] = e.code();
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["code"] = "InternalError";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 2;
}
