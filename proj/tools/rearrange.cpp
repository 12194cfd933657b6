#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rearrange/baselines.hpp"
#include "rearrange/dataset.hpp"
#include "rearrange/gbm.hpp"
#include "rearrange/pipeline.hpp"
#include "rearrange/planner.hpp"
#include "rearrange/snapshot.hpp"

namespace {

using namespace rearrange;

struct EstimatorRow {
    std::string name;
    EvalReport report;
};

void print_benchmark(const std::vector<EstimatorRow>& rows) {
    std::cout << std::left << std::setw(12) << "Estimator" << std::right
              << std::setw(14) << "R2" << std::setw(14) << "RMSE" << std::setw(14)
              << "MAE" << '\n';
    for (const auto& row : rows) {
        std::cout << std::left << std::setw(12) << row.name << std::right
                  << std::setw(14);
        if (row.report.r2_defined)
            std::cout << std::fixed << std::setprecision(4) << row.report.r2;
        else
            std::cout << "undefined";
        std::cout << std::setw(14) << std::fixed << std::setprecision(4)
                  << row.report.rmse << std::setw(14) << row.report.mae << '\n';
    }
}

int cmd_mine(const std::string& repo, const MineOptions& opts, const std::string& out,
             const std::string& manifest, const std::string& ops_dump) {
    MineResult result = mine_repository(repo, opts);
    write_csv(result.dataset, out);
    if (!manifest.empty()) write_commits_manifest(result.commits, manifest);
    if (!ops_dump.empty()) write_ops_dump(result.ops, ops_dump);
    std::cout << "mined " << result.commits.size() << " commits, "
              << result.ops.size() << " refactoring ops, " << result.dataset.rows.size()
              << " effort samples -> " << out << '\n';
    if (result.imputed_rows > 0)
        std::cout << "warning: " << result.imputed_rows
                  << " rows had missing class metrics imputed as zeros\n";
    return 0;
}

int cmd_train(const std::string& dataset_path, const GbmHyperparams& hp,
              double test_fraction, const std::string& model_out) {
    Dataset ds = read_csv(dataset_path);
    auto [train_ds, test_ds] = split(ds, test_fraction, hp.seed);

    const Dataset* valid = nullptr;
    Dataset carved_train, carved_valid;
    if (hp.early_stopping_rounds) {
        // early stopping needs its own validation split, carved from train
        auto [t, v] = split(train_ds, 0.2, hp.seed + 1);
        carved_train = std::move(t);
        carved_valid = std::move(v);
        valid = &carved_valid;
    }
    GbmModel model = fit(valid ? carved_train : train_ds, valid, hp);
    save_model(model, model_out);

    EvalReport rep = evaluate_model(model, test_ds);
    std::cout << "trained on " << train_ds.rows.size() << " rows ("
              << model.trees.size() << " trees), tested on " << test_ds.rows.size()
              << " rows -> " << model_out << '\n';
    print_benchmark({{"GBM", rep}});
    return 0;
}

int cmd_evaluate(const std::string& dataset_path, const std::string& model_file,
                 bool baselines, double test_fraction, unsigned seed,
                 const GpConfig& gp_cfg) {
    Dataset ds = read_csv(dataset_path);
    auto [train_ds, test_ds] = split(ds, test_fraction, seed);
    GbmModel model = load_model(model_file);

    std::vector<double> targets;
    for (const auto& r : test_ds.rows) targets.push_back(r.rtt_hours);

    std::vector<EstimatorRow> rows;
    {
        MeanModel mean = mean_fit(train_ds);
        std::vector<double> preds;
        for (const auto& r : test_ds.rows) preds.push_back(mean_predict(mean, r.features));
        rows.push_back({"Mean", evaluate(preds, targets)});
    }
    rows.push_back({"GBM", evaluate_model(model, test_ds)});
    if (baselines) {
        const size_t cloc_ix = 14;  // position of "cloc" in the standard schema
        std::vector<double> preds;
        for (const auto& r : test_ds.rows) {
            double sloc = std::max(1.0, r.features[cloc_ix]);
            preds.push_back(cocomo_predict(sloc / 1000.0));
        }
        rows.push_back({"COCOMOII", evaluate(preds, targets)});

        GpExpression expr = gp_fit(train_ds, gp_cfg);
        preds.clear();
        for (const auto& r : test_ds.rows) preds.push_back(gp_predict(expr, r.features));
        rows.push_back({"GeneticP", evaluate(preds, targets)});
    }
    print_benchmark(rows);
    if (baselines)
        std::cout << "note: COCOMOII sizes each op by its commit-lines feature in KSLOC;\n"
                     "GeneticP uses the full feature vector. Both are interpretations,\n"
                     "since neither model defines a per-refactoring size.\n";
    return 0;
}

int cmd_predict(const std::string& snapshot_path, const std::string& clusters_path,
                const std::string& model_file, const std::string& format,
                const std::string& out_path) {
    auto snapshot = load_snapshot_from_dir(snapshot_path);
    auto edges = extract_dependencies(snapshot);
    auto features = snapshot_class_features(snapshot, edges);
    auto assignment = read_cluster_assignment(clusters_path);
    GbmModel model = load_model(model_file);

    auto moves = derive_moves(assignment, snapshot);
    RefactoringPlan plan = estimate_plan(moves, features, model);
    std::string doc = render_report(
        plan, format == "csv" ? ReportFormat::Csv : ReportFormat::Text);
    if (out_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(out_path);
        if (!out) throw config_error("cannot write report: " + out_path);
        out << doc;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rearrange: refactoring-effort estimation for remodularisation plans"};
    app.require_subcommand(1);

    // mine
    std::string repo, dataset_out = "dataset.csv", manifest, ops_dump;
    MineOptions mine_opts;
    long max_commits = -1;
    auto* mine = app.add_subcommand("mine", "Mine a git repository into an effort dataset");
    mine->add_option("repo", repo, "path to a local git repository")->required();
    mine->add_option("--branch", mine_opts.branch, "branch or ref to walk");
    mine->add_option("--max-commits", max_commits, "limit on mined commits");
    mine->add_option("--session-gap", mine_opts.tct.session_gap_hours,
                     "hours of inactivity that start a new session");
    mine->add_option("--seed-hours", mine_opts.tct.seed_hours,
                     "hours charged to the first commit of a session");
    mine->add_option("--cap-hours", mine_opts.tct.cap_hours,
                     "upper bound on hours charged to one commit");
    mine->add_option("--threshold", mine_opts.similarity_threshold,
                     "member-signature Jaccard threshold for matching classes");
    double max_target_hours = -1;
    mine->add_option("--max-target-hours", max_target_hours,
                     "drop effort samples above this many hours");
    mine->add_option("--out", dataset_out, "dataset CSV output path");
    mine->add_option("--commits-manifest", manifest, "optional commits manifest path");
    mine->add_option("--ops-dump", ops_dump, "optional detected-ops dump path");

    // train
    std::string train_dataset, model_name = "gbm", model_out = "model.json";
    GbmHyperparams hp;
    double test_fraction = 0.2;
    int early_stopping = -1;
    auto* train = app.add_subcommand("train", "Train an effort model on a dataset CSV");
    train->add_option("dataset", train_dataset, "dataset CSV")->required();
    train->add_option("--model", model_name, "model family")
        ->check(CLI::IsMember({"gbm"}));
    train->add_option("--seed", hp.seed, "random seed");
    train->add_option("--test-fraction", test_fraction, "held-out fraction");
    train->add_option("--trees", hp.n_trees, "boosting rounds");
    train->add_option("--depth", hp.max_depth, "maximum tree depth");
    train->add_option("--rate", hp.learning_rate, "learning rate");
    train->add_option("--min-leaf", hp.min_samples_leaf, "minimum rows per leaf");
    train->add_option("--subsample", hp.subsample, "per-round row subsample ratio");
    train->add_option("--early-stopping", early_stopping,
                      "stop after this many rounds without validation improvement");
    train->add_option("--model-out", model_out, "model file output path");

    // evaluate
    std::string eval_dataset, eval_model_file;
    bool baselines = false;
    double eval_fraction = 0.2;
    unsigned eval_seed = 42;
    GpConfig gp_cfg;
    auto* eval = app.add_subcommand("evaluate",
                                    "Compare estimators on a held-out dataset split");
    eval->add_option("dataset", eval_dataset, "dataset CSV")->required();
    eval->add_option("--model-file", eval_model_file, "trained model file")->required();
    eval->add_flag("--baselines", baselines, "include COCOMOII and GeneticP");
    eval->add_option("--test-fraction", eval_fraction, "held-out fraction");
    eval->add_option("--seed", eval_seed, "split seed (must match training)");
    eval->add_option("--gp-population", gp_cfg.population, "GP population size");
    eval->add_option("--gp-generations", gp_cfg.generations, "GP generations");

    // predict
    std::string snapshot_path, clusters_path, predict_model_file, report_format = "text";
    std::string report_out;
    auto* predict = app.add_subcommand(
        "predict", "Predict the effort of the moves implied by a clustering result");
    predict->add_option("snapshot", snapshot_path, "checked-out source snapshot directory")
        ->required();
    predict->add_option("--clusters", clusters_path, "cluster assignment file")->required();
    predict->add_option("--model-file", predict_model_file, "trained model file")->required();
    predict->add_option("--format", report_format, "report format")
        ->check(CLI::IsMember({"text", "csv"}));
    predict->add_option("--out", report_out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*mine) {
            if (max_commits >= 0) mine_opts.max_commits = max_commits;
            if (max_target_hours >= 0) mine_opts.max_target_hours = max_target_hours;
            return cmd_mine(repo, mine_opts, dataset_out, manifest, ops_dump);
        }
        if (*train) {
            if (early_stopping >= 0) hp.early_stopping_rounds = early_stopping;
            return cmd_train(train_dataset, hp, test_fraction, model_out);
        }
        if (*eval) {
            gp_cfg.seed = eval_seed;
            return cmd_evaluate(eval_dataset, eval_model_file, baselines, eval_fraction,
                                eval_seed, gp_cfg);
        }
        if (*predict)
            return cmd_predict(snapshot_path, clusters_path, predict_model_file,
                               report_format, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
