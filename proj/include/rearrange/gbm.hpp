#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rearrange/dataset.hpp"
#include "rearrange/errors.hpp"

namespace rearrange {

struct GbmHyperparams {
    int n_trees = 300;
    int max_depth = 4;
    double learning_rate = 0.05;
    int min_samples_leaf = 5;
    double subsample = 0.8;
    unsigned seed = 42;
    std::optional<int> early_stopping_rounds;
};

struct TreeNode {
    bool is_leaf = true;
    int feature_index = -1;
    double threshold = 0;
    int left = -1;
    int right = -1;
    double value = 0;  // leaf residual, in hours
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(const FeatureVector& x) const {
        int i = 0;
        while (!nodes[i].is_leaf)
            i = x[nodes[i].feature_index] <= nodes[i].threshold ? nodes[i].left
                                                                : nodes[i].right;
        return nodes[i].value;
    }
};

struct GbmModel {
    double base_prediction = 0;
    std::vector<RegressionTree> trees;
    FeatureSchema schema;
    GbmHyperparams hyperparams;
};

struct EvalReport {
    double r2 = 0;
    double rmse = 0;
    double mae = 0;
    size_t n = 0;
    bool r2_defined = true;  // false when targets are constant and rmse > 0
};

namespace gbmdetail {

struct TreeBuilder {
    const std::vector<FeatureVector>& x;
    const std::vector<double>& residuals;
    int max_depth;
    int min_leaf;
    RegressionTree tree;

    int build(std::vector<size_t>& rows, int depth) {
        double sum = 0;
        for (size_t r : rows) sum += residuals[r];
        const double n = static_cast<double>(rows.size());
        const double node_mean = sum / n;

        int best_feature = -1;
        double best_threshold = 0, best_gain = 1e-12;
        if (depth < max_depth && rows.size() >= 2 * static_cast<size_t>(min_leaf)) {
            const size_t n_features = x[rows[0]].size();
            double parent_score = sum * sum / n;
            std::vector<std::pair<double, size_t>> sorted;
            for (size_t f = 0; f < n_features; ++f) {
                sorted.clear();
                for (size_t r : rows) sorted.emplace_back(x[r][f], r);
                std::sort(sorted.begin(), sorted.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                double left_sum = 0;
                for (size_t i = 0; i + 1 < sorted.size(); ++i) {
                    left_sum += residuals[sorted[i].second];
                    if (sorted[i].first == sorted[i + 1].first) continue;
                    const size_t nl = i + 1, nr = sorted.size() - nl;
                    if (nl < static_cast<size_t>(min_leaf) ||
                        nr < static_cast<size_t>(min_leaf))
                        continue;
                    const double right_sum = sum - left_sum;
                    const double score = left_sum * left_sum / static_cast<double>(nl) +
                                         right_sum * right_sum / static_cast<double>(nr);
                    const double gain = score - parent_score;
                    // strict > keeps the lowest feature index / lowest threshold
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = static_cast<int>(f);
                        best_threshold = (sorted[i].first + sorted[i + 1].first) / 2.0;
                    }
                }
            }
        }

        const int my_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (best_feature < 0) {
            tree.nodes[my_index].is_leaf = true;
            tree.nodes[my_index].value = node_mean;
            return my_index;
        }
        std::vector<size_t> left_rows, right_rows;
        for (size_t r : rows)
            (x[r][best_feature] <= best_threshold ? left_rows : right_rows).push_back(r);
        int l = build(left_rows, depth + 1);
        int r = build(right_rows, depth + 1);
        tree.nodes[my_index].is_leaf = false;
        tree.nodes[my_index].feature_index = best_feature;
        tree.nodes[my_index].threshold = best_threshold;
        tree.nodes[my_index].left = l;
        tree.nodes[my_index].right = r;
        return my_index;
    }
};

} // namespace gbmdetail

inline double predict(const GbmModel& model, const FeatureVector& x) {
    if (x.size() != model.schema.size())
        throw contract_error("predict: feature arity does not match model schema");
    double acc = 0;
    for (const auto& t : model.trees) acc += t.predict(x);
    double out = model.base_prediction + model.hyperparams.learning_rate * acc;
    return std::max(0.0, out);
}

// Squared-error gradient boosting: each round fits one depth-limited
// regression tree to the current residuals on a seeded subsample, then
// shrinks it by the learning rate. With a validation set and
// early_stopping_rounds set, keeps the best prefix of trees.
inline GbmModel fit(const Dataset& train, const Dataset* valid,
                    const GbmHyperparams& hp) {
    if (train.rows.empty()) throw data_error("fit: empty training set");
    if (hp.n_trees < 1 || hp.max_depth < 0 || hp.min_samples_leaf < 1)
        throw contract_error("fit: invalid hyperparameters");
    if (hp.learning_rate <= 0 || hp.learning_rate > 1 || hp.subsample <= 0 ||
        hp.subsample > 1)
        throw contract_error("fit: learning_rate and subsample must be in (0,1]");
    if (valid && !(valid->schema == train.schema))
        throw contract_error("fit: train/valid schema mismatch");

    const size_t n = train.rows.size();
    std::vector<FeatureVector> x(n);
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = train.rows[i].features;
        y[i] = train.rows[i].rtt_hours;
    }

    GbmModel model;
    model.schema = train.schema;
    model.hyperparams = hp;
    model.base_prediction = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

    std::vector<double> residuals(n);
    for (size_t i = 0; i < n; ++i) residuals[i] = y[i] - model.base_prediction;

    std::vector<double> valid_pred;
    if (valid) valid_pred.assign(valid->rows.size(), model.base_prediction);
    double best_valid_rmse = std::numeric_limits<double>::infinity();
    size_t best_n_trees = 0;
    int rounds_since_best = 0;

    std::mt19937 rng(hp.seed);
    std::vector<size_t> all_rows(n);
    for (size_t i = 0; i < n; ++i) all_rows[i] = i;

    for (int round = 0; round < hp.n_trees; ++round) {
        std::vector<size_t> rows = all_rows;
        if (hp.subsample < 1.0) {
            std::shuffle(rows.begin(), rows.end(), rng);
            size_t m = std::max<size_t>(1, static_cast<size_t>(
                                               hp.subsample * static_cast<double>(n)));
            rows.resize(m);
            std::sort(rows.begin(), rows.end());
        }
        gbmdetail::TreeBuilder builder{x, residuals, hp.max_depth,
                                       hp.min_samples_leaf, {}};
        builder.build(rows, 0);
        model.trees.push_back(std::move(builder.tree));
        const RegressionTree& t = model.trees.back();
        for (size_t i = 0; i < n; ++i)
            residuals[i] -= hp.learning_rate * t.predict(x[i]);

        if (valid && hp.early_stopping_rounds) {
            double sq = 0;
            for (size_t i = 0; i < valid->rows.size(); ++i) {
                valid_pred[i] += hp.learning_rate * t.predict(valid->rows[i].features);
                double err = valid_pred[i] - valid->rows[i].rtt_hours;
                sq += err * err;
            }
            double rmse = std::sqrt(sq / static_cast<double>(valid->rows.size()));
            if (rmse < best_valid_rmse) {
                best_valid_rmse = rmse;
                best_n_trees = model.trees.size();
                rounds_since_best = 0;
            } else if (++rounds_since_best >= *hp.early_stopping_rounds) {
                model.trees.resize(best_n_trees);
                break;
            }
        }
    }
    return model;
}

inline EvalReport evaluate(const std::vector<double>& predictions,
                           const std::vector<double>& targets) {
    if (predictions.size() != targets.size())
        throw contract_error("evaluate: prediction/target length mismatch");
    if (predictions.empty()) throw contract_error("evaluate: empty input");
    EvalReport rep;
    rep.n = targets.size();
    const double n = static_cast<double>(rep.n);
    double abs_sum = 0, sq_sum = 0, t_sum = 0;
    for (size_t i = 0; i < rep.n; ++i) {
        double err = predictions[i] - targets[i];
        abs_sum += std::fabs(err);
        sq_sum += err * err;
        t_sum += targets[i];
    }
    rep.mae = abs_sum / n;
    rep.rmse = std::sqrt(sq_sum / n);
    const double t_mean = t_sum / n;
    double var_sum = 0;
    for (double t : targets) var_sum += (t - t_mean) * (t - t_mean);
    if (var_sum == 0) {
        if (sq_sum == 0) {
            rep.r2 = 1.0;
        } else {
            rep.r2 = -std::numeric_limits<double>::infinity();
            rep.r2_defined = false;
        }
    } else {
        rep.r2 = 1.0 - sq_sum / var_sum;
    }
    return rep;
}

inline EvalReport evaluate_model(const GbmModel& model, const Dataset& test) {
    std::vector<double> preds, targets;
    for (const auto& row : test.rows) {
        preds.push_back(predict(model, row.features));
        targets.push_back(row.rtt_hours);
    }
    return evaluate(preds, targets);
}

inline constexpr const char* kModelFormatTag = "rearrange-gbm";
inline constexpr int kModelFormatVersion = 1;

inline void save_model(const GbmModel& model, const std::string& path) {
    nlohmann::ordered_json j;
    j["format"] = kModelFormatTag;
    j["version"] = kModelFormatVersion;
    j["schema"] = model.schema.names;
    j["hyperparams"] = {
        {"n_trees", model.hyperparams.n_trees},
        {"max_depth", model.hyperparams.max_depth},
        {"learning_rate", model.hyperparams.learning_rate},
        {"min_samples_leaf", model.hyperparams.min_samples_leaf},
        {"subsample", model.hyperparams.subsample},
        {"seed", model.hyperparams.seed},
    };
    if (model.hyperparams.early_stopping_rounds)
        j["hyperparams"]["early_stopping_rounds"] = *model.hyperparams.early_stopping_rounds;
    j["base_prediction"] = model.base_prediction;
    auto& trees = j["trees"] = nlohmann::ordered_json::array();
    for (const auto& t : model.trees) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (const auto& nd : t.nodes) {
            if (nd.is_leaf)
                nodes.push_back({{"value", nd.value}});
            else
                nodes.push_back({{"f", nd.feature_index},
                                 {"t", nd.threshold},
                                 {"l", nd.left},
                                 {"r", nd.right}});
        }
        trees.push_back(std::move(nodes));
    }
    std::ofstream out(path);
    if (!out) throw config_error("cannot write model file: " + path);
    out << j.dump(1, '\t') << '\n';
}

inline GbmModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("malformed model file " + path + ": " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kModelFormatTag ||
            j.at("version").get<int>() != kModelFormatVersion)
            throw data_error("model file " + path + " has an unsupported format/version tag");
        GbmModel model;
        model.schema.names = j.at("schema").get<std::vector<std::string>>();
        const auto& hp = j.at("hyperparams");
        model.hyperparams.n_trees = hp.at("n_trees").get<int>();
        model.hyperparams.max_depth = hp.at("max_depth").get<int>();
        model.hyperparams.learning_rate = hp.at("learning_rate").get<double>();
        model.hyperparams.min_samples_leaf = hp.at("min_samples_leaf").get<int>();
        model.hyperparams.subsample = hp.at("subsample").get<double>();
        model.hyperparams.seed = hp.at("seed").get<unsigned>();
        if (hp.contains("early_stopping_rounds"))
            model.hyperparams.early_stopping_rounds = hp.at("early_stopping_rounds").get<int>();
        model.base_prediction = j.at("base_prediction").get<double>();
        for (const auto& jt : j.at("trees")) {
            RegressionTree t;
            for (const auto& jn : jt) {
                TreeNode nd;
                if (jn.contains("value")) {
                    nd.is_leaf = true;
                    nd.value = jn.at("value").get<double>();
                } else {
                    nd.is_leaf = false;
                    nd.feature_index = jn.at("f").get<int>();
                    nd.threshold = jn.at("t").get<double>();
                    nd.left = jn.at("l").get<int>();
                    nd.right = jn.at("r").get<int>();
                }
                t.nodes.push_back(nd);
            }
            model.trees.push_back(std::move(t));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("malformed model file " + path + ": " + e.what());
    }
}

} // namespace rearrange
