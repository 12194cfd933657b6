#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "rearrange/baselines.hpp"
#include "rearrange/gbm.hpp"

#include "fixture_repo.hpp"

using namespace rearrange;

namespace {

// Seeded synthetic dataset over the standard schema. The target is
// y = 3 * wmc + 0.5 * cbo + noise.
Dataset synthetic_signal(size_t n, unsigned seed, double noise_sigma) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> wmc(0.0, 10.0), cbo(0.0, 8.0);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    Dataset ds;
    ds.schema = FeatureSchema::standard();
    for (size_t i = 0; i < n; ++i) {
        DatasetRow row;
        row.commit_id = "s" + std::to_string(i);
        row.op_kind = RefKind::MoveClass;
        row.before_fqn = "p.S" + std::to_string(i);
        row.features.assign(ds.schema.size(), 0.0);
        row.features[0] = wmc(rng);
        row.features[3] = cbo(rng);
        row.rtt_hours = std::max(0.01, 3.0 * row.features[0] + 0.5 * row.features[3] +
                                           noise(rng));
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

Dataset pure_noise(size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> feat(0.0, 10.0), target(0.5, 8.0);
    Dataset ds;
    ds.schema = FeatureSchema::standard();
    for (size_t i = 0; i < n; ++i) {
        DatasetRow row;
        row.commit_id = "n" + std::to_string(i);
        row.op_kind = RefKind::MoveClass;
        row.before_fqn = "p.N" + std::to_string(i);
        row.features.assign(ds.schema.size(), 0.0);
        for (size_t f = 0; f < 9; ++f) row.features[f] = feat(rng);
        row.rtt_hours = target(rng);
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

Dataset constant_target(size_t n, double value) {
    Dataset ds = pure_noise(n, 99);
    for (auto& r : ds.rows) r.rtt_hours = value;
    return ds;
}

double mae_of(const GbmModel& model, const Dataset& test) {
    return evaluate_model(model, test).mae;
}

} // namespace

TEST_CASE("a constant target is predicted exactly everywhere") {
    Dataset ds = constant_target(50, 7.0);
    GbmHyperparams hp;
    hp.n_trees = 20;
    GbmModel model = fit(ds, nullptr, hp);
    for (const auto& r : ds.rows)
        CHECK(predict(model, r.features) == 7.0);
}

TEST_CASE("one tree of depth zero predicts the training mean") {
    Dataset ds = synthetic_signal(40, 3, 0.1);
    double mean = 0;
    for (const auto& r : ds.rows) mean += r.rtt_hours;
    mean /= static_cast<double>(ds.rows.size());
    GbmHyperparams hp;
    hp.n_trees = 1;
    hp.max_depth = 0;
    hp.subsample = 1.0;
    GbmModel model = fit(ds, nullptr, hp);
    for (const auto& r : ds.rows)
        CHECK_THAT(predict(model, r.features), Catch::Matchers::WithinAbs(mean, 1e-12));
}

TEST_CASE("invalid hyperparameters and empty training sets are rejected") {
    Dataset ds = synthetic_signal(10, 3, 0.1);
    GbmHyperparams hp;
    hp.n_trees = 0;
    CHECK_THROWS_AS(fit(ds, nullptr, hp), contract_error);
    CHECK_THROWS_AS(fit(Dataset{FeatureSchema::standard(), {}}, nullptr, {}), data_error);
}

TEST_CASE("learner captures a planted linear signal") {
    Dataset ds = synthetic_signal(500, 42, 0.1);
    auto [train, test] = split(ds, 0.2, 42);
    GbmModel model = fit(train, nullptr, {});
    double gbm_mae = mae_of(model, test);

    MeanModel mean = mean_fit(train);
    double mean_mae = 0;
    for (const auto& r : test.rows)
        mean_mae += std::fabs(mean_predict(mean, r.features) - r.rtt_hours);
    mean_mae /= static_cast<double>(test.rows.size());

    CHECK(gbm_mae < 0.5);
    CHECK(gbm_mae < mean_mae);
}

TEST_CASE("learner does not hallucinate signal from pure noise") {
    Dataset ds = pure_noise(500, 1234);
    auto [train, test] = split(ds, 0.2, 42);
    GbmModel model = fit(train, nullptr, {});
    double gbm_mae = mae_of(model, test);

    MeanModel mean = mean_fit(train);
    double mean_mae = 0;
    for (const auto& r : test.rows)
        mean_mae += std::fabs(mean_predict(mean, r.features) - r.rtt_hours);
    mean_mae /= static_cast<double>(test.rows.size());

    CHECK(gbm_mae <= 1.2 * mean_mae);
}

TEST_CASE("training loss is non-increasing per round with full sampling") {
    Dataset ds = synthetic_signal(200, 5, 0.5);
    GbmHyperparams hp;
    hp.n_trees = 40;
    hp.subsample = 1.0;
    GbmModel model = fit(ds, nullptr, hp);

    // replay boosting prefix by prefix
    std::vector<double> preds(ds.rows.size(), model.base_prediction);
    double prev_rmse = std::numeric_limits<double>::infinity();
    for (const auto& tree : model.trees) {
        double sq = 0;
        for (size_t i = 0; i < ds.rows.size(); ++i) {
            preds[i] += hp.learning_rate * tree.predict(ds.rows[i].features);
            double err = preds[i] - ds.rows[i].rtt_hours;
            sq += err * err;
        }
        double rmse = std::sqrt(sq / static_cast<double>(ds.rows.size()));
        CHECK(rmse <= prev_rmse + 1e-9);
        prev_rmse = rmse;
    }
}

TEST_CASE("predictions are clamped at zero") {
    Dataset ds = constant_target(30, 0.05);
    for (auto& r : ds.rows) r.rtt_hours = 0.05;
    GbmModel model = fit(ds, nullptr, {});
    FeatureVector far_out(model.schema.size(), 1e6);
    CHECK(predict(model, far_out) >= 0.0);
}

TEST_CASE("predict rejects arity mismatches") {
    Dataset ds = synthetic_signal(20, 3, 0.1);
    GbmModel model = fit(ds, nullptr, {});
    CHECK_THROWS_AS(predict(model, FeatureVector{1.0, 2.0}), contract_error);
}

TEST_CASE("early stopping keeps the best prefix") {
    Dataset ds = synthetic_signal(300, 11, 0.1);
    auto [train, valid] = split(ds, 0.25, 9);
    GbmHyperparams hp;
    hp.n_trees = 200;
    hp.early_stopping_rounds = 5;
    GbmModel stopped = fit(train, &valid, hp);
    CHECK(stopped.trees.size() <= 200);
    GbmHyperparams no_stop = hp;
    no_stop.early_stopping_rounds.reset();
    GbmModel full = fit(train, nullptr, no_stop);
    CHECK(full.trees.size() == 200);
}

// ---------------------------------------------------------------------------
// evaluate

TEST_CASE("perfect predictions evaluate to the identity report") {
    auto rep = evaluate({1, 2, 3}, {1, 2, 3});
    CHECK(rep.r2 == 1.0);
    CHECK(rep.rmse == 0.0);
    CHECK(rep.mae == 0.0);
}

TEST_CASE("evaluate hand arithmetic on a three-point example") {
    auto rep = evaluate({2, 2, 2}, {1, 2, 3});
    CHECK_THAT(rep.mae, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-6));
    CHECK_THAT(rep.rmse, Catch::Matchers::WithinAbs(std::sqrt(2.0 / 3.0), 1e-6));
    CHECK_THAT(rep.r2, Catch::Matchers::WithinAbs(0.0, 1e-6));
}

TEST_CASE("predicting the target mean gives r2 of exactly zero") {
    std::vector<double> targets = {0.5, 1.5, 4.0, 6.0};
    double mean = (0.5 + 1.5 + 4.0 + 6.0) / 4.0;
    auto rep = evaluate(std::vector<double>(4, mean), targets);
    CHECK_THAT(rep.r2, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("constant targets make r2 undefined unless error is zero") {
    auto perfect = evaluate({4, 4}, {4, 4});
    CHECK(perfect.r2 == 1.0);
    CHECK(perfect.r2_defined);
    auto broken = evaluate({5, 3}, {4, 4});
    CHECK_FALSE(broken.r2_defined);
    CHECK(broken.r2 == -std::numeric_limits<double>::infinity());
}

TEST_CASE("rmse dominates mae in every report") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> p(20), t(20);
        for (size_t i = 0; i < 20; ++i) { p[i] = u(rng); t[i] = u(rng); }
        auto rep = evaluate(p, t);
        CHECK(rep.rmse >= rep.mae);
        CHECK(rep.r2 <= 1.0);
    }
}

TEST_CASE("evaluate rejects mismatched lengths") {
    CHECK_THROWS_AS(evaluate({1, 2}, {1}), contract_error);
    CHECK_THROWS_AS(evaluate({}, {}), contract_error);
}

// ---------------------------------------------------------------------------
// model persistence

TEST_CASE("model files round-trip to bit-identical predictions") {
    Dataset ds = synthetic_signal(200, 77, 0.2);
    GbmModel model = fit(ds, nullptr, {});
    auto dir = fixtures::unique_temp_dir("model");
    auto path = dir + "/model.json";
    save_model(model, path);
    GbmModel back = load_model(path);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 12.0);
    for (int i = 0; i < 100; ++i) {
        FeatureVector x(model.schema.size());
        for (auto& v : x) v = u(rng);
        CHECK(predict(model, x) == predict(back, x));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("independent tree walk over the serialized file matches predict") {
    Dataset ds = synthetic_signal(150, 31, 0.2);
    GbmModel model = fit(ds, nullptr, {});
    auto dir = fixtures::unique_temp_dir("model_oracle");
    auto path = dir + "/model.json";
    save_model(model, path);

    // oracle: walk the raw JSON trees without touching the library reader
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    auto walk = [&](const nlohmann::json& nodes, const FeatureVector& x) {
        size_t i = 0;
        while (!nodes[i].contains("value")) {
            int f = nodes[i]["f"].get<int>();
            double t = nodes[i]["t"].get<double>();
            i = x[f] <= t ? nodes[i]["l"].get<size_t>() : nodes[i]["r"].get<size_t>();
        }
        return nodes[i]["value"].get<double>();
    };
    double rate = j["hyperparams"]["learning_rate"].get<double>();
    double base = j["base_prediction"].get<double>();

    for (const auto& row : ds.rows) {
        double acc = 0;
        for (const auto& tree : j["trees"]) acc += walk(tree, row.features);
        double oracle = std::max(0.0, base + rate * acc);
        CHECK(predict(model, row.features) == oracle);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("fixed seeds give byte-identical model files") {
    Dataset ds = synthetic_signal(120, 8, 0.3);
    auto dir = fixtures::unique_temp_dir("model_det");
    auto p1 = dir + "/m1.json", p2 = dir + "/m2.json";
    save_model(fit(ds, nullptr, {}), p1);
    save_model(fit(ds, nullptr, {}), p2);
    std::ifstream f1(p1), f2(p2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK_FALSE(s1.str().empty());
    std::filesystem::remove_all(dir);
}

TEST_CASE("corrupted and mis-versioned model files are rejected") {
    auto dir = fixtures::unique_temp_dir("model_bad");
    auto path = dir + "/model.json";
    {
        std::ofstream out(path);
        out << "this is not json";
    }
    CHECK_THROWS_AS(load_model(path), data_error);

    Dataset ds = synthetic_signal(60, 4, 0.2);
    save_model(fit(ds, nullptr, {}), path);
    // hand-edit the version tag
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    in.close();
    j["version"] = 999;
    {
        std::ofstream out(path);
        out << j.dump();
    }
    CHECK_THROWS_AS(load_model(path), data_error);
    CHECK_THROWS_AS(load_model(dir + "/missing.json"), config_error);
    std::filesystem::remove_all(dir);
}
