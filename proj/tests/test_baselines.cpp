#include <catch_amalgamated.hpp>

#include <random>

#include "rearrange/baselines.hpp"
#include "rearrange/gbm.hpp"

using namespace rearrange;

namespace {

Dataset dataset_with_targets(const std::vector<double>& targets) {
    Dataset ds;
    ds.schema = FeatureSchema::standard();
    for (size_t i = 0; i < targets.size(); ++i) {
        DatasetRow row;
        row.commit_id = "c" + std::to_string(i);
        row.before_fqn = "p.C" + std::to_string(i);
        row.features.assign(ds.schema.size(), 0.0);
        row.rtt_hours = targets[i];
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

// y = x0, first feature uniform in [0, 10)
Dataset identity_dataset(size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    Dataset ds;
    ds.schema = FeatureSchema::standard();
    for (size_t i = 0; i < n; ++i) {
        DatasetRow row;
        row.commit_id = "c" + std::to_string(i);
        row.before_fqn = "p.C" + std::to_string(i);
        row.features.assign(ds.schema.size(), 0.0);
        row.features[0] = u(rng);
        row.rtt_hours = row.features[0];
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

} // namespace

TEST_CASE("mean model predicts the training mean everywhere") {
    auto ds = dataset_with_targets({2, 4});
    MeanModel m = mean_fit(ds);
    CHECK(m.mean_hours == 3.0);
    CHECK(mean_predict(m, ds.rows[0].features) == 3.0);
    CHECK(mean_predict(m, FeatureVector{}) == 3.0);

    auto single = mean_fit(dataset_with_targets({7}));
    CHECK(single.mean_hours == 7.0);
    CHECK_THROWS_AS(mean_fit(Dataset{FeatureSchema::standard(), {}}), data_error);
}

TEST_CASE("mean model scores r2 of exactly zero on its own training set") {
    auto ds = dataset_with_targets({1, 2.5, 4, 9});
    MeanModel m = mean_fit(ds);
    std::vector<double> preds, targets;
    for (const auto& r : ds.rows) {
        preds.push_back(mean_predict(m, r.features));
        targets.push_back(r.rtt_hours);
    }
    CHECK_THAT(evaluate(preds, targets).r2, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("cocomo with nominal defaults matches the formula by hand") {
    // 2.94 * 1.0^1.0997 * 1.0 = 2.94 PM, at 152 hours per PM
    CHECK_THAT(cocomo_predict(1.0), Catch::Matchers::WithinAbs(2.94 * 152.0, 1e-9));
    // a 25-line refactoring: 2.94 * 0.025^1.0997 * 152 ~ 7.75 person-hours
    CHECK_THAT(cocomo_predict(0.025), Catch::Matchers::WithinAbs(7.75, 0.05));
}

TEST_CASE("cocomo is linear in the effort-multiplier product") {
    CocomoConfig doubled;
    doubled.effort_multiplier_product = 2.0;
    CHECK_THAT(cocomo_predict(0.5, doubled),
               Catch::Matchers::WithinRel(2.0 * cocomo_predict(0.5), 1e-12));
}

TEST_CASE("cocomo is strictly increasing in size") {
    double prev = 0;
    for (double size : {0.001, 0.01, 0.1, 1.0, 10.0, 100.0}) {
        double e = cocomo_predict(size);
        CHECK(e > prev);
        prev = e;
    }
    CHECK_THROWS_AS(cocomo_predict(0.0), contract_error);
    CHECK_THROWS_AS(cocomo_predict(-1.0), contract_error);
}

TEST_CASE("gp expression arithmetic and protected division") {
    // (x0 + 1)
    GpExpression plus_one{{{GpGene::Add}, {GpGene::Feature, 0}, {GpGene::Constant, 0, 1.0}}};
    CHECK(gp_predict(plus_one, {2.0}) == 3.0);

    // c / 0 is defined as 1
    GpExpression div_zero{{{GpGene::Div}, {GpGene::Constant, 0, 5.0}, {GpGene::Constant, 0, 0.0}}};
    CHECK(gp_predict(div_zero, {}) == 1.0);

    // negative results clamp to zero
    GpExpression negative{{{GpGene::Constant, 0, -3.0}}};
    CHECK(gp_predict(negative, {}) == 0.0);
}

TEST_CASE("gp recovers a noiseless identity target") {
    Dataset ds = identity_dataset(200, 21);
    GpConfig cfg;
    cfg.seed = 7;
    GpExpression best = gp_fit(ds, cfg);
    double rmse = 0;
    for (const auto& r : ds.rows) {
        double err = gp_predict(best, r.features) - r.rtt_hours;
        rmse += err * err;
    }
    rmse = std::sqrt(rmse / static_cast<double>(ds.rows.size()));
    CHECK(rmse < 0.1);
}

TEST_CASE("gp runs are deterministic per seed") {
    Dataset ds = identity_dataset(100, 3);
    GpConfig cfg;
    cfg.population = 60;
    cfg.generations = 10;
    cfg.seed = 99;
    CHECK(gp_fit(ds, cfg) == gp_fit(ds, cfg));
}

TEST_CASE("gp best fitness never worsens across generations") {
    Dataset ds = identity_dataset(120, 17);
    GpConfig cfg;
    cfg.population = 50;
    cfg.seed = 5;
    double prev = std::numeric_limits<double>::infinity();
    for (int gens : {1, 3, 6, 10}) {
        cfg.generations = gens;
        GpExpression best = gp_fit(ds, cfg);
        double rmse = 0;
        for (const auto& r : ds.rows) {
            double err = gp_predict(best, r.features) - r.rtt_hours;
            rmse += err * err;
        }
        rmse = std::sqrt(rmse / static_cast<double>(ds.rows.size()));
        CHECK(rmse <= prev + 1e-12);
        prev = rmse;
    }
}

TEST_CASE("gp expressions respect the depth bound") {
    Dataset ds = identity_dataset(60, 23);
    GpConfig cfg;
    cfg.population = 40;
    cfg.generations = 8;
    cfg.max_tree_depth = 4;
    cfg.seed = 2;
    GpExpression best = gp_fit(ds, cfg);
    CHECK(gpdetail::depth(best) <= 4);
}

TEST_CASE("gp rejects degenerate configurations") {
    Dataset ds = identity_dataset(10, 1);
    GpConfig cfg;
    cfg.population = 1;
    CHECK_THROWS_AS(gp_fit(ds, cfg), contract_error);
    CHECK_THROWS_AS(gp_fit(Dataset{FeatureSchema::standard(), {}}, {}), data_error);
}

TEST_CASE("all estimators share the evaluate contract") {
    Dataset ds = identity_dataset(50, 12);
    std::vector<double> targets;
    for (const auto& r : ds.rows) targets.push_back(r.rtt_hours);

    MeanModel mean = mean_fit(ds);
    GpConfig cfg;
    cfg.population = 30;
    cfg.generations = 5;
    GpExpression expr = gp_fit(ds, cfg);
    GbmHyperparams hp;
    hp.n_trees = 10;
    GbmModel gbm = fit(ds, nullptr, hp);

    std::vector<double> mean_p, gp_p, gbm_p, cocomo_p;
    for (const auto& r : ds.rows) {
        mean_p.push_back(mean_predict(mean, r.features));
        gp_p.push_back(gp_predict(expr, r.features));
        gbm_p.push_back(predict(gbm, r.features));
        cocomo_p.push_back(cocomo_predict(std::max(1.0, r.features[14]) / 1000.0));
    }
    for (const auto& preds : {mean_p, gp_p, gbm_p, cocomo_p}) {
        auto rep = evaluate(preds, targets);
        CHECK(rep.n == ds.rows.size());
        CHECK(rep.rmse >= rep.mae);
    }
}
