#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rearrange/dataset.hpp"
#include "rearrange/errors.hpp"

namespace rearrange {

// ---------------------------------------------------------------------------
// Mean predictor

struct MeanModel {
    double mean_hours = 0;
};

inline MeanModel mean_fit(const Dataset& train) {
    if (train.rows.empty()) throw data_error("mean_fit: empty training set");
    double sum = 0;
    for (const auto& r : train.rows) sum += r.rtt_hours;
    return {sum / static_cast<double>(train.rows.size())};
}

inline double mean_predict(const MeanModel& m, const FeatureVector&) {
    return m.mean_hours;
}

// ---------------------------------------------------------------------------
// COCOMO II post-architecture model

struct CocomoConfig {
    double a_coeff = 2.94;
    double b_exponent_base = 0.91;
    double scale_factor_sum = 18.97;  // all-nominal scale factors
    double effort_multiplier_product = 1.0;
    double hours_per_person_month = 152.0;
};

// effort[PM] = A * size^(B + 0.01 * sum(SF)) * prod(EM), converted to hours.
inline double cocomo_predict(double size_ksloc, const CocomoConfig& cfg = {}) {
    if (size_ksloc <= 0) throw contract_error("cocomo_predict: size must be positive");
    double exponent = cfg.b_exponent_base + 0.01 * cfg.scale_factor_sum;
    double effort_pm = cfg.a_coeff * std::pow(size_ksloc, exponent) *
                       cfg.effort_multiplier_product;
    return effort_pm * cfg.hours_per_person_month;
}

// ---------------------------------------------------------------------------
// Genetic-programming symbolic regressor

struct GpConfig {
    int population = 200;
    int generations = 50;
    int tournament_size = 7;
    int max_tree_depth = 6;
    double crossover_prob = 0.9;
    double mutation_prob = 0.1;
    unsigned seed = 42;
};

// Prefix-order expression gene. Operators are binary; protected division
// returns 1 whenever the divisor is zero.
struct GpGene {
    enum Kind : std::uint8_t { Add, Sub, Mul, Div, Feature, Constant };
    Kind kind = Constant;
    int feature = 0;
    double value = 0;

    bool is_terminal() const { return kind == Feature || kind == Constant; }
    bool operator==(const GpGene&) const = default;
};

struct GpExpression {
    std::vector<GpGene> genes;  // prefix order, never empty

    bool operator==(const GpExpression&) const = default;
};

namespace gpdetail {

inline double eval_at(const GpExpression& e, size_t& pos, const FeatureVector& x) {
    const GpGene& g = e.genes[pos++];
    switch (g.kind) {
        case GpGene::Feature:
            return g.feature < static_cast<int>(x.size()) ? x[g.feature] : 0.0;
        case GpGene::Constant:
            return g.value;
        default: {
            double a = eval_at(e, pos, x);
            double b = eval_at(e, pos, x);
            switch (g.kind) {
                case GpGene::Add: return a + b;
                case GpGene::Sub: return a - b;
                case GpGene::Mul: return a * b;
                default: return b == 0.0 ? 1.0 : a / b;
            }
        }
    }
}

// [begin, end) extent of the subtree rooted at index `begin`.
inline size_t subtree_end(const GpExpression& e, size_t begin) {
    size_t pos = begin;
    int needed = 1;
    while (needed > 0) {
        needed += e.genes[pos].is_terminal() ? -1 : 1;
        ++pos;
    }
    return pos;
}

inline int depth(const GpExpression& e, size_t& pos) {
    const GpGene& g = e.genes[pos++];
    if (g.is_terminal()) return 1;
    int a = depth(e, pos);
    int b = depth(e, pos);
    return 1 + std::max(a, b);
}

inline int depth(const GpExpression& e) {
    size_t pos = 0;
    return depth(e, pos);
}

inline GpGene random_terminal(std::mt19937& rng, size_t n_features) {
    std::uniform_int_distribution<int> coin(0, 1);
    GpGene g;
    if (n_features > 0 && coin(rng) == 0) {
        g.kind = GpGene::Feature;
        g.feature = std::uniform_int_distribution<int>(
            0, static_cast<int>(n_features) - 1)(rng);
    } else {
        g.kind = GpGene::Constant;
        g.value = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
    }
    return g;
}

inline GpGene random_function(std::mt19937& rng) {
    GpGene g;
    g.kind = static_cast<GpGene::Kind>(std::uniform_int_distribution<int>(0, 3)(rng));
    return g;
}

inline void grow(GpExpression& e, std::mt19937& rng, size_t n_features, int depth_left,
                 bool full) {
    bool terminal = depth_left <= 1 ||
                    (!full && std::uniform_int_distribution<int>(0, 2)(rng) == 0);
    if (terminal) {
        e.genes.push_back(random_terminal(rng, n_features));
        return;
    }
    e.genes.push_back(random_function(rng));
    grow(e, rng, n_features, depth_left - 1, full);
    grow(e, rng, n_features, depth_left - 1, full);
}

inline double fitness_rmse(const GpExpression& e, const Dataset& train) {
    double sq = 0;
    for (const auto& row : train.rows) {
        size_t pos = 0;
        double pred = std::max(0.0, eval_at(e, pos, row.features));
        double err = pred - row.rtt_hours;
        sq += err * err;
    }
    return std::sqrt(sq / static_cast<double>(train.rows.size()));
}

inline std::mt19937 derived_rng(unsigned seed, int generation, int index) {
    std::seed_seq seq{seed, static_cast<unsigned>(generation + 1),
                      static_cast<unsigned>(index + 1)};
    return std::mt19937(seq);
}

} // namespace gpdetail

inline double gp_predict(const GpExpression& expr, const FeatureVector& x) {
    size_t pos = 0;
    return std::max(0.0, gpdetail::eval_at(expr, pos, x));
}

// Koza-style run: ramped half-and-half initialization, tournament selection,
// subtree crossover and point mutation, elitism of one, fitness = training
// RMSE. Per-individual randomness is derived from (seed, generation, index)
// so results do not depend on evaluation order.
inline GpExpression gp_fit(const Dataset& train, const GpConfig& cfg = {}) {
    using namespace gpdetail;
    if (train.rows.empty()) throw data_error("gp_fit: empty training set");
    if (cfg.population < 2 || cfg.generations < 1 || cfg.tournament_size < 1)
        throw contract_error("gp_fit: invalid configuration");
    const size_t n_features = train.schema.size();

    std::vector<GpExpression> pop(cfg.population);
    for (int i = 0; i < cfg.population; ++i) {
        auto rng = derived_rng(cfg.seed, 0, i);
        int depth_budget = 2 + i % std::max(1, cfg.max_tree_depth - 1);
        bool full = (i / std::max(1, cfg.max_tree_depth - 1)) % 2 == 0;
        grow(pop[i], rng, n_features, depth_budget, full);
    }

    std::vector<double> fit(cfg.population);
    auto evaluate_pop = [&]() {
        for (int i = 0; i < cfg.population; ++i) fit[i] = fitness_rmse(pop[i], train);
    };
    evaluate_pop();

    auto best_index = [&]() {
        int best = 0;
        for (int i = 1; i < cfg.population; ++i)
            if (fit[i] < fit[best]) best = i;
        return best;
    };

    for (int gen = 1; gen <= cfg.generations; ++gen) {
        std::vector<GpExpression> next;
        next.reserve(cfg.population);
        next.push_back(pop[best_index()]);  // elitism of 1

        for (int i = 1; i < cfg.population; ++i) {
            auto rng = derived_rng(cfg.seed, gen, i);
            auto tournament = [&]() -> const GpExpression& {
                std::uniform_int_distribution<int> pick(0, cfg.population - 1);
                int winner = pick(rng);
                for (int k = 1; k < cfg.tournament_size; ++k) {
                    int c = pick(rng);
                    if (fit[c] < fit[winner]) winner = c;
                }
                return pop[winner];
            };
            GpExpression child = tournament();
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            if (unit(rng) < cfg.crossover_prob) {
                const GpExpression& donor = tournament();
                size_t at = std::uniform_int_distribution<size_t>(
                    0, child.genes.size() - 1)(rng);
                size_t at_end = subtree_end(child, at);
                size_t from = std::uniform_int_distribution<size_t>(
                    0, donor.genes.size() - 1)(rng);
                size_t from_end = subtree_end(donor, from);
                GpExpression candidate;
                candidate.genes.insert(candidate.genes.end(), child.genes.begin(),
                                       child.genes.begin() + at);
                candidate.genes.insert(candidate.genes.end(), donor.genes.begin() + from,
                                       donor.genes.begin() + from_end);
                candidate.genes.insert(candidate.genes.end(),
                                       child.genes.begin() + at_end, child.genes.end());
                if (depth(candidate) <= cfg.max_tree_depth) child = std::move(candidate);
            }
            if (unit(rng) < cfg.mutation_prob) {
                // subtree mutation: splice in a freshly grown subtree
                size_t at = std::uniform_int_distribution<size_t>(
                    0, child.genes.size() - 1)(rng);
                size_t at_end = subtree_end(child, at);
                GpExpression fresh;
                grow(fresh, rng, n_features,
                     std::max(1, cfg.max_tree_depth - 2), false);
                GpExpression candidate;
                candidate.genes.insert(candidate.genes.end(), child.genes.begin(),
                                       child.genes.begin() + at);
                candidate.genes.insert(candidate.genes.end(), fresh.genes.begin(),
                                       fresh.genes.end());
                candidate.genes.insert(candidate.genes.end(),
                                       child.genes.begin() + at_end, child.genes.end());
                if (depth(candidate) <= cfg.max_tree_depth) child = std::move(candidate);
            }
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        evaluate_pop();
    }
    return pop[best_index()];
}

} // namespace rearrange
