#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "lotlkit/encode.hpp"
#include "lotlkit/errors.hpp"
#include "lotlkit/rng.hpp"
#include "lotlkit/tree.hpp"

namespace lotlkit {

struct ForestParams {
    std::size_t n_estimators = 100;
    std::size_t max_depth = 10;
    bool bootstrap = true;
    // 0 = sqrt(dims) per split
    std::size_t features_per_split = 0;
    std::uint64_t seed = 0;
};

// Bagged gini trees; prediction averages per-tree leaf class probabilities.
struct RandomForestModel {
    std::vector<Tree> trees;
    std::size_t n_features = 0;
    ForestParams params;

    std::vector<double> predict(const FeatureMatrix& X) const {
        if (X.dims != n_features)
            throw DataError("feature dimension mismatch in random forest predict");
        std::vector<double> scores(X.rows, 0.0);
        std::vector<double> dense;
        for (std::size_t r = 0; r < X.rows; ++r) {
            X.densify_row(r, dense);
            double sum = 0;
            for (const auto& t : trees) sum += t.predict_row(dense);
            scores[r] = sum / static_cast<double>(trees.size());
        }
        return scores;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["n_features"] = n_features;
        j["n_estimators"] = params.n_estimators;
        j["max_depth"] = params.max_depth;
        j["bootstrap"] = params.bootstrap;
        j["features_per_split"] = params.features_per_split;
        j["seed"] = params.seed;
        nlohmann::json trees_json = nlohmann::json::array();
        for (const auto& t : trees) trees_json.push_back(t.to_json());
        j["trees"] = trees_json;
        return j;
    }

    static RandomForestModel from_json(const nlohmann::json& j) {
        RandomForestModel m;
        m.n_features = j.at("n_features").get<std::size_t>();
        m.params.n_estimators = j.at("n_estimators").get<std::size_t>();
        m.params.max_depth = j.at("max_depth").get<std::size_t>();
        m.params.bootstrap = j.at("bootstrap").get<bool>();
        m.params.features_per_split = j.at("features_per_split").get<std::size_t>();
        m.params.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& t : j.at("trees")) m.trees.push_back(Tree::from_json(t));
        return m;
    }
};

namespace detail {

struct GiniCriterion {
    const std::vector<int>* y;
    const std::vector<double>* weight;

    SplitAcc row_stats(std::uint32_t r) const {
        const double w = (*weight)[r];
        return {w, w * static_cast<double>((*y)[r]), w > 0 ? 1.0 : 0.0};
    }

    double leaf_value(const SplitAcc& acc) const { return acc.a > 0 ? acc.b / acc.a : 0.5; }

    bool child_ok(const SplitAcc& acc) const { return acc.a >= 1.0; }

    static double impurity_mass(const SplitAcc& s) {
        if (s.a <= 0) return 0.0;
        const double p = s.b / s.a;
        return s.a * 2.0 * p * (1.0 - p);  // weighted gini
    }

    double split_gain(const SplitAcc& p, const SplitAcc& l, const SplitAcc& r) const {
        return impurity_mass(p) - impurity_mass(l) - impurity_mass(r);
    }
};

}  // namespace detail

inline RandomForestModel train_random_forest(const FeatureMatrix& X, const std::vector<int>& y,
                                             const ForestParams& params = {}) {
    if (X.rows == 0 || y.size() != X.rows)
        throw DataError("random forest training needs aligned X and y");
    if (X.kind == EncoderKind::kTokenIds)
        throw ConfigError("token_ids encodings are sequential; random forest expects tabular features");
    double positives = 0;
    for (int yi : y) positives += yi;
    if (positives == 0 || positives == static_cast<double>(y.size()))
        throw TrainError("random forest training needs both classes present");

    RandomForestModel model;
    model.params = params;
    model.n_features = X.dims;

    const auto csc = detail::CscMatrix::build(X);
    Rng rng(mix64(params.seed ^ 0x666f7265ULL));

    detail::TreeGrower::Config cfg;
    cfg.max_depth = params.max_depth;
    cfg.features_per_node =
        params.features_per_split > 0
            ? params.features_per_split
            : std::max<std::size_t>(1, static_cast<std::size_t>(
                                           std::llround(std::sqrt(static_cast<double>(X.dims)))));

    std::vector<double> weight(X.rows);
    std::vector<std::int32_t> init(X.rows);
    for (std::size_t t = 0; t < params.n_estimators; ++t) {
        if (params.bootstrap) {
            std::fill(weight.begin(), weight.end(), 0.0);
            for (std::size_t d = 0; d < X.rows; ++d) weight[rng.uniform(X.rows)] += 1.0;
        } else {
            std::fill(weight.begin(), weight.end(), 1.0);
        }
        for (std::size_t r = 0; r < X.rows; ++r) init[r] = weight[r] > 0 ? 0 : -1;
        detail::GiniCriterion crit{&y, &weight};
        model.trees.push_back(detail::TreeGrower::grow(csc, crit, init, cfg, &rng));
    }
    return model;
}

}  // namespace lotlkit
