#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotlkit/encode.hpp"
#include "lotlkit/errors.hpp"
#include "lotlkit/tree.hpp"

namespace lotlkit {

inline double sigmoid(double z) {
    if (z >= 0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline double log_loss_from_margin(double margin, int y) {
    // numerically stable BCE with logits
    const double z = margin;
    return std::max(z, 0.0) - z * static_cast<double>(y) + std::log1p(std::exp(-std::abs(z)));
}

struct GbdtParams {
    std::size_t n_estimators = 100;
    std::size_t max_depth = 10;
    double learning_rate = 0.3;
    double lambda = 1.0;  // L2 on leaf values
    double min_child_weight = 1.0;
};

// Gradient boosted trees with logistic loss. Leaves take the damped Newton
// step -G/(H+lambda); prediction is sigmoid(base + lr * sum of leaf scores).
struct GbdtModel {
    std::vector<Tree> trees;
    double base_score = 0.0;
    double learning_rate = 0.3;
    std::size_t n_features = 0;
    GbdtParams params;
    std::vector<double> train_loss_curve;

    std::vector<double> predict(const FeatureMatrix& X) const {
        if (X.dims != n_features) throw DataError("feature dimension mismatch in GBDT predict");
        std::vector<double> scores(X.rows);
        std::vector<double> dense;
        for (std::size_t r = 0; r < X.rows; ++r) {
            X.densify_row(r, dense);
            double margin = base_score;
            for (const auto& t : trees) margin += learning_rate * t.predict_row(dense);
            scores[r] = sigmoid(margin);
        }
        return scores;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["base_score"] = base_score;
        j["learning_rate"] = learning_rate;
        j["n_features"] = n_features;
        j["n_estimators"] = params.n_estimators;
        j["max_depth"] = params.max_depth;
        j["lambda"] = params.lambda;
        j["min_child_weight"] = params.min_child_weight;
        nlohmann::json trees_json = nlohmann::json::array();
        for (const auto& t : trees) trees_json.push_back(t.to_json());
        j["trees"] = trees_json;
        return j;
    }

    static GbdtModel from_json(const nlohmann::json& j) {
        GbdtModel m;
        m.base_score = j.at("base_score").get<double>();
        m.learning_rate = j.at("learning_rate").get<double>();
        m.n_features = j.at("n_features").get<std::size_t>();
        m.params.n_estimators = j.at("n_estimators").get<std::size_t>();
        m.params.max_depth = j.at("max_depth").get<std::size_t>();
        m.params.lambda = j.at("lambda").get<double>();
        m.params.min_child_weight = j.at("min_child_weight").get<double>();
        m.params.learning_rate = m.learning_rate;
        for (const auto& t : j.at("trees")) m.trees.push_back(Tree::from_json(t));
        return m;
    }
};

namespace detail {

struct GradCriterion {
    const std::vector<double>* g;
    const std::vector<double>* h;
    double lambda;
    double min_child_weight;

    SplitAcc row_stats(std::uint32_t r) const { return {(*g)[r], (*h)[r], 1.0}; }

    double leaf_value(const SplitAcc& acc) const { return -acc.a / (acc.b + lambda); }

    bool child_ok(const SplitAcc& acc) const { return acc.b >= min_child_weight && acc.n >= 1.0; }

    double split_gain(const SplitAcc& p, const SplitAcc& l, const SplitAcc& r) const {
        auto score = [&](const SplitAcc& s) { return s.a * s.a / (s.b + lambda); };
        return 0.5 * (score(l) + score(r) - score(p));
    }
};

}  // namespace detail

inline GbdtModel train_gbdt(const FeatureMatrix& X, const std::vector<int>& y,
                            const GbdtParams& params = {}) {
    if (X.rows == 0 || y.size() != X.rows) throw DataError("GBDT training needs aligned X and y");
    if (X.kind == EncoderKind::kTokenIds)
        throw ConfigError("token_ids encodings are sequential; GBDT expects tabular features");
    double positives = 0;
    for (int yi : y) positives += yi;
    if (positives == 0 || positives == static_cast<double>(y.size()))
        throw TrainError("GBDT training needs both classes present");

    GbdtModel model;
    model.params = params;
    model.learning_rate = params.learning_rate;
    model.n_features = X.dims;
    const double prior = std::clamp(positives / static_cast<double>(y.size()), 1e-6, 1.0 - 1e-6);
    model.base_score = std::log(prior / (1.0 - prior));

    const auto csc = detail::CscMatrix::build(X);
    std::vector<double> margin(X.rows, model.base_score);
    std::vector<double> grad(X.rows), hess(X.rows);
    std::vector<std::int32_t> all_root(X.rows, 0);
    std::vector<std::int32_t> assignment;

    detail::TreeGrower::Config cfg;
    cfg.max_depth = params.max_depth;

    for (std::size_t round = 0; round < params.n_estimators; ++round) {
        for (std::size_t r = 0; r < X.rows; ++r) {
            const double p = sigmoid(margin[r]);
            grad[r] = p - static_cast<double>(y[r]);
            hess[r] = std::max(p * (1.0 - p), 1e-16);
        }
        detail::GradCriterion crit{&grad, &hess, params.lambda, params.min_child_weight};
        Tree tree = detail::TreeGrower::grow(csc, crit, all_root, cfg, nullptr, &assignment);
        for (std::size_t r = 0; r < X.rows; ++r) {
            margin[r] += params.learning_rate *
                         tree.nodes[static_cast<std::size_t>(assignment[r])].value;
        }
        model.trees.push_back(std::move(tree));

        double loss = 0;
        for (std::size_t r = 0; r < X.rows; ++r) loss += log_loss_from_margin(margin[r], y[r]);
        model.train_loss_curve.push_back(loss / static_cast<double>(X.rows));
    }
    return model;
}

}  // namespace lotlkit
