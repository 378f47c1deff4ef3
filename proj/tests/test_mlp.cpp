#include <doctest.h>

#include <cmath>

#include "lotlkit/mlp.hpp"
#include "lotlkit/rng.hpp"

using namespace lotlkit;

namespace {

FeatureMatrix dense_matrix(const std::vector<std::vector<double>>& rows,
                           const std::vector<int>& labels) {
    FeatureMatrix m;
    m.kind = EncoderKind::kMinHash;  // dense tabular
    m.dense = true;
    m.rows = rows.size();
    m.dims = rows.empty() ? 0 : rows[0].size();
    m.labels = labels;
    for (const auto& r : rows) m.dense_data.insert(m.dense_data.end(), r.begin(), r.end());
    return m;
}

FeatureMatrix separable_blobs(std::size_t n, std::uint64_t seed, std::vector<int>& labels) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows;
    labels.clear();
    for (std::size_t i = 0; i < n; ++i) {
        const bool hot = rng.bernoulli(0.5);
        const double cx = hot ? 1.5 : -1.5;
        rows.push_back({cx + 0.3 * rng.normal(), 0.3 * rng.normal() + (hot ? 0.5 : -0.5)});
        labels.push_back(hot ? 1 : 0);
    }
    return dense_matrix(rows, labels);
}

}  // namespace

TEST_SUITE_BEGIN("mlp");

namespace {

// ReLU gate pattern over a batch; finite differences are only valid for a
// parameter whose +/- h evaluations keep every gate unchanged (the loss is
// not differentiable across a kink).
std::vector<char> gate_pattern(const MlpModel& model, const FeatureMatrix& X,
                               const std::vector<std::size_t>& batch) {
    std::vector<char> gates;
    std::vector<double> dense;
    for (std::size_t row : batch) {
        X.densify_row(row, dense);
        std::vector<double> act = dense;
        for (std::size_t l = 0; l + 1 < model.n_layers(); ++l) {
            std::vector<double> next(model.widths[l + 1]);
            for (std::size_t o = 0; o < next.size(); ++o) {
                double z = model.b[l][o];
                for (std::size_t i = 0; i < act.size(); ++i)
                    z += model.W[l][o * act.size() + i] * act[i];
                gates.push_back(z > 0 ? 1 : 0);
                next[o] = std::max(z, 0.0);
            }
            act.swap(next);
        }
    }
    return gates;
}

}  // namespace

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(555);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int draw = 0; draw < 10; ++draw) {
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 6; ++i) {
            std::vector<double> row;
            for (int d = 0; d < 7; ++d) row.push_back(rng.normal());
            rows.push_back(row);
            labels.push_back(rng.bernoulli(0.5) ? 1 : 0);
        }
        FeatureMatrix X = dense_matrix(rows, labels);

        MlpParams params;
        params.hidden = {5, 3};
        params.seed = 1000 + static_cast<std::uint64_t>(draw);
        MlpModel model = init_mlp(X.dims, params);
        // perturb all layers so the output path is generic, not the zero init
        for (auto& layer : model.W)
            for (auto& w : layer) w += 0.2 * rng.normal();
        for (auto& layer : model.b)
            for (auto& b : layer) b += 0.1 * rng.normal();

        std::vector<std::size_t> batch = {0, 1, 2, 3, 4, 5};
        MlpGradients grads;
        mlp_loss_and_gradient(model, X, labels, batch, grads);

        const double h = 1e-5;
        auto check_param = [&](double& theta, double analytic) {
            const double saved = theta;
            theta = saved + h;
            const auto gates_up = gate_pattern(model, X, batch);
            MlpGradients scratch;
            const double up = mlp_loss_and_gradient(model, X, labels, batch, scratch);
            theta = saved - h;
            const auto gates_down = gate_pattern(model, X, batch);
            const double down = mlp_loss_and_gradient(model, X, labels, batch, scratch);
            theta = saved;
            if (gates_up != gates_down) return;  // perturbation crossed a kink
            const double numeric = (up - down) / (2.0 * h);
            const double denom = std::max({1e-6, std::abs(analytic), std::abs(numeric)});
            worst = std::max(worst, std::abs(analytic - numeric) / denom);
            ++checked;
        };
        for (std::size_t l = 0; l < model.W.size(); ++l) {
            for (std::size_t i = 0; i < model.W[l].size(); i += 3)
                check_param(model.W[l][i], grads.W[l][i]);
            for (std::size_t i = 0; i < model.b[l].size(); ++i)
                check_param(model.b[l][i], grads.b[l][i]);
        }
    }
    CHECK(checked > 100);  // the filter must not hollow out the check
    CHECK(worst < 1e-4);
}

TEST_CASE("untrained network scores sigmoid of the initial output bias everywhere") {
    std::vector<int> labels;
    FeatureMatrix X = separable_blobs(40, 3, labels);
    MlpParams params;
    params.epochs = 0;
    params.seed = 4;
    auto model = train_mlp(X, labels, params);
    for (double s : model.predict(X)) CHECK(s == doctest::Approx(0.5));
}

TEST_CASE("a separable toy set trains to high accuracy within 50 epochs") {
    std::vector<int> labels;
    FeatureMatrix X = separable_blobs(400, 5, labels);
    MlpParams params;
    params.epochs = 50;
    params.batch_size = 64;
    params.seed = 6;
    auto model = train_mlp(X, labels, params);
    auto scores = model.predict(X);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        correct += static_cast<std::size_t>((scores[i] >= 0.5) == (labels[i] == 1));
    CHECK(static_cast<double>(correct) / static_cast<double>(scores.size()) >= 0.99);
}

TEST_CASE("ablation topology with one hidden layer works") {
    std::vector<int> labels;
    FeatureMatrix X = separable_blobs(200, 8, labels);
    MlpParams params;
    params.hidden = {32};
    params.epochs = 30;
    params.batch_size = 32;
    params.seed = 9;
    auto model = train_mlp(X, labels, params);
    CHECK(model.widths == std::vector<std::size_t>{2, 32, 1});
    auto scores = model.predict(X);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        correct += static_cast<std::size_t>((scores[i] >= 0.5) == (labels[i] == 1));
    CHECK(static_cast<double>(correct) / static_cast<double>(scores.size()) >= 0.95);
}

TEST_CASE("non-finite loss aborts with diagnostics") {
    std::vector<std::vector<double>> rows = {{1e308, 1e308}, {-1e308, 1e308}};
    FeatureMatrix X = dense_matrix(rows, {0, 1});
    MlpParams params;
    params.epochs = 3;
    params.seed = 2;
    CHECK_THROWS_AS(train_mlp(X, {0, 1}, params), TrainError);
}

TEST_CASE("thresholding logits at zero equals thresholding probabilities at half") {
    std::vector<int> labels;
    FeatureMatrix X = separable_blobs(100, 12, labels);
    MlpParams params;
    params.epochs = 5;
    params.seed = 13;
    auto model = train_mlp(X, labels, params);
    std::vector<double> dense;
    for (std::size_t r = 0; r < X.rows; ++r) {
        X.densify_row(r, dense);
        const double logit = model.forward_logit(dense);
        const double prob = sigmoid(logit);
        CHECK((logit > 0.0) == (prob > 0.5));
    }
}

TEST_CASE("mlp model round-trips through JSON") {
    std::vector<int> labels;
    FeatureMatrix X = separable_blobs(60, 19, labels);
    MlpParams params;
    params.epochs = 3;
    params.seed = 8;
    auto model = train_mlp(X, labels, params);
    auto restored = MlpModel::from_json(model.to_json());
    CHECK(restored.predict(X) == model.predict(X));
}

TEST_SUITE_END();
