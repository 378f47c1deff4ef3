#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotlkit/encode.hpp"
#include "lotlkit/errors.hpp"
#include "lotlkit/gbdt.hpp"  // sigmoid, log_loss_from_margin
#include "lotlkit/rng.hpp"

namespace lotlkit {

struct MlpParams {
    std::vector<std::size_t> hidden = {64, 32};
    double learning_rate = 1e-3;
    std::size_t batch_size = 512;
    std::size_t epochs = 10;
    std::uint64_t seed = 0;
};

// Fully connected ReLU network with a single sigmoid output. Weights stored
// row-major per layer: W[l] has shape widths[l+1] x widths[l].
struct MlpModel {
    std::vector<std::size_t> widths;
    std::vector<std::vector<double>> W;
    std::vector<std::vector<double>> b;
    MlpParams params;
    std::vector<double> train_loss_curve;

    std::size_t n_layers() const { return W.size(); }

    double forward_logit(const std::vector<double>& x) const {
        std::vector<double> act = x;
        std::vector<double> next;
        for (std::size_t l = 0; l < n_layers(); ++l) {
            const std::size_t out_n = widths[l + 1];
            const std::size_t in_n = widths[l];
            next.assign(out_n, 0.0);
            for (std::size_t o = 0; o < out_n; ++o) {
                double z = b[l][o];
                const double* wrow = &W[l][o * in_n];
                for (std::size_t i = 0; i < in_n; ++i) z += wrow[i] * act[i];
                next[o] = (l + 1 < n_layers()) ? std::max(z, 0.0) : z;
            }
            act.swap(next);
        }
        return act[0];
    }

    std::vector<double> predict(const FeatureMatrix& X) const {
        if (X.dims != widths.front()) throw DataError("feature dimension mismatch in MLP predict");
        std::vector<double> scores(X.rows);
        std::vector<double> dense;
        for (std::size_t r = 0; r < X.rows; ++r) {
            X.densify_row(r, dense);
            scores[r] = sigmoid(forward_logit(dense));
        }
        return scores;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["widths"] = widths;
        j["W"] = W;
        j["b"] = b;
        j["learning_rate"] = params.learning_rate;
        j["batch_size"] = params.batch_size;
        j["epochs"] = params.epochs;
        j["seed"] = params.seed;
        return j;
    }

    static MlpModel from_json(const nlohmann::json& j) {
        MlpModel m;
        m.widths = j.at("widths").get<std::vector<std::size_t>>();
        m.W = j.at("W").get<std::vector<std::vector<double>>>();
        m.b = j.at("b").get<std::vector<std::vector<double>>>();
        m.params.learning_rate = j.at("learning_rate").get<double>();
        m.params.batch_size = j.at("batch_size").get<std::size_t>();
        m.params.epochs = j.at("epochs").get<std::size_t>();
        m.params.seed = j.at("seed").get<std::uint64_t>();
        return m;
    }
};

struct MlpGradients {
    std::vector<std::vector<double>> W;
    std::vector<std::vector<double>> b;

    void zero_like(const MlpModel& m) {
        W.resize(m.W.size());
        b.resize(m.b.size());
        for (std::size_t l = 0; l < m.W.size(); ++l) {
            W[l].assign(m.W[l].size(), 0.0);
            b[l].assign(m.b[l].size(), 0.0);
        }
    }
};

// Mean BCE loss over the given rows plus its analytic gradient.
inline double mlp_loss_and_gradient(const MlpModel& model, const FeatureMatrix& X,
                                    const std::vector<int>& y,
                                    const std::vector<std::size_t>& rows, MlpGradients& grads) {
    grads.zero_like(model);
    const std::size_t L = model.n_layers();
    double total_loss = 0.0;

    std::vector<std::vector<double>> acts(L + 1);
    std::vector<std::vector<double>> zs(L);
    std::vector<double> dense;

    for (std::size_t row : rows) {
        X.densify_row(row, dense);
        acts[0] = dense;
        for (std::size_t l = 0; l < L; ++l) {
            const std::size_t out_n = model.widths[l + 1];
            const std::size_t in_n = model.widths[l];
            zs[l].assign(out_n, 0.0);
            acts[l + 1].assign(out_n, 0.0);
            for (std::size_t o = 0; o < out_n; ++o) {
                double z = model.b[l][o];
                const double* wrow = &model.W[l][o * in_n];
                for (std::size_t i = 0; i < in_n; ++i) z += wrow[i] * acts[l][i];
                zs[l][o] = z;
                acts[l + 1][o] = (l + 1 < L) ? std::max(z, 0.0) : z;
            }
        }
        const double logit = acts[L][0];
        total_loss += log_loss_from_margin(logit, y[row]);

        // backprop
        std::vector<double> delta{sigmoid(logit) - static_cast<double>(y[row])};
        for (std::size_t li = L; li-- > 0;) {
            const std::size_t out_n = model.widths[li + 1];
            const std::size_t in_n = model.widths[li];
            for (std::size_t o = 0; o < out_n; ++o) {
                grads.b[li][o] += delta[o];
                double* grow = &grads.W[li][o * in_n];
                const double d = delta[o];
                for (std::size_t i = 0; i < in_n; ++i) grow[i] += d * acts[li][i];
            }
            if (li == 0) break;
            std::vector<double> prev(in_n, 0.0);
            for (std::size_t i = 0; i < in_n; ++i) {
                if (zs[li - 1][i] <= 0.0) continue;  // ReLU gate
                double sum = 0;
                for (std::size_t o = 0; o < out_n; ++o) sum += model.W[li][o * in_n + i] * delta[o];
                prev[i] = sum;
            }
            delta.swap(prev);
        }
    }

    const double scale = 1.0 / static_cast<double>(rows.size());
    for (auto& layer : grads.W)
        for (auto& v : layer) v *= scale;
    for (auto& layer : grads.b)
        for (auto& v : layer) v *= scale;
    return total_loss * scale;
}

// He-normal hidden layers; the output layer starts at zero so an untrained
// network scores sigmoid(output bias) for every input.
inline MlpModel init_mlp(std::size_t input_dim, const MlpParams& params) {
    MlpModel model;
    model.params = params;
    model.widths.push_back(input_dim);
    for (auto h : params.hidden) model.widths.push_back(h);
    model.widths.push_back(1);

    Rng rng(mix64(params.seed ^ 0x6d6c70ULL));
    const std::size_t L = model.widths.size() - 1;
    model.W.resize(L);
    model.b.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        const std::size_t out_n = model.widths[l + 1];
        const std::size_t in_n = model.widths[l];
        model.W[l].assign(out_n * in_n, 0.0);
        model.b[l].assign(out_n, 0.0);
        if (l + 1 < L) {
            const double stddev = std::sqrt(2.0 / static_cast<double>(in_n));
            for (auto& w : model.W[l]) w = rng.normal() * stddev;
        }
    }
    return model;
}

inline MlpModel train_mlp(const FeatureMatrix& X, const std::vector<int>& y,
                          const MlpParams& params = {}) {
    if (X.rows == 0 || y.size() != X.rows) throw DataError("MLP training needs aligned X and y");
    if (X.kind == EncoderKind::kTokenIds)
        throw ConfigError("token_ids encodings are sequential; the MLP expects tabular features");

    MlpModel model = init_mlp(X.dims, params);
    Rng rng(mix64(params.seed ^ 0x7368756646ULL));

    // Adam state
    MlpGradients m1, m2, grads;
    m1.zero_like(model);
    m2.zero_like(model);
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::uint64_t step = 0;

    std::vector<std::size_t> order(X.rows);
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += params.batch_size) {
            const std::size_t end = std::min(order.size(), start + params.batch_size);
            std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(end));
            const double loss = mlp_loss_and_gradient(model, X, y, batch, grads);
            if (!std::isfinite(loss)) {
                throw TrainError("MLP training diverged: non-finite loss at epoch " +
                                 std::to_string(epoch) + ", batch " + std::to_string(n_batches));
            }
            epoch_loss += loss;
            ++n_batches;
            ++step;
            const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < model.W.size(); ++l) {
                for (std::size_t i = 0; i < model.W[l].size(); ++i) {
                    m1.W[l][i] = beta1 * m1.W[l][i] + (1 - beta1) * grads.W[l][i];
                    m2.W[l][i] = beta2 * m2.W[l][i] + (1 - beta2) * grads.W[l][i] * grads.W[l][i];
                    model.W[l][i] -= params.learning_rate * (m1.W[l][i] / corr1) /
                                     (std::sqrt(m2.W[l][i] / corr2) + eps);
                }
                for (std::size_t i = 0; i < model.b[l].size(); ++i) {
                    m1.b[l][i] = beta1 * m1.b[l][i] + (1 - beta1) * grads.b[l][i];
                    m2.b[l][i] = beta2 * m2.b[l][i] + (1 - beta2) * grads.b[l][i] * grads.b[l][i];
                    model.b[l][i] -= params.learning_rate * (m1.b[l][i] / corr1) /
                                     (std::sqrt(m2.b[l][i] / corr2) + eps);
                }
            }
        }
        model.train_loss_curve.push_back(epoch_loss / static_cast<double>(std::max<std::size_t>(1, n_batches)));
    }
    return model;
}

}  // namespace lotlkit
