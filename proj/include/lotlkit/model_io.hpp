#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lotlkit/bpe.hpp"
#include "lotlkit/encode.hpp"
#include "lotlkit/errors.hpp"
#include "lotlkit/forest.hpp"
#include "lotlkit/gbdt.hpp"
#include "lotlkit/mlp.hpp"
#include "lotlkit/rng.hpp"
#include "lotlkit/tokenize.hpp"

namespace lotlkit {

enum class ModelKind { kGbdt, kRandomForest, kMlp };

inline const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::kGbdt: return "gbdt";
        case ModelKind::kRandomForest: return "random_forest";
        case ModelKind::kMlp: return "mlp";
    }
    return "gbdt";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "gbdt") return ModelKind::kGbdt;
    if (s == "random_forest" || s == "rf") return ModelKind::kRandomForest;
    if (s == "mlp") return ModelKind::kMlp;
    throw ConfigError("unknown model kind: " + s);
}

using Model = std::variant<GbdtModel, RandomForestModel, MlpModel>;

inline ModelKind kind_of(const Model& m) {
    if (std::holds_alternative<GbdtModel>(m)) return ModelKind::kGbdt;
    if (std::holds_alternative<RandomForestModel>(m)) return ModelKind::kRandomForest;
    return ModelKind::kMlp;
}

inline std::vector<double> predict_scores(const Model& model, const FeatureMatrix& X) {
    return std::visit([&](const auto& m) { return m.predict(X); }, model);
}

// Everything needed to score raw command lines: tokenizer, encoder and model,
// plus provenance for the artifact guard.
struct ModelArtifact {
    static constexpr int kSchemaVersion = 1;

    TokenizerMode tokenizer = TokenizerMode::kWordpunct;
    std::optional<BpeModel> bpe;
    EncoderSpec encoder;
    Model model;
    std::string config_hash;
    std::string vocab_hash;
    double adversarial_rho = 0.0;
    std::size_t train_rows = 0;

    std::vector<std::string> tokenize_cmd(const std::string& cmd) const {
        return tokenize(cmd, tokenizer, bpe ? &*bpe : nullptr);
    }

    double score_tokens(const std::vector<std::string>& tokens) const {
        FeatureMatrix X = encode_matrix({tokens}, {}, encoder);
        return predict_scores(model, X)[0];
    }

    std::vector<double> score_cmds(const std::vector<std::string>& cmds) const {
        std::vector<std::vector<std::string>> docs;
        docs.reserve(cmds.size());
        for (const auto& c : cmds) docs.push_back(tokenize_cmd(c));
        FeatureMatrix X = encode_matrix(docs, {}, encoder);
        return predict_scores(model, X);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema_version"] = kSchemaVersion;
        j["config_hash"] = config_hash;
        j["vocab_hash"] = vocab_hash;
        j["tokenizer"] = to_string(tokenizer);
        j["bpe"] = bpe ? bpe->to_json() : nlohmann::json(nullptr);
        j["encoder"] = encoder.to_json();
        j["kind"] = to_string(kind_of(model));
        j["model"] = std::visit([](const auto& m) { return m.to_json(); }, model);
        j["training"] = {{"rows", train_rows}, {"adversarial_rho", adversarial_rho}};
        return j;
    }

    static ModelArtifact from_json(const nlohmann::json& j) {
        if (j.at("schema_version").get<int>() != kSchemaVersion)
            throw DataError("unsupported model artifact schema version");
        ModelArtifact art;
        art.config_hash = j.at("config_hash").get<std::string>();
        art.vocab_hash = j.at("vocab_hash").get<std::string>();
        art.tokenizer = tokenizer_mode_from_string(j.at("tokenizer").get<std::string>());
        if (!j.at("bpe").is_null()) art.bpe = BpeModel::from_json(j.at("bpe"));
        art.encoder = EncoderSpec::from_json(j.at("encoder"));
        const auto kind = model_kind_from_string(j.at("kind").get<std::string>());
        switch (kind) {
            case ModelKind::kGbdt: art.model = GbdtModel::from_json(j.at("model")); break;
            case ModelKind::kRandomForest:
                art.model = RandomForestModel::from_json(j.at("model"));
                break;
            case ModelKind::kMlp: art.model = MlpModel::from_json(j.at("model")); break;
        }
        art.train_rows = j.at("training").at("rows").get<std::size_t>();
        art.adversarial_rho = j.at("training").at("adversarial_rho").get<double>();
        return art;
    }
};

}  // namespace lotlkit
