#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "lotlkit/adversarial.hpp"
#include "lotlkit/attack_template.hpp"
#include "lotlkit/attacks.hpp"
#include "lotlkit/audit.hpp"
#include "lotlkit/baseline.hpp"
#include "lotlkit/dataset.hpp"
#include "lotlkit/distribution.hpp"
#include "lotlkit/errors.hpp"
#include "lotlkit/explain.hpp"
#include "lotlkit/metrics.hpp"
#include "lotlkit/model_io.hpp"
#include "lotlkit/record.hpp"
#include "lotlkit/signatures.hpp"

namespace lotlkit {

constexpr int kArtifactSchemaVersion = 1;

struct ExperimentConfig {
    std::uint64_t seed = 0;

    std::string templates_path = "data/templates.json";
    std::string placeholders_path = "data/placeholders.json";
    std::string adversary_baseline_path = "data/adversary_baseline.txt";
    std::string output_dir = "out";

    // Baseline source: file paths (plain commands or raw audit records), or
    // the synthetic grammar when empty.
    std::string baseline_train_path;
    std::string baseline_test_path;
    std::size_t synthetic_train_size = 20000;
    std::size_t synthetic_test_size = 20000;
    double window_seconds = 300.0;

    double alpha = 0.5;
    double train_ratio = 0.7;
    std::size_t balance_delta = 0;  // 0 = |train templates| - 1

    TokenizerMode tokenizer = TokenizerMode::kWordpunct;
    std::size_t vocab_size = 2048;
    EncoderKind encoder = EncoderKind::kOneHot;
    std::size_t minhash_k = 64;
    std::size_t max_len = 256;

    ModelKind model_kind = ModelKind::kGbdt;
    GbdtParams gbdt;
    ForestParams forest;
    MlpParams mlp;
    double adversarial_rho = 0.0;

    AttackKind attack_kind = AttackKind::kHybrid;
    double attack_param = 1.0;
    double attack_threshold = 1.0;
    std::size_t payload_chars = 64;

    std::vector<double> fpr_targets = {1e-4, 1e-5, 1e-6};

    std::string config_hash;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["seed"] = seed;
        j["paths"] = {{"templates", templates_path},
                      {"placeholders", placeholders_path},
                      {"adversary_baseline", adversary_baseline_path},
                      {"output_dir", output_dir},
                      {"baseline_train", baseline_train_path},
                      {"baseline_test", baseline_test_path}};
        j["baseline"] = {{"synthetic_train_size", synthetic_train_size},
                         {"synthetic_test_size", synthetic_test_size},
                         {"window_seconds", window_seconds}};
        j["synthesis"] = {{"alpha", alpha},
                          {"train_ratio", train_ratio},
                          {"balance_delta", balance_delta}};
        j["features"] = {{"tokenizer", to_string(tokenizer)},
                         {"vocab_size", vocab_size},
                         {"encoder", to_string(encoder)},
                         {"minhash_k", minhash_k},
                         {"max_len", max_len}};
        j["model"] = {{"kind", to_string(model_kind)},
                      {"n_estimators", gbdt.n_estimators},
                      {"max_depth", gbdt.max_depth},
                      {"learning_rate", gbdt.learning_rate},
                      {"forest_n_estimators", forest.n_estimators},
                      {"forest_max_depth", forest.max_depth},
                      {"forest_bootstrap", forest.bootstrap},
                      {"mlp_hidden", mlp.hidden},
                      {"mlp_learning_rate", mlp.learning_rate},
                      {"mlp_batch_size", mlp.batch_size},
                      {"mlp_epochs", mlp.epochs},
                      {"adversarial_rho", adversarial_rho}};
        j["attack"] = {{"kind", to_string(attack_kind)},
                       {"attack_param", attack_param},
                       {"threshold", attack_threshold},
                       {"payload_chars", payload_chars}};
        j["fpr_targets"] = fpr_targets;
        return j;
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig cfg;
        if (!j.contains("seed")) throw ConfigError("config is missing the mandatory seed");
        cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("paths")) {
            const auto& p = j.at("paths");
            cfg.templates_path = p.value("templates", cfg.templates_path);
            cfg.placeholders_path = p.value("placeholders", cfg.placeholders_path);
            cfg.adversary_baseline_path = p.value("adversary_baseline", cfg.adversary_baseline_path);
            cfg.output_dir = p.value("output_dir", cfg.output_dir);
            cfg.baseline_train_path = p.value("baseline_train", cfg.baseline_train_path);
            cfg.baseline_test_path = p.value("baseline_test", cfg.baseline_test_path);
        }
        if (j.contains("baseline")) {
            const auto& b = j.at("baseline");
            cfg.synthetic_train_size = b.value("synthetic_train_size", cfg.synthetic_train_size);
            cfg.synthetic_test_size = b.value("synthetic_test_size", cfg.synthetic_test_size);
            cfg.window_seconds = b.value("window_seconds", cfg.window_seconds);
        }
        if (j.contains("synthesis")) {
            const auto& s = j.at("synthesis");
            cfg.alpha = s.value("alpha", cfg.alpha);
            cfg.train_ratio = s.value("train_ratio", cfg.train_ratio);
            cfg.balance_delta = s.value("balance_delta", cfg.balance_delta);
        }
        if (j.contains("features")) {
            const auto& f = j.at("features");
            cfg.tokenizer = tokenizer_mode_from_string(f.value("tokenizer", "wordpunct"));
            cfg.vocab_size = f.value("vocab_size", cfg.vocab_size);
            cfg.encoder = encoder_kind_from_string(f.value("encoder", "onehot"));
            cfg.minhash_k = f.value("minhash_k", cfg.minhash_k);
            cfg.max_len = f.value("max_len", cfg.max_len);
        }
        if (j.contains("model")) {
            const auto& m = j.at("model");
            cfg.model_kind = model_kind_from_string(m.value("kind", "gbdt"));
            cfg.gbdt.n_estimators = m.value("n_estimators", cfg.gbdt.n_estimators);
            cfg.gbdt.max_depth = m.value("max_depth", cfg.gbdt.max_depth);
            cfg.gbdt.learning_rate = m.value("learning_rate", cfg.gbdt.learning_rate);
            cfg.forest.n_estimators = m.value("forest_n_estimators", cfg.forest.n_estimators);
            cfg.forest.max_depth = m.value("forest_max_depth", cfg.forest.max_depth);
            cfg.forest.bootstrap = m.value("forest_bootstrap", cfg.forest.bootstrap);
            cfg.mlp.hidden = m.value("mlp_hidden", cfg.mlp.hidden);
            cfg.mlp.learning_rate = m.value("mlp_learning_rate", cfg.mlp.learning_rate);
            cfg.mlp.batch_size = m.value("mlp_batch_size", cfg.mlp.batch_size);
            cfg.mlp.epochs = m.value("mlp_epochs", cfg.mlp.epochs);
            cfg.adversarial_rho = m.value("adversarial_rho", cfg.adversarial_rho);
        }
        if (j.contains("attack")) {
            const auto& a = j.at("attack");
            cfg.attack_kind = attack_kind_from_string(a.value("kind", "hybrid"));
            cfg.attack_param = a.value("attack_param", cfg.attack_param);
            cfg.attack_threshold = a.value("threshold", cfg.attack_threshold);
            cfg.payload_chars = a.value("payload_chars", cfg.payload_chars);
        }
        if (j.contains("fpr_targets")) cfg.fpr_targets = j.at("fpr_targets").get<std::vector<double>>();
        cfg.config_hash = hash_hex(fnv1a64(cfg.to_json().dump()));
        return cfg;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
        auto cfg = from_json(j);
        cfg.validate_paths();
        return cfg;
    }

    void rehash() { config_hash = hash_hex(fnv1a64(to_json().dump())); }

    void validate_paths() const {
        namespace fs = std::filesystem;
        auto must_exist = [](const std::string& p, const char* what) {
            if (!p.empty() && !fs::exists(p))
                throw ConfigError(std::string(what) + " file does not exist: " + p);
        };
        must_exist(templates_path, "templates");
        must_exist(placeholders_path, "placeholder registry");
        must_exist(baseline_train_path, "train baseline");
        must_exist(baseline_test_path, "test baseline");
    }
};

namespace detail {

inline nlohmann::json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DataError(std::string("cannot open ") + what + ": " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError(std::string(what) + " is not valid JSON: " + path);
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("short write to file: " + path);
}

// Removes declared outputs when a step throws part-way.
class OutputGuard {
public:
    void track(const std::string& path) { paths_.push_back(path); }
    void commit() { committed_ = true; }
    ~OutputGuard() {
        if (committed_) return;
        for (const auto& p : paths_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }

private:
    std::vector<std::string> paths_;
    bool committed_ = false;
};

inline std::string meta_path_for(const std::string& dataset_path) {
    const auto dot = dataset_path.rfind(".jsonl");
    if (dot != std::string::npos && dot == dataset_path.size() - 6)
        return dataset_path.substr(0, dot) + ".meta.json";
    return dataset_path + ".meta.json";
}

}  // namespace detail

// Newline-delimited baseline input: raw audit records are detected by the
// EXECVE marker and pushed through windowed aggregation; anything else is
// treated as one command per line. Deduplicated byte-exact either way.
inline std::vector<CommandRecord> load_baseline_file(const std::string& path, Split split,
                                                     double window_seconds) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open baseline file: " + path);
    std::vector<std::string> lines;
    std::string line;
    bool audit = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.find("type=EXECVE") != std::string::npos) audit = true;
        lines.push_back(line);
    }
    if (lines.empty()) throw DataError("baseline file is empty: " + path);

    std::vector<std::string> cmds;
    if (audit) {
        std::vector<ExecveEvent> events;
        for (const auto& l : lines) {
            if (l.find("type=EXECVE") == std::string::npos) continue;
            events.push_back(parse_execve_record(l));
        }
        cmds = aggregate_window(events, window_seconds);
    } else {
        std::unordered_set<std::string> seen;
        for (const auto& l : lines)
            if (seen.insert(l).second) cmds.push_back(l);
    }

    std::vector<CommandRecord> records;
    records.reserve(cmds.size());
    for (auto& c : cmds) records.push_back(make_baseline_record(std::move(c), split));
    return records;
}

inline std::vector<std::string> load_adversary_baseline(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open adversary baseline: " + path);
    std::vector<std::string> cmds;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) cmds.push_back(line);
    if (cmds.empty()) throw DataError("adversary baseline is empty: " + path);
    return cmds;
}

struct SynthResult {
    std::string train_path;
    std::string test_path;
    std::size_t train_malicious = 0;
    std::size_t test_malicious = 0;
    std::vector<std::string> warnings;
};

inline SynthResult run_synth(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);

    auto templates = templates_from_json(detail::read_json_file(cfg.templates_path, "templates"));
    auto registry =
        PlaceholderRegistry::from_json(detail::read_json_file(cfg.placeholders_path, "placeholders"));
    for (const auto& t : templates) {
        for (const auto& name : placeholders_in(t.pattern, registry)) {
            if (!registry.contains(name))
                throw ConfigError("template " + t.id + " uses unknown placeholder " + name);
        }
    }

    std::vector<CommandRecord> baseline_train, baseline_test;
    if (!cfg.baseline_train_path.empty()) {
        baseline_train = load_baseline_file(cfg.baseline_train_path, Split::kTrain, cfg.window_seconds);
        baseline_test = cfg.baseline_test_path.empty()
                            ? std::vector<CommandRecord>{}
                            : load_baseline_file(cfg.baseline_test_path, Split::kTest, cfg.window_seconds);
    } else {
        BaselineGrammar grammar;
        baseline_train = grammar.generate_records(cfg.synthetic_train_size,
                                                  mix64(cfg.seed ^ 0x62747261696eULL), Split::kTrain);
        baseline_test = grammar.generate_records(cfg.synthetic_test_size,
                                                 mix64(cfg.seed ^ 0x6274657374ULL), Split::kTest);
    }
    if (baseline_test.empty()) throw DataError("test baseline is empty");

    auto [train_templates, test_templates] =
        split_templates(templates, cfg.train_ratio, cfg.seed);

    SynthesisConfig synth;
    synth.alpha = cfg.alpha;
    synth.train_ratio = cfg.train_ratio;
    synth.seed = cfg.seed;
    synth.target_balance_delta = cfg.balance_delta;
    auto built = build_dataset(train_templates, test_templates, baseline_train, baseline_test,
                               registry, synth);

    SynthResult result;
    result.warnings = built.warnings;
    for (const auto& r : built.train) result.train_malicious += static_cast<std::size_t>(r.label == 1);
    for (const auto& r : built.test) result.test_malicious += static_cast<std::size_t>(r.label == 1);
    result.train_path = (fs::path(cfg.output_dir) / "train.jsonl").string();
    result.test_path = (fs::path(cfg.output_dir) / "test.jsonl").string();

    detail::OutputGuard guard;
    guard.track(result.train_path);
    guard.track(result.test_path);

    save_records_jsonl(built.train, result.train_path);
    save_records_jsonl(built.test, result.test_path);

    auto write_meta = [&](const std::string& dataset_path, const std::vector<CommandRecord>& recs,
                          const char* split_name) {
        nlohmann::json meta;
        meta["schema_version"] = kArtifactSchemaVersion;
        meta["kind"] = "dataset";
        meta["config_hash"] = cfg.config_hash;
        meta["split"] = split_name;
        std::size_t malicious = 0;
        for (const auto& r : recs) malicious += static_cast<std::size_t>(r.label == 1);
        meta["records"] = recs.size();
        meta["malicious"] = malicious;
        meta["benign"] = recs.size() - malicious;
        meta["warnings"] = built.warnings;
        const auto meta_path = detail::meta_path_for(dataset_path);
        guard.track(meta_path);
        detail::write_text_file(meta_path, meta.dump(2) + "\n");
    };
    write_meta(result.train_path, built.train, "train");
    write_meta(result.test_path, built.test, "test");
    guard.commit();
    return result;
}

struct TrainResult {
    std::string model_path;
    std::size_t rows = 0;
};

inline ModelArtifact train_from_records(const ExperimentConfig& cfg,
                                        std::vector<CommandRecord> records) {
    if (cfg.adversarial_rho > 0.0)
        records = augment_adversarial(records, cfg.adversarial_rho, cfg.seed);

    std::vector<std::string> cmds;
    std::vector<int> labels;
    cmds.reserve(records.size());
    for (const auto& r : records) {
        cmds.push_back(r.cmd);
        labels.push_back(r.label);
    }

    ModelArtifact art;
    art.tokenizer = cfg.tokenizer;
    if (cfg.tokenizer == TokenizerMode::kBpe)
        art.bpe = train_bpe(cmds, cfg.vocab_size, cfg.seed);

    std::vector<std::vector<std::string>> docs;
    docs.reserve(cmds.size());
    for (const auto& c : cmds) docs.push_back(tokenize(c, cfg.tokenizer, art.bpe ? &*art.bpe : nullptr));

    auto vocabulary = Vocabulary::build(docs, cfg.vocab_size);
    EncoderParams ep;
    ep.minhash_k = cfg.minhash_k;
    ep.max_len = cfg.max_len;
    art.encoder = fit_encoder(cfg.encoder, docs, vocabulary, ep);

    FeatureMatrix X = encode_matrix(docs, labels, art.encoder);

    switch (cfg.model_kind) {
        case ModelKind::kGbdt: art.model = train_gbdt(X, labels, cfg.gbdt); break;
        case ModelKind::kRandomForest: {
            ForestParams fp = cfg.forest;
            fp.seed = cfg.seed;
            art.model = train_random_forest(X, labels, fp);
            break;
        }
        case ModelKind::kMlp: {
            MlpParams mp = cfg.mlp;
            mp.seed = cfg.seed;
            art.model = train_mlp(X, labels, mp);
            break;
        }
    }
    art.config_hash = cfg.config_hash;
    art.vocab_hash = vocabulary.content_hash();
    art.adversarial_rho = cfg.adversarial_rho;
    art.train_rows = records.size();
    return art;
}

inline TrainResult run_train(const ExperimentConfig& cfg, const std::string& dataset_path,
                             const std::string& model_out) {
    auto records = load_records_jsonl(dataset_path);
    if (records.empty()) throw DataError("training dataset is empty: " + dataset_path);

    ModelArtifact art = train_from_records(cfg, std::move(records));

    detail::OutputGuard guard;
    guard.track(model_out);
    detail::write_text_file(model_out, art.to_json().dump() + "\n");
    guard.commit();
    return TrainResult{model_out, art.train_rows};
}

inline std::string run_attack(const ExperimentConfig& cfg, const std::string& dataset_path,
                              const std::string& out_path) {
    auto records = load_records_jsonl(dataset_path);
    AttackConfig attack;
    attack.kind = cfg.attack_kind;
    attack.attack_param = cfg.attack_param;
    attack.threshold = cfg.attack_threshold;
    attack.payload_chars = cfg.payload_chars;
    attack.seed = cfg.seed;
    if (attack.kind != AttackKind::kShellEscape)
        attack.adversary_baseline = load_adversary_baseline(cfg.adversary_baseline_path);

    auto attacked = attack_dataset(records, attack);

    detail::OutputGuard guard;
    guard.track(out_path);
    save_records_jsonl(attacked, out_path);

    nlohmann::json meta;
    meta["schema_version"] = kArtifactSchemaVersion;
    meta["kind"] = "attacked_dataset";
    meta["config_hash"] = cfg.config_hash;
    meta["attack"] = to_string(attack.kind);
    meta["attack_param"] = attack.attack_param;
    meta["threshold"] = attack.threshold;
    meta["payload_chars"] = attack.payload_chars;
    meta["source"] = dataset_path;
    const auto meta_path = detail::meta_path_for(out_path);
    guard.track(meta_path);
    detail::write_text_file(meta_path, meta.dump(2) + "\n");
    guard.commit();
    return out_path;
}

inline ModelArtifact load_model_artifact(const std::string& path) {
    return ModelArtifact::from_json(detail::read_json_file(path, "model artifact"));
}

// Provenance guard: the model and dataset must come from the same experiment
// config unless the caller forces the pairing.
inline void check_provenance(const ModelArtifact& art, const std::string& dataset_path,
                             bool force) {
    const auto meta_path = detail::meta_path_for(dataset_path);
    if (!std::filesystem::exists(meta_path)) return;  // external datasets carry no meta
    const auto meta = detail::read_json_file(meta_path, "dataset meta");
    const auto dataset_hash = meta.value("config_hash", std::string{});
    if (dataset_hash.empty() || force) return;
    if (dataset_hash != art.config_hash) {
        throw DataError("model/dataset provenance mismatch: model config hash " + art.config_hash +
                        " vs dataset config hash " + dataset_hash + " (pass --force to override)");
    }
}

struct EvalOutputs {
    EvalReport report;
    DistributionReport diagnostics;
    std::string report_path;
    std::string roc_path;
};

inline EvalOutputs run_eval(const ExperimentConfig& cfg, const std::string& model_path,
                            const std::string& dataset_path, const std::string& report_out,
                            const std::string& roc_out, bool force = false) {
    auto art = load_model_artifact(model_path);
    check_provenance(art, dataset_path, force);
    auto records = load_records_jsonl(dataset_path);
    if (records.empty()) throw DataError("evaluation dataset is empty: " + dataset_path);

    std::vector<std::string> cmds;
    std::vector<int> labels;
    for (const auto& r : records) {
        cmds.push_back(r.cmd);
        labels.push_back(r.label);
    }
    auto scores = art.score_cmds(cmds);

    EvalOutputs out;
    out.report = summary_metrics(scores, labels, cfg.fpr_targets);
    out.diagnostics = distribution_report(records, art.tokenizer, art.bpe ? &*art.bpe : nullptr);
    auto curve = roc_curve(scores, labels);

    nlohmann::json j;
    j["schema_version"] = kArtifactSchemaVersion;
    j["config_hash"] = cfg.config_hash;
    j["model"] = model_path;
    j["model_kind"] = to_string(kind_of(art.model));
    j["dataset"] = dataset_path;
    j["auc"] = out.report.auc;
    j["f1"] = out.report.f1;
    j["accuracy"] = out.report.accuracy;
    j["tpr_at_fpr"] = out.report.tpr_at_fpr;
    j["confusion"] = {{"tp", out.report.confusion.tp},
                      {"fp", out.report.confusion.fp},
                      {"tn", out.report.confusion.tn},
                      {"fn", out.report.confusion.fn}};
    j["diagnostics"] = distribution_to_json(out.diagnostics);

    detail::OutputGuard guard;
    guard.track(report_out);
    detail::write_text_file(report_out, j.dump(2) + "\n");
    if (!roc_out.empty()) {
        guard.track(roc_out);
        detail::write_text_file(roc_out, roc_to_csv(curve));
    }
    guard.commit();
    out.report_path = report_out;
    out.roc_path = roc_out;
    return out;
}

inline std::string run_explain(const ExperimentConfig& cfg, const std::string& model_path,
                               const std::string& dataset_path, const std::string& out_path,
                               std::size_t top_k = 20, std::size_t max_samples = 200,
                               bool force = false) {
    auto art = load_model_artifact(model_path);
    check_provenance(art, dataset_path, force);
    auto records = load_records_jsonl(dataset_path);

    // deterministic subset: first half malicious, first half benign
    std::vector<CommandRecord> samples;
    std::size_t took_pos = 0, took_neg = 0;
    for (const auto& r : records) {
        if (r.label == 1 && took_pos < max_samples / 2) {
            samples.push_back(r);
            ++took_pos;
        } else if (r.label == 0 && took_neg < max_samples / 2) {
            samples.push_back(r);
            ++took_neg;
        }
        if (took_pos + took_neg >= max_samples) break;
    }
    if (samples.empty()) throw DataError("no samples available for attribution");

    auto tokenizer_fn = [&](const std::string& cmd) { return art.tokenize_cmd(cmd); };
    auto score_fn = [&](const std::vector<std::string>& tokens) { return art.score_tokens(tokens); };
    auto attrs = occlusion_attribution(samples, tokenizer_fn, score_fn, art.encoder.vocabulary, top_k);

    nlohmann::json j;
    j["schema_version"] = kArtifactSchemaVersion;
    j["config_hash"] = cfg.config_hash;
    j["model"] = model_path;
    j["method"] = "occlusion";
    j["samples"] = samples.size();
    j["attributions"] = attributions_to_json(attrs);

    if (std::holds_alternative<GbdtModel>(art.model) ||
        std::holds_alternative<RandomForestModel>(art.model)) {
        auto gains = std::holds_alternative<GbdtModel>(art.model)
                         ? tree_gain_importance(std::get<GbdtModel>(art.model))
                         : tree_gain_importance(std::get<RandomForestModel>(art.model));
        std::vector<std::pair<double, std::uint32_t>> ranked;
        for (const auto& [f, g] : gains) ranked.emplace_back(g, f);
        std::sort(ranked.rbegin(), ranked.rend());
        nlohmann::json gain_json = nlohmann::json::array();
        const bool token_features =
            art.encoder.kind == EncoderKind::kOneHot || art.encoder.kind == EncoderKind::kTfidf;
        for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i) {
            nlohmann::json entry;
            entry["feature"] = ranked[i].second;
            entry["gain"] = ranked[i].first;
            if (token_features) entry["token"] = art.encoder.vocabulary.token(ranked[i].second);
            gain_json.push_back(entry);
        }
        j["gain_importance"] = gain_json;
    }

    detail::OutputGuard guard;
    guard.track(out_path);
    detail::write_text_file(out_path, j.dump(2) + "\n");
    guard.commit();
    return out_path;
}

inline std::string run_report(const std::vector<std::string>& report_paths,
                              const std::string& out_csv) {
    if (report_paths.empty()) throw ConfigError("report merge needs at least one input");
    std::string csv = "report,model_kind,dataset,auc,f1,accuracy,tpr@1e-4,tpr@1e-5,tpr@1e-6\n";
    char buf[256];
    for (const auto& path : report_paths) {
        const auto j = detail::read_json_file(path, "evaluation report");
        auto tpr = [&](const char* key) {
            const auto& m = j.at("tpr_at_fpr");
            return m.contains(key) ? m.at(key).get<double>() : 0.0;
        };
        std::snprintf(buf, sizeof(buf), "%s,%s,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", path.c_str(),
                      j.value("model_kind", std::string("?")).c_str(),
                      j.value("dataset", std::string("?")).c_str(), j.at("auc").get<double>(),
                      j.at("f1").get<double>(), j.at("accuracy").get<double>(), tpr("1e-4"),
                      tpr("1e-5"), tpr("1e-6"));
        csv += buf;
    }
    detail::OutputGuard guard;
    guard.track(out_csv);
    detail::write_text_file(out_csv, csv);
    guard.commit();
    return out_csv;
}

}  // namespace lotlkit
