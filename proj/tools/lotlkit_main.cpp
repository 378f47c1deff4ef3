#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lotlkit/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitTrain = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

lotlkit::ExperimentConfig load_config(const CommonOpts& opts) {
    std::string path = opts.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("LOTLKIT_CONFIG")) path = env;
    }
    if (path.empty()) throw lotlkit::ConfigError("no config given (use --config or LOTLKIT_CONFIG)");
    auto cfg = lotlkit::ExperimentConfig::load(path);
    bool changed = false;
    if (!opts.out_dir.empty()) {
        cfg.output_dir = opts.out_dir;
        changed = true;
    }
    if (opts.seed_set) {
        cfg.seed = opts.seed;
        changed = true;
    }
    if (changed) cfg.rehash();
    return cfg;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"LOTL reverse-shell detection pipeline"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string dataset, model_path, out_path, roc_path, report_out;
    std::string attack_kind, model_kind, encoder_kind, tokenizer_mode;
    double rho = -1.0, attack_param = -1.0, attack_threshold = -1.0;
    std::size_t top_k = 20, max_samples = 200;
    bool force = false;
    std::vector<std::string> report_inputs;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "experiment config JSON");
        cmd->add_option("--out-dir", opts.out_dir, "override output directory");
        cmd->add_option("--seed", opts.seed, "override seed")->each([&](const std::string&) {
            opts.seed_set = true;
        });
    };

    auto* synth = app.add_subcommand("synth", "generate the train/test dataset");
    add_common(synth);

    auto* train = app.add_subcommand("train", "train a classifier on a dataset");
    add_common(train);
    train->add_option("--dataset", dataset, "training dataset JSONL")->required();
    train->add_option("--model-out", model_path, "model artifact path")->required();
    train->add_option("--rho", rho, "adversarial training fraction");
    train->add_option("--model", model_kind, "model kind: gbdt|random_forest|mlp");
    train->add_option("--encoder", encoder_kind, "encoder: onehot|tfidf|minhash|token_ids");
    train->add_option("--tokenizer", tokenizer_mode, "tokenizer: whitespace|wordpunct|bpe");

    auto* attack = app.add_subcommand("attack", "apply an evasion attack to a dataset");
    add_common(attack);
    attack->add_option("--dataset", dataset, "dataset JSONL to perturb")->required();
    attack->add_option("--out", out_path, "attacked dataset path")->required();
    attack->add_option("--kind", attack_kind, "benign_injection|shell_escape|hybrid");
    attack->add_option("--param", attack_param, "hybrid attack parameter in [0,1]");
    attack->add_option("--threshold", attack_threshold, "escape action probability");

    auto* eval = app.add_subcommand("eval", "score a dataset and emit a report");
    add_common(eval);
    eval->add_option("--model", model_path, "model artifact")->required();
    eval->add_option("--dataset", dataset, "dataset JSONL")->required();
    eval->add_option("--out", report_out, "report JSON path")->required();
    eval->add_option("--roc-csv", roc_path, "ROC curve CSV path");
    eval->add_flag("--force", force, "skip the provenance check");

    auto* explain = app.add_subcommand("explain", "token attribution for a trained model");
    add_common(explain);
    explain->add_option("--model", model_path, "model artifact")->required();
    explain->add_option("--dataset", dataset, "dataset JSONL")->required();
    explain->add_option("--out", out_path, "attribution JSON path")->required();
    explain->add_option("--top-k", top_k, "attributions to keep");
    explain->add_option("--max-samples", max_samples, "samples to occlude");
    explain->add_flag("--force", force, "skip the provenance check");

    auto* report = app.add_subcommand("report", "merge evaluation reports into a table");
    report->add_option("--inputs", report_inputs, "report JSON files")->required();
    report->add_option("--out", out_path, "merged CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    if (synth->parsed()) {
        auto cfg = load_config(opts);
        auto result = lotlkit::run_synth(cfg);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << result.train_path << " (" << result.train_malicious << " malicious)\n"
                  << result.test_path << " (" << result.test_malicious << " malicious)\n";
    } else if (train->parsed()) {
        auto cfg = load_config(opts);
        bool changed = false;
        if (rho >= 0.0) {
            cfg.adversarial_rho = rho;
            changed = true;
        }
        if (!model_kind.empty()) {
            cfg.model_kind = lotlkit::model_kind_from_string(model_kind);
            changed = true;
        }
        if (!encoder_kind.empty()) {
            cfg.encoder = lotlkit::encoder_kind_from_string(encoder_kind);
            changed = true;
        }
        if (!tokenizer_mode.empty()) {
            cfg.tokenizer = lotlkit::tokenizer_mode_from_string(tokenizer_mode);
            changed = true;
        }
        if (changed) cfg.rehash();
        auto result = lotlkit::run_train(cfg, dataset, model_path);
        std::cout << result.model_path << " (" << result.rows << " rows)\n";
    } else if (attack->parsed()) {
        auto cfg = load_config(opts);
        bool changed = false;
        if (!attack_kind.empty()) {
            cfg.attack_kind = lotlkit::attack_kind_from_string(attack_kind);
            changed = true;
        }
        if (attack_param >= 0.0) {
            cfg.attack_param = attack_param;
            changed = true;
        }
        if (attack_threshold >= 0.0) {
            cfg.attack_threshold = attack_threshold;
            changed = true;
        }
        if (changed) cfg.rehash();
        std::cout << lotlkit::run_attack(cfg, dataset, out_path) << "\n";
    } else if (eval->parsed()) {
        auto cfg = load_config(opts);
        auto result = lotlkit::run_eval(cfg, model_path, dataset, report_out, roc_path, force);
        std::cout << result.report_path << " auc=" << result.report.auc
                  << " f1=" << result.report.f1 << "\n";
    } else if (explain->parsed()) {
        auto cfg = load_config(opts);
        std::cout << lotlkit::run_explain(cfg, model_path, dataset, out_path, top_k, max_samples,
                                          force)
                  << "\n";
    } else if (report->parsed()) {
        std::cout << lotlkit::run_report(report_inputs, out_path) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const lotlkit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const lotlkit::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const lotlkit::TrainError& e) {
        std::cerr << "training error: " << e.what() << "\n";
        return kExitTrain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
