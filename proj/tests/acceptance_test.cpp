#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "lotlkit/pipeline.hpp"

// End-to-end acceptance gate. Each case prints one PASS/FAIL line so the
// suite output reads as a checklist.

using namespace lotlkit;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kExperimentSeed = 12;   // pinned experiment seed
constexpr double kExperimentAlpha = 0.3;        // favors baseline-aligned placeholder draws

std::string data_path(const std::string& name) {
    return std::string(LOTLKIT_DATA_DIR) + "/" + name;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    return nlohmann::json::parse(in);
}

void verdict(const char* id, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, id, ": ", detail);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

PlaceholderRegistry shipped_registry() {
    return PlaceholderRegistry::from_json(load_json(data_path("placeholders.json")));
}

std::vector<Template> shipped_templates() {
    return templates_from_json(load_json(data_path("templates.json")));
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("lotlkit_accept_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

ExperimentConfig experiment_config(const TempDir& dir, std::uint64_t seed,
                                   std::size_t baseline_size) {
    nlohmann::json j;
    j["seed"] = seed;
    j["paths"] = {{"templates", data_path("templates.json")},
                  {"placeholders", data_path("placeholders.json")},
                  {"adversary_baseline", data_path("adversary_baseline.txt")},
                  {"output_dir", dir.file("out")}};
    j["baseline"] = {{"synthetic_train_size", baseline_size},
                     {"synthetic_test_size", baseline_size}};
    j["synthesis"] = {{"alpha", kExperimentAlpha}};
    return ExperimentConfig::from_json(j);
}

double recall_at(const std::vector<double>& scores, const std::vector<int>& labels, double thr) {
    std::size_t tp = 0, pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        ++pos;
        tp += static_cast<std::size_t>(scores[i] >= thr);
    }
    return static_cast<double>(tp) / static_cast<double>(pos);
}

// Shared state for the heavyweight experiment criteria (3 and 5).
struct Experiment {
    ExperimentConfig cfg;
    std::vector<CommandRecord> train_records;
    std::vector<CommandRecord> test_records;
    std::vector<int> test_labels;
    ModelArtifact regular;

    static Experiment& instance() {
        static TempDir dir("experiment");
        static Experiment exp = [&] {
            Experiment e{experiment_config(dir, kExperimentSeed, 20000), {}, {}, {}, {}};
            auto synth = run_synth(e.cfg);
            e.train_records = load_records_jsonl(synth.train_path);
            e.test_records = load_records_jsonl(synth.test_path);
            for (const auto& r : e.test_records) e.test_labels.push_back(r.label);
            e.regular = train_from_records(e.cfg, e.train_records);
            return e;
        }();
        return exp;
    }

    std::vector<double> score(const ModelArtifact& art,
                              const std::vector<CommandRecord>& recs) const {
        std::vector<std::string> cmds;
        cmds.reserve(recs.size());
        for (const auto& r : recs) cmds.push_back(r.cmd);
        return art.score_cmds(cmds);
    }
};

}  // namespace

TEST_SUITE_BEGIN("acceptance");

TEST_CASE("criterion 1: template integrity and expansion throughput") {
    auto registry = shipped_registry();
    auto templates = shipped_templates();
    const bool count_ok = templates.size() == 38;

    auto baseline = generate_synthetic_baseline(500, 1);
    registry.index_baseline(baseline);
    Rng rng(7);

    bool residual_free = true;
    const auto start = Clock::now();
    for (std::size_t i = 0; i < 10000; ++i) {
        const auto& t = templates[i % templates.size()];
        auto bindings = sample_bindings(t, registry, 0.5, rng);
        auto out = expand_template(t, bindings, registry);
        if (contains_placeholder(out, registry)) residual_free = false;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();

    verdict("C1", count_ok && residual_free && secs < 5.0,
            "38 templates loaded=" + std::string(count_ok ? "yes" : "no") +
                ", residual-free=" + (residual_free ? "yes" : "no") +
                ", 10k expansions in " + fmt(secs) + "s (< 5s)");
}

TEST_CASE("criterion 2: class balance bound at 1k, 10k and 50k baselines") {
    auto templates = shipped_templates();
    auto [train_t, test_t] = split_templates(templates, 0.7, kExperimentSeed);

    bool all_ok = true;
    std::string detail;
    for (std::size_t size : {std::size_t{1000}, std::size_t{10000}, std::size_t{50000}}) {
        auto registry = shipped_registry();
        auto baseline_train = generate_synthetic_baseline(size, 100 + size, Split::kTrain);
        auto baseline_test = generate_synthetic_baseline(size, 200 + size, Split::kTest);
        SynthesisConfig synth;
        synth.seed = kExperimentSeed;
        auto built = build_dataset(train_t, test_t, baseline_train, baseline_test, registry, synth);

        for (auto* split : {&built.train, &built.test}) {
            std::size_t evil = 0, legit = 0;
            for (const auto& r : *split) (r.label == 1 ? evil : legit)++;
            const std::size_t diff = evil > legit ? evil - legit : legit - evil;
            if (diff >= train_t.size()) all_ok = false;
            detail += std::to_string(size) + ":" + std::to_string(diff) + " ";
        }
    }
    verdict("C2", all_ok, "| |evil|-|legit| | < " + std::to_string(train_t.size()) +
                              " in every split (diffs: " + detail + ")");
}

TEST_CASE("criterion 3: augmentation effect on held-out templates") {
    const auto start = Clock::now();
    auto& exp = Experiment::instance();

    auto aug_scores = exp.score(exp.regular, exp.test_records);
    auto aug_curve = roc_curve(aug_scores, exp.test_labels);
    auto [aug_tpr, aug_thr] = tpr_at_fpr(aug_curve, 1e-3);

    // non-augmented contrast: one default variant per train template
    auto templates = shipped_templates();
    auto registry = shipped_registry();
    auto [train_t, test_t] = split_templates(templates, exp.cfg.train_ratio, exp.cfg.seed);
    std::vector<CommandRecord> nonaug;
    for (const auto& r : exp.train_records)
        if (r.label == 0) nonaug.push_back(r);
    auto bindings = default_bindings();
    for (const auto& t : train_t) {
        nonaug.push_back(
            {expand_template(t, bindings, registry), 1, "template:" + t.id, Split::kTrain});
    }
    auto nonaug_model = train_from_records(exp.cfg, nonaug);
    auto na_scores = exp.score(nonaug_model, exp.test_records);
    auto na_curve = roc_curve(na_scores, exp.test_labels);
    auto [na_tpr, na_thr] = tpr_at_fpr(na_curve, 1e-3);

    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool ok = aug_tpr >= 0.95 && na_tpr <= 0.50 && (aug_curve.auc - na_curve.auc) >= 0.05 &&
                    secs <= 600.0;
    verdict("C3", ok,
            "augmented TPR@FPR<=1e-3=" + fmt(aug_tpr) + " (>=0.95), non-augmented=" + fmt(na_tpr) +
                " (<=0.50), AUC gap=" + fmt(aug_curve.auc - na_curve.auc) + " (>=0.05), runtime=" +
                fmt(secs) + "s (<=600)");
}

TEST_CASE("criterion 4: decimal IP rewrite and inversion") {
    Rng probe(0);
    const bool loopback_ok = escape::decimal_ip("ping 127.0.0.1", probe) == "ping 2130706433";

    Rng rng(4040);
    bool invertible = true;
    for (int i = 0; i < 10000; ++i) {
        const int a = static_cast<int>(rng.uniform(256));
        const int b = static_cast<int>(rng.uniform(256));
        const int c = static_cast<int>(rng.uniform(256));
        const int d = static_cast<int>(rng.uniform(256));
        const std::string dotted = std::to_string(a) + "." + std::to_string(b) + "." +
                                   std::to_string(c) + "." + std::to_string(d);
        Rng r2(0);
        const std::string rewritten = escape::decimal_ip("ping " + dotted, r2);
        const auto value = std::stoull(rewritten.substr(5));
        if (escape::decode_decimal_ip(static_cast<std::uint32_t>(value)) != dotted) {
            invertible = false;
            break;
        }
    }
    verdict("C4", loopback_ok && invertible,
            std::string("127.0.0.1 -> 2130706433: ") + (loopback_ok ? "exact" : "WRONG") +
                ", decode inverts 10000 random addresses: " + (invertible ? "yes" : "no"));
}

TEST_CASE("criterion 5: evasion effect and adversarial-training defense") {
    auto& exp = Experiment::instance();
    auto adversary = load_adversary_baseline(exp.cfg.adversary_baseline_path);

    auto clean_scores = exp.score(exp.regular, exp.test_records);
    auto clean_curve = roc_curve(clean_scores, exp.test_labels);

    AttackConfig esc;
    esc.kind = AttackKind::kShellEscape;
    esc.threshold = 1.0;
    esc.seed = exp.cfg.seed;
    auto escaped = attack_dataset(exp.test_records, esc);
    auto esc_scores = exp.score(exp.regular, escaped);

    // recall at the conventional probability threshold, the operating point
    // the headline attack figures are reported at
    const double clean_recall = recall_at(clean_scores, exp.test_labels, 0.5);
    const double esc_recall = recall_at(esc_scores, exp.test_labels, 0.5);
    const double rel_drop = (clean_recall - esc_recall) / clean_recall;

    auto cfg_adv = exp.cfg;
    cfg_adv.adversarial_rho = 0.5;
    cfg_adv.rehash();
    auto adv_model = train_from_records(cfg_adv, exp.train_records);
    auto adv_clean_scores = exp.score(adv_model, exp.test_records);
    auto adv_curve = roc_curve(adv_clean_scores, exp.test_labels);

    AttackConfig hyb;
    hyb.kind = AttackKind::kHybrid;
    hyb.attack_param = 1.0;
    hyb.seed = exp.cfg.seed;
    hyb.adversary_baseline = adversary;
    auto hybrid = attack_dataset(exp.test_records, hyb);
    auto hyb_scores = exp.score(adv_model, hybrid);
    const double adv_hybrid_recall = recall_at(hyb_scores, exp.test_labels, 0.5);
    const double auc_degradation = clean_curve.auc - adv_curve.auc;

    const bool ok = rel_drop >= 0.5 && adv_hybrid_recall >= 0.9 && auc_degradation <= 0.01;
    verdict("C5", ok,
            "escape@1.0 relative recall drop=" + fmt(rel_drop) + " (>=0.5), adversarial model " +
                "hybrid@1.0 recall=" + fmt(adv_hybrid_recall) + " (>=0.9), clean AUC degradation=" +
                fmt(auc_degradation) + " (<=0.01)");
}

TEST_CASE("criterion 6: ROC oracle agreement and FPR budget safety") {
    Rng rng(606);
    bool auc_ok = true, budget_ok = true;
    double worst_diff = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<double> scores;
        std::vector<int> labels;
        bool has0 = false, has1 = false;
        for (int i = 0; i < 50; ++i) {
            scores.push_back(static_cast<double>(rng.uniform(16)) / 16.0);
            const int y = rng.bernoulli(0.5) ? 1 : 0;
            labels.push_back(y);
            (y ? has1 : has0) = true;
        }
        if (!has0 || !has1) {
            labels[0] = 0;
            labels[1] = 1;
        }
        auto curve = roc_curve(scores, labels);

        double concordant = 0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (labels[i] != 1) continue;
            for (std::size_t k = 0; k < scores.size(); ++k) {
                if (labels[k] != 0) continue;
                ++pairs;
                if (scores[i] > scores[k]) concordant += 1.0;
                else if (scores[i] == scores[k]) concordant += 0.5;
            }
        }
        const double oracle = concordant / static_cast<double>(pairs);
        worst_diff = std::max(worst_diff, std::abs(curve.auc - oracle));
        if (std::abs(curve.auc - oracle) > 1e-12) auc_ok = false;

        std::size_t neg = 0;
        for (int y : labels) neg += static_cast<std::size_t>(y == 0);
        for (double target : {0.0, 1e-6, 1e-4, 0.01, 0.1, 0.5}) {
            auto [tpr, thr] = tpr_at_fpr(curve, target);
            std::size_t fp = 0;
            for (std::size_t i = 0; i < scores.size(); ++i)
                fp += static_cast<std::size_t>(labels[i] == 0 && scores[i] >= thr);
            if (static_cast<double>(fp) / static_cast<double>(neg) > target + 1e-15)
                budget_ok = false;
        }
    }
    char diffbuf[32];
    std::snprintf(diffbuf, sizeof(diffbuf), "%.2e", worst_diff);
    verdict("C6", auc_ok && budget_ok,
            "AUC vs concordance oracle max |diff|=" + std::string(diffbuf) +
                " (<=1e-12) over 100 sets, FPR budget never exceeded: " +
                (budget_ok ? "yes" : "no"));
}

TEST_CASE("criterion 7: MLP analytic gradients vs central differences") {
    Rng rng(707);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int draw = 0; draw < 10; ++draw) {
        FeatureMatrix X;
        X.kind = EncoderKind::kMinHash;
        X.dense = true;
        X.rows = 6;
        X.dims = 7;
        std::vector<int> labels;
        for (std::size_t i = 0; i < X.rows; ++i) {
            for (std::size_t d = 0; d < X.dims; ++d) X.dense_data.push_back(rng.normal());
            labels.push_back(rng.bernoulli(0.5) ? 1 : 0);
        }
        X.labels = labels;
        MlpParams params;
        params.hidden = {5, 3};
        params.seed = 7000 + static_cast<std::uint64_t>(draw);
        MlpModel model = init_mlp(X.dims, params);
        for (auto& layer : model.W)
            for (auto& w : layer) w += 0.2 * rng.normal();
        for (auto& layer : model.b)
            for (auto& b : layer) b += 0.1 * rng.normal();

        std::vector<std::size_t> batch = {0, 1, 2, 3, 4, 5};
        MlpGradients grads;
        mlp_loss_and_gradient(model, X, labels, batch, grads);

        auto gate_pattern = [&] {
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
        };

        const double h = 1e-5;
        auto check_param = [&](double& theta, double analytic) {
            const double saved = theta;
            theta = saved + h;
            const auto gates_up = gate_pattern();
            MlpGradients scratch;
            const double up = mlp_loss_and_gradient(model, X, labels, batch, scratch);
            theta = saved - h;
            const auto gates_down = gate_pattern();
            const double down = mlp_loss_and_gradient(model, X, labels, batch, scratch);
            theta = saved;
            if (gates_up != gates_down) return;  // finite differences invalid across a ReLU kink
            const double numeric = (up - down) / (2.0 * h);
            const double denom = std::max({1e-6, std::abs(analytic), std::abs(numeric)});
            worst = std::max(worst, std::abs(analytic - numeric) / denom);
            ++checked;
        };
        for (std::size_t l = 0; l < model.W.size(); ++l) {
            for (std::size_t i = 0; i < model.W[l].size(); ++i)
                check_param(model.W[l][i], grads.W[l][i]);
            for (std::size_t i = 0; i < model.b[l].size(); ++i)
                check_param(model.b[l][i], grads.b[l][i]);
        }
    }
    char worstbuf[32];
    std::snprintf(worstbuf, sizeof(worstbuf), "%.2e", worst);
    verdict("C7", worst < 1e-4 && checked > 400,
            "max relative error=" + std::string(worstbuf) + " (<1e-4) over " +
                std::to_string(checked) + " parameters in 10 draws");
}

TEST_CASE("criterion 8: GBDT training loss monotone over 100 rounds") {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : {801ULL, 802ULL, 803ULL}) {
        Rng rng(seed);
        FeatureMatrix X;
        X.rows = 300;
        X.dims = 12;
        std::vector<int> labels;
        X.row_ptr.push_back(0);
        for (std::size_t r = 0; r < X.rows; ++r) {
            for (std::size_t c = 0; c < X.dims; ++c) {
                if (rng.bernoulli(0.3)) {
                    X.col.push_back(static_cast<std::uint32_t>(c));
                    X.val.push_back(1.0);
                }
            }
            X.row_ptr.push_back(X.col.size());
            labels.push_back(rng.bernoulli(0.5) ? 1 : 0);
        }
        X.labels = labels;
        GbdtParams params;  // 100 estimators, depth 10
        auto model = train_gbdt(X, labels, params);
        REQUIRE(model.train_loss_curve.size() == 100);
        std::size_t violations = 0;
        for (std::size_t i = 1; i < model.train_loss_curve.size(); ++i)
            if (model.train_loss_curve[i] > model.train_loss_curve[i - 1] + 1e-12) ++violations;
        if (violations > 0) ok = false;
        detail += std::to_string(violations) + " ";
    }
    verdict("C8", ok,
            "non-increasing log-loss across all 100 rounds on 3 toy sets (violations: " + detail +
                ")");
}

TEST_CASE("criterion 9: tokenizer conformance") {
    static const std::regex pattern(R"([A-Za-z0-9_]+|[^A-Za-z0-9_ \t\n\r\f\v]+)");
    auto reference = [](const std::string& s) {
        std::vector<std::string> out;
        for (auto it = std::sregex_iterator(s.begin(), s.end(), pattern);
             it != std::sregex_iterator(); ++it)
            out.push_back(it->str());
        return out;
    };

    Rng rng(909);
    std::vector<std::string> corpus;
    for (const auto& r : generate_synthetic_baseline(400, 9)) corpus.push_back(r.cmd);
    static const std::string charset = "abcXYZ019_ \t;|&<>$\"'(){}[]./\\-=+*!~`#%^,:?@";
    for (int i = 0; i < 100; ++i) {
        std::string s;
        const std::size_t len = 1 + rng.uniform(80);
        for (std::size_t k = 0; k < len; ++k) s += charset[rng.uniform(charset.size())];
        corpus.push_back(s);
    }
    REQUIRE(corpus.size() == 500);
    std::size_t mismatches = 0;
    for (const auto& cmd : corpus)
        if (tokenize_wordpunct(cmd) != reference(cmd)) ++mismatches;

    auto bpe = train_bpe({"abab", "abab"}, 5);
    const bool bpe_ok = !bpe.rules().empty() && bpe.rules()[0] == BpeModel::Rule{"a", "b"};

    verdict("C9", mismatches == 0 && bpe_ok,
            "wordpunct matches the reference pattern on " + std::to_string(500 - mismatches) +
                "/500 commands, first BPE merge on [abab,abab] is (a,b): " +
                (bpe_ok ? "yes" : "no"));
}

TEST_CASE("criterion 10: rerun determinism of every artifact") {
    auto run_once = [&](const TempDir& dir) {
        auto cfg = experiment_config(dir, 1010, 600);
        cfg.gbdt.n_estimators = 15;
        cfg.gbdt.max_depth = 4;
        cfg.rehash();
        auto synth = run_synth(cfg);
        auto train = run_train(cfg, synth.train_path, dir.file("model.json"));
        run_attack(cfg, synth.test_path, dir.file("adv.jsonl"));
        run_eval(cfg, train.model_path, synth.test_path, dir.file("report.json"),
                 dir.file("roc.csv"));
        std::map<std::string, std::string> contents;
        for (const auto* name : {"out/train.jsonl", "out/test.jsonl", "model.json", "adv.jsonl",
                                 "report.json", "roc.csv"}) {
            std::ifstream in(dir.file(name), std::ios::binary);
            REQUIRE(in);
            std::ostringstream ss;
            ss << in.rdbuf();
            contents[name] = ss.str();
        }
        return contents;
    };
    // identical config means identical paths: rerun into the same directory
    TempDir dir("det");
    auto a = run_once(dir);
    auto b = run_once(dir);
    bool identical = a.size() == b.size();
    std::string diff;
    for (const auto& [name, content] : a) {
        if (b[name] != content) {
            identical = false;
            diff += name + " ";
        }
    }
    verdict("C10", identical,
            identical ? "dataset, model, attacked set, report and ROC byte-identical across reruns"
                      : "artifacts differ: " + diff);
}

TEST_CASE("criterion 11: signature baseline contrast") {
    auto rules = default_signature_ruleset();
    auto registry = shipped_registry();
    auto templates = shipped_templates();
    auto bindings = default_bindings();

    std::size_t clean_hits = 0, perturbed_hits = 0;
    Rng base(1111);
    for (std::size_t i = 0; i < templates.size(); ++i) {
        const auto variant = expand_template(templates[i], bindings, registry);
        if (rules.any_match(variant)) ++clean_hits;
        Rng rng = base.derive(i);
        const auto perturbed = escape_perturb(variant, 1.0, rng);
        if (rules.any_match(perturbed)) ++perturbed_hits;
    }
    const double clean_rate =
        static_cast<double>(clean_hits) / static_cast<double>(templates.size());
    const double pert_rate =
        static_cast<double>(perturbed_hits) / static_cast<double>(templates.size());
    verdict("C11", clean_rate >= 0.9 && pert_rate <= 0.1,
            "default variants flagged " + std::to_string(clean_hits) +
                "/38 (>=90%), escape-perturbed flagged " + std::to_string(perturbed_hits) +
                "/38 (<=10%)");
}

TEST_SUITE_END();
