#include <doctest.h>

#include <cmath>

#include "lotlkit/distribution.hpp"
#include "lotlkit/metrics.hpp"
#include "lotlkit/rng.hpp"

using namespace lotlkit;

namespace {

// Pairwise concordance with ties counted half.
double auc_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    double concordant = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) concordant += 1.0;
            else if (scores[i] == scores[j]) concordant += 0.5;
        }
    }
    return concordant / static_cast<double>(pairs);
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("perfect separation gives AUC 1") {
    auto curve = roc_curve({0.9, 0.8, 0.4, 0.2}, {1, 1, 0, 0});
    CHECK(curve.auc == doctest::Approx(1.0));
    CHECK(curve.points.front().fpr == 0.0);
    CHECK(curve.points.front().tpr == 0.0);
    CHECK(curve.points.back().fpr == 1.0);
    CHECK(curve.points.back().tpr == 1.0);
}

TEST_CASE("constant scores give AUC one half") {
    auto curve = roc_curve({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0});
    CHECK(curve.auc == doctest::Approx(0.5));
}

TEST_CASE("inverted scorer gives AUC zero") {
    auto curve = roc_curve({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0});
    CHECK(curve.auc == doctest::Approx(0.0));
}

TEST_CASE("AUC matches the concordance oracle on random 20-point sets") {
    Rng rng(808);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> scores;
        std::vector<int> labels;
        bool has0 = false, has1 = false;
        for (int i = 0; i < 20; ++i) {
            scores.push_back(static_cast<double>(rng.uniform(8)) / 8.0);  // force ties
            const int y = rng.bernoulli(0.5) ? 1 : 0;
            labels.push_back(y);
            (y ? has1 : has0) = true;
        }
        if (!has0 || !has1) continue;
        auto curve = roc_curve(scores, labels);
        CHECK(curve.auc == doctest::Approx(auc_oracle(scores, labels)).epsilon(1e-12));
    }
}

TEST_CASE("fpr and tpr are non-decreasing along the curve") {
    Rng rng(33);
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 200; ++i) {
        scores.push_back(rng.uniform_real());
        labels.push_back(rng.bernoulli(0.4) ? 1 : 0);
    }
    auto curve = roc_curve(scores, labels);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
        CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
    }
}

TEST_CASE("single-class inputs are an error") {
    CHECK_THROWS_AS(roc_curve({0.5, 0.6}, {1, 1}), DataError);
    CHECK_THROWS_AS(roc_curve({0.5, 0.6}, {0, 0}), DataError);
}

TEST_CASE("perfect curve reaches TPR 1 within any budget") {
    auto curve = roc_curve({0.9, 0.8, 0.4, 0.2}, {1, 1, 0, 0});
    auto [tpr, thr] = tpr_at_fpr(curve, 1e-5);
    CHECK(tpr == doctest::Approx(1.0));
    CHECK(thr == doctest::Approx(0.8));
}

TEST_CASE("constant scorer has TPR 0 at budget 0") {
    auto curve = roc_curve({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0});
    auto [tpr, thr] = tpr_at_fpr(curve, 0.0);
    CHECK(tpr == doctest::Approx(0.0));
}

TEST_CASE("ten benign samples at 1e-5 admit zero false positives") {
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        scores.push_back(0.1 * i);
        labels.push_back(0);
    }
    scores.push_back(0.95);
    labels.push_back(1);
    auto curve = roc_curve(scores, labels);
    auto [tpr, thr] = tpr_at_fpr(curve, 1e-5);
    // budget floor(10 * 1e-5) = 0 false positives: threshold must sit above
    // the best-scoring benign sample
    std::size_t fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        fp += static_cast<std::size_t>(labels[i] == 0 && scores[i] >= thr);
    CHECK(fp == 0);
    CHECK(tpr == doctest::Approx(1.0));
}

TEST_CASE("budget is never exceeded and TPR is monotone in the budget") {
    Rng rng(99);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<double> scores;
        std::vector<int> labels;
        std::size_t neg = 0;
        for (int i = 0; i < 100; ++i) {
            scores.push_back(rng.uniform_real());
            const int y = rng.bernoulli(0.5) ? 1 : 0;
            labels.push_back(y);
            neg += static_cast<std::size_t>(y == 0);
        }
        auto curve = roc_curve(scores, labels);
        double prev = -1.0;
        for (double budget : {0.0, 1e-3, 0.01, 0.05, 0.2, 0.5, 1.0}) {
            auto [tpr, thr] = tpr_at_fpr(curve, budget);
            std::size_t fp = 0;
            for (std::size_t i = 0; i < scores.size(); ++i)
                fp += static_cast<std::size_t>(labels[i] == 0 && scores[i] >= thr);
            CHECK(static_cast<double>(fp) / static_cast<double>(neg) <= budget + 1e-12);
            CHECK(tpr >= prev);
            prev = tpr;
        }
    }
}

TEST_CASE("AUC is invariant under strictly monotone score transforms") {
    Rng rng(55);
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 100; ++i) {
        scores.push_back(rng.uniform_real());
        labels.push_back(rng.bernoulli(0.5) ? 1 : 0);
    }
    auto base = roc_curve(scores, labels).auc;
    std::vector<double> squashed;
    for (double s : scores) squashed.push_back(1.0 / (1.0 + std::exp(-7.0 * s)));
    CHECK(roc_curve(squashed, labels).auc == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("summary metrics on a perfectly separated set") {
    auto report = summary_metrics({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0});
    CHECK(report.f1 == doctest::Approx(1.0));
    CHECK(report.accuracy == doctest::Approx(1.0));
    CHECK(report.auc == doctest::Approx(1.0));
}

TEST_CASE("inverted scorer reports AUC 0") {
    auto report = summary_metrics({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0});
    CHECK(report.auc == doctest::Approx(0.0));
}

TEST_CASE("report fields agree with a direct confusion recomputation") {
    Rng rng(222);
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 300; ++i) {
        const int y = rng.bernoulli(0.5) ? 1 : 0;
        scores.push_back(0.3 * rng.uniform_real() + 0.55 * y);
        labels.push_back(y);
    }
    auto report = summary_metrics(scores, labels);
    auto c = confusion_at(scores, labels, report.f1_threshold);
    CHECK(c.tp == report.confusion.tp);
    CHECK(c.fp == report.confusion.fp);
    CHECK(c.tn == report.confusion.tn);
    CHECK(c.fn == report.confusion.fn);
    CHECK(c.tp + c.fp + c.tn + c.fn == scores.size());
    const double f1 = 2.0 * static_cast<double>(c.tp) /
                      static_cast<double>(2 * c.tp + c.fp + c.fn);
    CHECK(report.f1 == doctest::Approx(f1));
    CHECK(report.accuracy ==
          doctest::Approx(static_cast<double>(c.tp + c.tn) / static_cast<double>(scores.size())));
}

TEST_CASE("fpr target keys render in exponent form") {
    CHECK(format_fpr_target(1e-4) == "1e-4");
    CHECK(format_fpr_target(1e-5) == "1e-5");
    CHECK(format_fpr_target(1e-6) == "1e-6");
}

TEST_CASE("three-token venn diagram") {
    std::vector<CommandRecord> dataset = {make_baseline_record("a b", Split::kTrain),
                                          {"b c", 1, "template:t", Split::kTrain}};
    auto report = distribution_report(dataset, TokenizerMode::kWhitespace);
    CHECK(report.benign_only == 1);
    CHECK(report.shared == 1);
    CHECK(report.malicious_only == 1);
}

TEST_CASE("no malicious class means zero shared tokens") {
    std::vector<CommandRecord> dataset = {make_baseline_record("a b", Split::kTrain)};
    auto report = distribution_report(dataset, TokenizerMode::kWhitespace);
    CHECK(report.shared == 0);
    CHECK(report.malicious_only == 0);
}

TEST_CASE("venn counts partition the unique token set") {
    Rng rng(77);
    std::vector<CommandRecord> dataset;
    std::set<std::string> all_tokens;
    for (int i = 0; i < 200; ++i) {
        std::string cmd;
        const std::size_t len = 1 + rng.uniform(6);
        for (std::size_t k = 0; k < len; ++k) {
            const std::string tok = "t" + std::to_string(rng.uniform(30));
            cmd += (k ? " " : "") + tok;
            all_tokens.insert(tok);
        }
        const int label = rng.bernoulli(0.5) ? 1 : 0;
        dataset.push_back({cmd, label, label ? "template:x" : "baseline", Split::kTrain});
    }
    auto report = distribution_report(dataset, TokenizerMode::kWhitespace);
    CHECK(report.benign_only + report.malicious_only + report.shared == all_tokens.size());

    std::size_t histo_total = 0;
    for (const auto& bin : report.length_histogram) histo_total += bin.benign + bin.malicious;
    CHECK(histo_total == dataset.size());
}

TEST_SUITE_END();
