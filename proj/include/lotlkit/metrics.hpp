#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"

namespace lotlkit {

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

// Threshold sweep over distinct scores, descending; tied scores collapse into
// one step. AUC by trapezoidal integration.
inline RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw DataError("roc_curve needs aligned, non-empty scores and labels");
    std::size_t pos = 0, neg = 0;
    for (int y : labels) (y == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0) throw DataError("roc_curve needs both classes present");

    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    RocCurve curve;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        const double s = scores[idx[i]];
        while (i < idx.size() && scores[idx[i]] == s) {
            (labels[idx[i]] == 1 ? tp : fp)++;
            ++i;
        }
        curve.points.push_back({s, static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos)});
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

// TPR at the strictest operating point whose FPR stays within the budget.
// Never interpolates and never exceeds the target.
inline std::pair<double, double> tpr_at_fpr(const RocCurve& curve, double target_fpr) {
    if (target_fpr < 0.0 || target_fpr > 1.0)
        throw ConfigError("FPR target must be in [0, 1]");
    double best_tpr = 0.0;
    double best_threshold = std::numeric_limits<double>::infinity();
    for (const auto& p : curve.points) {
        if (p.fpr <= target_fpr && p.tpr >= best_tpr) {
            best_tpr = p.tpr;
            best_threshold = p.threshold;
        }
    }
    return {best_tpr, best_threshold};
}

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline Confusion confusion_at(const std::vector<double>& scores, const std::vector<int>& labels,
                              double threshold) {
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= threshold;
        if (pred && labels[i] == 1) ++c.tp;
        else if (pred && labels[i] == 0) ++c.fp;
        else if (!pred && labels[i] == 0) ++c.tn;
        else ++c.fn;
    }
    return c;
}

struct EvalReport {
    double auc = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double f1_threshold = 0.0;
    std::map<std::string, double> tpr_at_fpr;
    std::map<std::string, double> threshold_at_fpr;
    Confusion confusion;
    std::size_t n_samples = 0;
};

inline std::string format_fpr_target(double target) {
    // Powers of ten render as "1e-5"; anything else falls back to %g.
    for (int e = 1; e <= 12; ++e) {
        const double p = std::pow(10.0, -e);
        if (std::abs(target - p) < p * 1e-9) return "1e-" + std::to_string(e);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", target);
    return buf;
}

// F1 and accuracy at the F1-maximizing threshold (exhaustive scan over
// distinct scores), plus TPR at each FPR budget.
inline EvalReport summary_metrics(const std::vector<double>& scores, const std::vector<int>& labels,
                                  const std::vector<double>& fpr_targets = {1e-4, 1e-5, 1e-6}) {
    EvalReport report;
    report.n_samples = scores.size();
    RocCurve curve = roc_curve(scores, labels);
    report.auc = curve.auc;

    std::size_t pos = 0;
    for (int y : labels) pos += static_cast<std::size_t>(y == 1);

    double best_f1 = -1.0;
    double best_threshold = std::numeric_limits<double>::infinity();
    for (const auto& p : curve.points) {
        if (!std::isfinite(p.threshold)) continue;
        const double tp = p.tpr * static_cast<double>(pos);
        const double fp = p.fpr * static_cast<double>(labels.size() - pos);
        const double fn = static_cast<double>(pos) - tp;
        const double denom = 2.0 * tp + fp + fn;
        const double f1 = denom > 0 ? 2.0 * tp / denom : 0.0;
        if (f1 > best_f1 + 1e-15) {
            best_f1 = f1;
            best_threshold = p.threshold;
        }
    }
    report.f1 = std::max(best_f1, 0.0);
    report.f1_threshold = best_threshold;
    report.confusion = confusion_at(scores, labels, best_threshold);
    report.accuracy = static_cast<double>(report.confusion.tp + report.confusion.tn) /
                      static_cast<double>(scores.size());

    for (double target : fpr_targets) {
        auto [tpr, thr] = tpr_at_fpr(curve, target);
        report.tpr_at_fpr[format_fpr_target(target)] = tpr;
        report.threshold_at_fpr[format_fpr_target(target)] = thr;
    }
    return report;
}

inline nlohmann::json eval_report_to_json(const EvalReport& r) {
    nlohmann::json j;
    j["auc"] = r.auc;
    j["f1"] = r.f1;
    j["accuracy"] = r.accuracy;
    j["f1_threshold"] = std::isfinite(r.f1_threshold) ? r.f1_threshold : 1.0e308;
    j["tpr_at_fpr"] = r.tpr_at_fpr;
    nlohmann::json thr = nlohmann::json::object();
    for (const auto& [k, v] : r.threshold_at_fpr) thr[k] = std::isfinite(v) ? v : 1.0e308;
    j["threshold_at_fpr"] = thr;
    j["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
                      {"tn", r.confusion.tn}, {"fn", r.confusion.fn}};
    j["n_samples"] = r.n_samples;
    return j;
}

inline std::string roc_to_csv(const RocCurve& curve) {
    std::string out = "threshold,fpr,tpr\n";
    char buf[96];
    for (const auto& p : curve.points) {
        if (std::isfinite(p.threshold)) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.threshold, p.fpr, p.tpr);
        } else {
            std::snprintf(buf, sizeof(buf), "inf,%.17g,%.17g\n", p.fpr, p.tpr);
        }
        out += buf;
    }
    return out;
}

}  // namespace lotlkit
