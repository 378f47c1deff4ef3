#pragma once

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "lotlkit/bpe.hpp"
#include "lotlkit/errors.hpp"
#include "lotlkit/record.hpp"
#include "lotlkit/tokenize.hpp"

namespace lotlkit {

struct LengthBin {
    std::size_t lo = 0;  // inclusive, token count
    std::size_t hi = 0;  // exclusive
    std::size_t benign = 0;
    std::size_t malicious = 0;
};

// Token-overlap Venn counts plus a log-binned command-length histogram.
struct DistributionReport {
    std::size_t benign_only = 0;
    std::size_t malicious_only = 0;
    std::size_t shared = 0;
    std::vector<LengthBin> length_histogram;
};

inline DistributionReport distribution_report(const std::vector<CommandRecord>& dataset,
                                              TokenizerMode mode, const BpeModel* bpe = nullptr) {
    if (dataset.empty()) throw DataError("distribution report needs a non-empty dataset");

    std::unordered_set<std::string> benign_tokens, malicious_tokens;
    std::vector<std::pair<std::size_t, int>> lengths;  // (token count, label)
    std::size_t max_len = 1;
    for (const auto& rec : dataset) {
        auto tokens = tokenize(rec.cmd, mode, bpe);
        auto& bucket = rec.label == 1 ? malicious_tokens : benign_tokens;
        for (const auto& t : tokens) bucket.insert(t);
        lengths.emplace_back(tokens.size(), rec.label);
        max_len = std::max(max_len, tokens.size());
    }

    DistributionReport report;
    for (const auto& t : benign_tokens)
        (malicious_tokens.count(t) ? report.shared : report.benign_only)++;
    for (const auto& t : malicious_tokens)
        if (!benign_tokens.count(t)) ++report.malicious_only;

    // log2 bins: [1,2), [2,4), [4,8), ...
    std::size_t hi = 2;
    for (std::size_t lo = 1; lo <= max_len; lo = hi, hi *= 2)
        report.length_histogram.push_back({lo, hi, 0, 0});
    for (const auto& [len, label] : lengths) {
        std::size_t bin = 0;
        std::size_t upper = 2;
        std::size_t n = std::max<std::size_t>(len, 1);
        while (n >= upper) {
            upper *= 2;
            ++bin;
        }
        auto& slot = report.length_histogram[bin];
        (label == 1 ? slot.malicious : slot.benign)++;
    }
    return report;
}

inline nlohmann::json distribution_to_json(const DistributionReport& r) {
    nlohmann::json j;
    j["venn"] = {{"benign_only", r.benign_only},
                 {"malicious_only", r.malicious_only},
                 {"shared", r.shared}};
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : r.length_histogram)
        bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"benign", b.benign}, {"malicious", b.malicious}});
    j["length_histogram"] = bins;
    return j;
}

}  // namespace lotlkit
