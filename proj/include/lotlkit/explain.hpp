#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"
#include "lotlkit/forest.hpp"
#include "lotlkit/gbdt.hpp"
#include "lotlkit/record.hpp"
#include "lotlkit/vocab.hpp"

namespace lotlkit {

// Token attribution: positive values push the score toward malicious.
struct Attribution {
    std::string token;
    double value = 0.0;
    std::size_t support = 0;
};

using TokenScoreFn = std::function<double(const std::vector<std::string>&)>;
using TokenizeFn = std::function<std::vector<std::string>(const std::string&)>;

// Occlusion attribution: a token's contribution on one sample is the score
// drop when all its occurrences are removed. Values are averaged over the
// samples that contain the token; out-of-vocabulary tokens are excluded.
inline std::vector<Attribution> occlusion_attribution(const std::vector<CommandRecord>& samples,
                                                      const TokenizeFn& tokenizer,
                                                      const TokenScoreFn& score_fn,
                                                      const Vocabulary& vocabulary,
                                                      std::size_t top_k) {
    std::map<std::string, std::pair<double, std::size_t>> sums;  // token -> (sum, support)
    for (const auto& rec : samples) {
        const auto tokens = tokenizer(rec.cmd);
        const double base = score_fn(tokens);
        std::vector<std::string> uniq = tokens;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (const auto& tok : uniq) {
            if (!vocabulary.contains(tok)) continue;
            std::vector<std::string> reduced;
            reduced.reserve(tokens.size());
            for (const auto& t : tokens)
                if (t != tok) reduced.push_back(t);
            const double delta = base - score_fn(reduced);
            auto& slot = sums[tok];
            slot.first += delta;
            slot.second += 1;
        }
    }

    std::vector<Attribution> result;
    result.reserve(sums.size());
    for (const auto& [tok, agg] : sums)
        result.push_back({tok, agg.first / static_cast<double>(agg.second), agg.second});
    std::sort(result.begin(), result.end(), [](const Attribution& a, const Attribution& b) {
        const double ma = std::abs(a.value), mb = std::abs(b.value);
        if (ma != mb) return ma > mb;
        return a.token < b.token;
    });
    if (result.size() > top_k) result.resize(top_k);
    return result;
}

namespace detail {

inline void accumulate_tree_gain(const Tree& tree, std::map<std::uint32_t, double>& gains) {
    for (const auto& nd : tree.nodes) {
        if (nd.feature >= 0) gains[static_cast<std::uint32_t>(nd.feature)] += nd.gain;
    }
}

}  // namespace detail

// Per-feature sum of split gain across all trees. Features never split on
// are absent from the map.
inline std::map<std::uint32_t, double> tree_gain_importance(const GbdtModel& model) {
    std::map<std::uint32_t, double> gains;
    for (const auto& t : model.trees) detail::accumulate_tree_gain(t, gains);
    return gains;
}

inline std::map<std::uint32_t, double> tree_gain_importance(const RandomForestModel& model) {
    std::map<std::uint32_t, double> gains;
    for (const auto& t : model.trees) detail::accumulate_tree_gain(t, gains);
    return gains;
}

inline nlohmann::json attributions_to_json(const std::vector<Attribution>& attrs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : attrs)
        arr.push_back({{"token", a.token}, {"value", a.value}, {"support", a.support}});
    return arr;
}

}  // namespace lotlkit
