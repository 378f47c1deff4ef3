#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"
#include "lotlkit/tokenize.hpp"

namespace lotlkit {

// Byte pair encoding over whitespace-pretokenized units. Merges never cross
// argument boundaries.
class BpeModel {
public:
    using Rule = std::pair<std::string, std::string>;

    BpeModel() = default;

    // Greedy training: merge the most frequent adjacent pair per iteration,
    // ties broken lexicographically by (left, right). Stops when the merge
    // budget is exhausted or no pair occurs at least twice. The budget keeps
    // alphabet + merges + the two reserved ids within target_size.
    static BpeModel train(const std::vector<std::string>& corpus, std::size_t target_size) {
        if (corpus.empty()) throw DataError("BPE training corpus is empty");

        std::map<std::vector<std::string>, std::uint64_t> words;
        std::set<std::string> alphabet;
        for (const auto& line : corpus) {
            for (const auto& unit : tokenize_whitespace(line)) {
                std::vector<std::string> chars;
                chars.reserve(unit.size());
                for (char c : unit) {
                    chars.emplace_back(1, c);
                    alphabet.insert(std::string(1, c));
                }
                ++words[chars];
            }
        }
        if (target_size <= alphabet.size())
            throw ConfigError("BPE target size must exceed the alphabet size");

        BpeModel model;
        model.alphabet_.assign(alphabet.begin(), alphabet.end());
        const std::size_t budget =
            target_size > alphabet.size() + 2 ? target_size - alphabet.size() - 2 : 0;

        for (std::size_t iter = 0; iter < budget; ++iter) {
            std::map<Rule, std::uint64_t> pair_counts;
            for (const auto& [chars, freq] : words) {
                for (std::size_t i = 0; i + 1 < chars.size(); ++i)
                    pair_counts[{chars[i], chars[i + 1]}] += freq;
            }
            Rule best;
            std::uint64_t best_count = 0;
            for (const auto& [pair, count] : pair_counts) {
                // std::map iterates pairs in lexicographic order, so strictly
                // greater keeps the lexicographically smallest tie winner.
                if (count > best_count) {
                    best_count = count;
                    best = pair;
                }
            }
            if (best_count < 2) break;
            model.rules_.push_back(best);

            std::map<std::vector<std::string>, std::uint64_t> next;
            for (auto& [chars, freq] : words) {
                next[apply_rule(chars, best)] += freq;
            }
            words = std::move(next);
        }
        return model;
    }

    std::vector<std::string> encode_unit(const std::string& unit) const {
        std::vector<std::string> tokens;
        tokens.reserve(unit.size());
        for (char c : unit) tokens.emplace_back(1, c);
        for (const auto& rule : rules_) {
            bool merged = true;
            while (merged) {
                auto next = apply_rule(tokens, rule);
                merged = next.size() != tokens.size();
                tokens = std::move(next);
            }
        }
        return tokens;
    }

    std::vector<std::string> encode(std::string_view cmd) const {
        std::vector<std::string> out;
        for (const auto& unit : tokenize_whitespace(cmd)) {
            auto toks = encode_unit(unit);
            out.insert(out.end(), toks.begin(), toks.end());
        }
        return out;
    }

    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<std::string>& alphabet() const { return alphabet_; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["version"] = 1;
        j["alphabet"] = alphabet_;
        nlohmann::json merges = nlohmann::json::array();
        for (const auto& [l, r] : rules_) merges.push_back({l, r});
        j["merges"] = merges;
        return j;
    }

    static BpeModel from_json(const nlohmann::json& j) {
        if (j.at("version").get<int>() != 1) throw DataError("unsupported BPE model version");
        BpeModel m;
        m.alphabet_ = j.at("alphabet").get<std::vector<std::string>>();
        for (const auto& pair : j.at("merges"))
            m.rules_.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
        return m;
    }

private:
    static std::vector<std::string> apply_rule(const std::vector<std::string>& tokens,
                                               const Rule& rule) {
        std::vector<std::string> out;
        out.reserve(tokens.size());
        std::size_t i = 0;
        while (i < tokens.size()) {
            if (i + 1 < tokens.size() && tokens[i] == rule.first && tokens[i + 1] == rule.second) {
                out.push_back(tokens[i] + tokens[i + 1]);
                i += 2;
            } else {
                out.push_back(tokens[i]);
                ++i;
            }
        }
        return out;
    }

    std::vector<std::string> alphabet_;
    std::vector<Rule> rules_;
};

// Training is fully deterministic (lexicographic tie-breaks); the seed is
// accepted for interface uniformity with the other trainers.
inline BpeModel train_bpe(const std::vector<std::string>& corpus, std::size_t target_size,
                          std::uint64_t /*seed*/ = 0) {
    return BpeModel::train(corpus, target_size);
}

// Unified tokenizer entry point across the three schemes.
inline std::vector<std::string> tokenize(std::string_view cmd, TokenizerMode mode,
                                         const BpeModel* bpe = nullptr) {
    switch (mode) {
        case TokenizerMode::kWhitespace: return tokenize_whitespace(cmd);
        case TokenizerMode::kWordpunct: return tokenize_wordpunct(cmd);
        case TokenizerMode::kBpe:
            if (bpe == nullptr) throw ConfigError("BPE tokenization requires a trained model");
            return bpe->encode(cmd);
    }
    return tokenize_wordpunct(cmd);
}

}  // namespace lotlkit
