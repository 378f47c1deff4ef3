#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"
#include "lotlkit/rng.hpp"

namespace lotlkit {

// Frequency-ranked token-to-id mapping. Ids 0 and 1 are reserved for the
// padding and out-of-vocabulary tokens; real tokens get dense ids from 2.
class Vocabulary {
public:
    static constexpr std::uint32_t kPadId = 0;
    static constexpr std::uint32_t kOovId = 1;

    Vocabulary() = default;

    static Vocabulary build(const std::vector<std::vector<std::string>>& tokenized_corpus,
                            std::size_t size_cap) {
        if (size_cap < 3) throw ConfigError("vocabulary size cap must be >= 3");

        std::unordered_map<std::string, std::uint64_t> counts;
        for (const auto& doc : tokenized_corpus)
            for (const auto& tok : doc) ++counts[tok];

        std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });

        Vocabulary v;
        v.size_cap_ = size_cap;
        const std::size_t keep = std::min(ranked.size(), size_cap - 2);
        v.tokens_.reserve(keep);
        for (std::size_t i = 0; i < keep; ++i) {
            v.token_to_id_.emplace(ranked[i].first, static_cast<std::uint32_t>(i + 2));
            v.tokens_.push_back(ranked[i].first);
        }
        return v;
    }

    std::uint32_t id(const std::string& token) const {
        auto it = token_to_id_.find(token);
        return it == token_to_id_.end() ? kOovId : it->second;
    }

    bool contains(const std::string& token) const { return token_to_id_.count(token) != 0; }

    // Total id space including pad and oov.
    std::size_t size() const { return tokens_.size() + 2; }
    std::size_t size_cap() const { return size_cap_; }

    // Token for a real id; pad and oov render as markers.
    std::string token(std::uint32_t id) const {
        if (id == kPadId) return "<pad>";
        if (id == kOovId) return "<oov>";
        return tokens_.at(id - 2);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["version"] = 1;
        j["size_cap"] = size_cap_;
        j["tokens"] = tokens_;
        return j;
    }

    static Vocabulary from_json(const nlohmann::json& j) {
        if (j.at("version").get<int>() != 1) throw DataError("unsupported vocabulary version");
        Vocabulary v;
        v.size_cap_ = j.at("size_cap").get<std::size_t>();
        v.tokens_ = j.at("tokens").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < v.tokens_.size(); ++i)
            v.token_to_id_.emplace(v.tokens_[i], static_cast<std::uint32_t>(i + 2));
        return v;
    }

    std::string content_hash() const { return hash_hex(fnv1a64(to_json().dump())); }

private:
    std::unordered_map<std::string, std::uint32_t> token_to_id_;
    std::vector<std::string> tokens_;  // index i holds the token with id i+2
    std::size_t size_cap_ = 0;
};

}  // namespace lotlkit
