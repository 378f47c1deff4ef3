#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"
#include "lotlkit/placeholder.hpp"
#include "lotlkit/rng.hpp"

namespace lotlkit {

// Attack pattern with typed placeholder slots.
struct Template {
    std::string id;
    std::string pattern;

    bool operator==(const Template&) const = default;
};

inline std::vector<Template> templates_from_json(const nlohmann::json& j) {
    std::vector<Template> out;
    for (const auto& item : j) {
        Template t;
        t.id = item.at("id").get<std::string>();
        t.pattern = item.at("pattern").get<std::string>();
        if (t.id.empty() || t.pattern.empty()) throw ConfigError("template id/pattern must be non-empty");
        out.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t k = i + 1; k < out.size(); ++k)
            if (out[i].id == out[k].id) throw ConfigError("duplicate template id: " + out[i].id);
    return out;
}

// Placeholder names used by a pattern. Longest names are matched first so
// VAR_NAME_1 is never misread as VAR_NAME plus a suffix.
inline std::vector<std::string> placeholders_in(const std::string& pattern,
                                                const PlaceholderRegistry& registry) {
    std::vector<std::string> used;
    const auto names = registry.names_longest_first();
    std::string masked = pattern;
    for (const auto& name : names) {
        bool found = false;
        std::size_t pos = 0;
        while ((pos = masked.find(name, pos)) != std::string::npos) {
            found = true;
            std::fill(masked.begin() + static_cast<std::ptrdiff_t>(pos),
                      masked.begin() + static_cast<std::ptrdiff_t>(pos + name.size()), '\x01');
            pos += name.size();
        }
        if (found) used.push_back(name);
    }
    std::sort(used.begin(), used.end());
    return used;
}

// Substitute every placeholder occurrence. Single left-to-right scan trying
// the longest registered name at each position; bound values are emitted
// verbatim and never rescanned.
inline std::string expand_template(const Template& t,
                                   const std::map<std::string, std::string>& bindings,
                                   const PlaceholderRegistry& registry) {
    const auto names = registry.names_longest_first();
    std::string out;
    out.reserve(t.pattern.size() + 32);
    std::size_t i = 0;
    while (i < t.pattern.size()) {
        bool matched = false;
        for (const auto& name : names) {
            if (t.pattern.compare(i, name.size(), name) == 0) {
                auto it = bindings.find(name);
                if (it == bindings.end())
                    throw DataError("template " + t.id + ": unbound placeholder " + name);
                out += it->second;
                i += name.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            out += t.pattern[i];
            ++i;
        }
    }
    return out;
}

inline bool contains_placeholder(const std::string& s, const PlaceholderRegistry& registry) {
    for (const auto& name : registry.names())
        if (s.find(name) != std::string::npos) return true;
    return false;
}

// Draw a value for every placeholder the pattern uses.
inline std::map<std::string, std::string> sample_bindings(const Template& t,
                                                          const PlaceholderRegistry& registry,
                                                          double alpha, Rng& rng) {
    std::map<std::string, std::string> bindings;
    for (const auto& name : placeholders_in(t.pattern, registry))
        bindings[name] = registry.sample(name, alpha, rng);
    return bindings;
}

// The worked example values: one canonical variant per template.
inline std::map<std::string, std::string> default_bindings() {
    return {{"SHELL", "/bin/bash"}, {"PROTO_TYPE", "tcp"},  {"IP_A", "10.1.1.2"},
            {"PORT_NR", "4444"},    {"FD_NR", "3"},         {"FILE_P", "/tmp/foo"},
            {"VAR_NAME", "host"},   {"VAR_NAME_1", "host"}, {"VAR_NAME_2", "port"}};
}

// Random disjoint partition; |train| = ceil(ratio * n), deterministic per seed.
inline std::pair<std::vector<Template>, std::vector<Template>> split_templates(
    const std::vector<Template>& templates, double train_ratio, std::uint64_t seed) {
    if (templates.empty()) throw DataError("no templates to split");
    if (!(train_ratio > 0.0 && train_ratio <= 1.0))
        throw ConfigError("train_ratio must be in (0, 1]");

    std::vector<Template> shuffled = templates;
    Rng rng(mix64(seed ^ 0x73706c6974ULL));
    rng.shuffle(shuffled);

    const auto n_train = static_cast<std::size_t>(
        std::ceil(train_ratio * static_cast<double>(templates.size())));
    std::vector<Template> train(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<Template> test(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train), shuffled.end());
    return {std::move(train), std::move(test)};
}

}  // namespace lotlkit
