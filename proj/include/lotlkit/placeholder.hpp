#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"
#include "lotlkit/record.hpp"
#include "lotlkit/rng.hpp"

namespace lotlkit {

namespace detail {

inline bool parse_int(std::string_view s, long& out) {
    if (s.empty() || s.size() > 10) return false;
    long v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Find maximal dotted-quad IPv4 literals; returns (pos, len) pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> find_ipv4(std::string_view s) {
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    std::size_t i = 0;
    auto boundary_ok = [&](std::size_t pos) {
        if (pos == 0) return true;
        char prev = s[pos - 1];
        return !is_digit(prev) && prev != '.';
    };
    while (i < s.size()) {
        if (!is_digit(s[i]) || !boundary_ok(i)) {
            ++i;
            continue;
        }
        std::size_t p = i;
        int octets = 0;
        bool valid = true;
        std::size_t q = p;
        for (int k = 0; k < 4; ++k) {
            std::size_t d0 = q;
            long val = 0;
            while (q < s.size() && is_digit(s[q]) && q - d0 < 3) {
                val = val * 10 + (s[q] - '0');
                ++q;
            }
            if (q == d0 || val > 255 || (q < s.size() && is_digit(s[q]))) {
                valid = false;
                break;
            }
            ++octets;
            if (k < 3) {
                if (q < s.size() && s[q] == '.') {
                    ++q;
                } else {
                    valid = false;
                    break;
                }
            }
        }
        if (valid && octets == 4) {
            // Reject when followed by ".digit" (longer dotted run).
            if (q + 1 < s.size() && s[q] == '.' && is_digit(s[q + 1])) {
                i = q;
                continue;
            }
            hits.emplace_back(p, q - p);
            i = q;
        } else {
            ++i;
        }
    }
    return hits;
}

inline bool is_valid_ipv4(std::string_view s) {
    auto hits = find_ipv4(s);
    return hits.size() == 1 && hits[0].first == 0 && hits[0].second == s.size();
}

}  // namespace detail

// Typed placeholder slot: curated values, an optional procedural generator,
// a baseline extraction pattern and a validity predicate.
struct PlaceholderSpec {
    std::string name;
    std::vector<std::string> curated_pool;
    std::string generator;   // "", "port", "tmp_path", "identifier"
    std::string extraction;  // "", "ipv4", "port_near_net_binary", "abs_path", "shell_var"
    std::string validator;   // "shell", "proto", "ipv4", "port", "fd", "path", "identifier"

    bool validate(const std::string& value) const {
        if (value.empty()) return false;
        if (validator == "shell") {
            std::string base = value;
            auto slash = base.rfind('/');
            if (slash != std::string::npos) {
                if (slash == base.size() - 1) return false;
                base = base.substr(slash + 1);
            }
            return base == "bash" || base == "sh" || base == "zsh" || base == "dash" ||
                   base == "ksh";
        }
        if (validator == "proto") return value == "tcp" || value == "udp";
        if (validator == "ipv4") return detail::is_valid_ipv4(value);
        if (validator == "port") {
            long v = 0;
            return detail::parse_int(value, v) && v >= 1 && v <= 65535;
        }
        if (validator == "fd") {
            long v = 0;
            return detail::parse_int(value, v) && v >= 3 && v <= 9;
        }
        if (validator == "path") {
            if (value[0] != '/') return false;
            return value.find(' ') == std::string::npos && value.find(';') == std::string::npos &&
                   value.find('|') == std::string::npos;
        }
        if (validator == "identifier") {
            if (value.size() > 8) return false;
            if (!(value[0] >= 'a' && value[0] <= 'z') && value[0] != '_') return false;
            return std::all_of(value.begin(), value.end(), [](char c) {
                return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
            });
        }
        return true;
    }

    // Extract validator-passing candidate values from one baseline command.
    std::vector<std::string> extract(const std::string& cmd) const {
        std::vector<std::string> found;
        if (extraction == "ipv4") {
            for (auto [pos, len] : detail::find_ipv4(cmd)) found.push_back(cmd.substr(pos, len));
        } else if (extraction == "port_near_net_binary") {
            static const std::vector<std::string> net_bins = {"nc",   "ncat", "curl", "ssh",
                                                              "ping", "ss",   "netstat", "telnet",
                                                              "socat", "openssl", "scp", "rsync"};
            bool has_net = false;
            for (const auto& b : net_bins) {
                auto p = cmd.find(b);
                while (p != std::string::npos) {
                    bool left_ok = p == 0 || (!detail::is_digit(cmd[p - 1]) &&
                                              !(cmd[p - 1] >= 'a' && cmd[p - 1] <= 'z'));
                    auto end = p + b.size();
                    bool right_ok = end >= cmd.size() ||
                                    !((cmd[end] >= 'a' && cmd[end] <= 'z') || detail::is_digit(cmd[end]));
                    if (left_ok && right_ok) {
                        has_net = true;
                        break;
                    }
                    p = cmd.find(b, p + 1);
                }
                if (has_net) break;
            }
            if (has_net) {
                std::size_t i = 0;
                while (i < cmd.size()) {
                    if (!detail::is_digit(cmd[i]) ||
                        (i > 0 && (detail::is_digit(cmd[i - 1]) || cmd[i - 1] == '.'))) {
                        ++i;
                        continue;
                    }
                    std::size_t start = i;
                    while (i < cmd.size() && detail::is_digit(cmd[i])) ++i;
                    if (i < cmd.size() && cmd[i] == '.') continue;  // part of an IP or version
                    std::string tok = cmd.substr(start, i - start);
                    if (validate(tok)) found.push_back(tok);
                }
            }
        } else if (extraction == "abs_path") {
            std::size_t i = 0;
            while (i < cmd.size()) {
                if (cmd[i] != '/') {
                    ++i;
                    continue;
                }
                if (i > 0 && cmd[i - 1] != ' ' && cmd[i - 1] != '=' && cmd[i - 1] != '<' &&
                    cmd[i - 1] != '>') {
                    ++i;
                    continue;
                }
                std::size_t start = i;
                while (i < cmd.size() && cmd[i] != ' ' && cmd[i] != ';' && cmd[i] != '|' &&
                       cmd[i] != '\'' && cmd[i] != '"' && cmd[i] != ')')
                    ++i;
                std::string tok = cmd.substr(start, i - start);
                if ((tok.rfind("/tmp/", 0) == 0 || tok.rfind("/var/", 0) == 0 ||
                     tok.rfind("/dev/", 0) == 0) &&
                    validate(tok))
                    found.push_back(tok);
            }
        } else if (extraction == "shell_var") {
            std::size_t i = 0;
            while (i < cmd.size()) {
                if (cmd[i] != '$') {
                    ++i;
                    continue;
                }
                std::size_t start = ++i;
                while (i < cmd.size() &&
                       ((cmd[i] >= 'a' && cmd[i] <= 'z') || detail::is_digit(cmd[i]) || cmd[i] == '_'))
                    ++i;
                std::string tok = cmd.substr(start, i - start);
                if (validate(tok)) found.push_back(tok);
            }
        }
        return found;
    }

    // Curated draw: procedural generators extend the hot pool where the slot
    // is a range rather than a finite list.
    std::string sample_curated(Rng& rng) const {
        if (generator == "port") {
            if (!curated_pool.empty() && rng.bernoulli(0.5)) return rng.pick(curated_pool);
            return std::to_string(rng.uniform_int(1024, 65535));
        }
        if (generator == "tmp_path") {
            static const std::vector<std::string> stems = {"f",   "a",    "s",    "p",   "x",
                                                           "foo", "pipe", "sock", "tmp", "io"};
            if (!curated_pool.empty() && rng.bernoulli(0.4)) return rng.pick(curated_pool);
            return "/tmp/" + rng.pick(stems) + (rng.bernoulli(0.5) ? std::to_string(rng.uniform(100)) : "");
        }
        if (generator == "identifier") {
            if (!curated_pool.empty() && rng.bernoulli(0.6)) return rng.pick(curated_pool);
            const std::size_t len = 1 + rng.uniform(8);
            std::string s;
            for (std::size_t i = 0; i < len; ++i)
                s += static_cast<char>('a' + rng.uniform(26));
            return s;
        }
        if (curated_pool.empty()) throw ConfigError("placeholder " + name + " has an empty pool");
        return rng.pick(curated_pool);
    }
};

// Registry of placeholder specs plus cached per-placeholder candidate values
// extracted from a baseline.
class PlaceholderRegistry {
public:
    static PlaceholderRegistry from_json(const nlohmann::json& j) {
        PlaceholderRegistry reg;
        for (const auto& item : j.at("placeholders")) {
            PlaceholderSpec spec;
            spec.name = item.at("name").get<std::string>();
            spec.curated_pool = item.at("pool").get<std::vector<std::string>>();
            spec.generator = item.value("generator", "");
            spec.extraction = item.value("extraction", "");
            spec.validator = item.value("validator", "");
            if (spec.curated_pool.empty())
                throw ConfigError("placeholder " + spec.name + " has an empty curated pool");
            for (const auto& v : spec.curated_pool) {
                if (!spec.validate(v))
                    throw ConfigError("curated value '" + v + "' fails the " + spec.name +
                                      " validator");
            }
            reg.order_.push_back(spec.name);
            reg.specs_.emplace(spec.name, std::move(spec));
        }
        if (reg.specs_.empty()) throw ConfigError("placeholder registry is empty");
        return reg;
    }

    bool contains(const std::string& name) const { return specs_.count(name) != 0; }

    const PlaceholderSpec& spec(const std::string& name) const {
        auto it = specs_.find(name);
        if (it == specs_.end()) throw ConfigError("unknown placeholder: " + name);
        return it->second;
    }

    const std::vector<std::string>& names() const { return order_; }

    // Names sorted longest-first so VAR_NAME never shadows VAR_NAME_1.
    std::vector<std::string> names_longest_first() const {
        auto sorted = order_;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() > b.size();
            return a < b;
        });
        return sorted;
    }

    void index_baseline(const std::vector<CommandRecord>& baseline) {
        candidates_.clear();
        for (const auto& [name, spec] : specs_) {
            if (spec.extraction.empty()) continue;
            auto& bucket = candidates_[name];
            for (const auto& rec : baseline) {
                auto found = spec.extract(rec.cmd);
                bucket.insert(bucket.end(), found.begin(), found.end());
            }
        }
    }

    const std::vector<std::string>* baseline_candidates(const std::string& name) const {
        auto it = candidates_.find(name);
        if (it == candidates_.end() || it->second.empty()) return nullptr;
        return &it->second;
    }

    // Mixture draw: curated pool with probability alpha, otherwise a
    // validator-passing value extracted from the baseline. Falls back to the
    // curated pool when extraction found nothing.
    std::string sample(const std::string& name, double alpha, Rng& rng) const {
        const auto& sp = spec(name);
        if (rng.bernoulli(alpha)) return sp.sample_curated(rng);
        const auto* pool = baseline_candidates(name);
        if (pool == nullptr) return sp.sample_curated(rng);
        return rng.pick(*pool);
    }

private:
    std::map<std::string, PlaceholderSpec> specs_;
    std::vector<std::string> order_;
    std::unordered_map<std::string, std::vector<std::string>> candidates_;
};

// One-shot form of the mixture draw over an explicit baseline.
inline std::string sample_placeholder(const PlaceholderSpec& spec,
                                      const std::vector<CommandRecord>& baseline, double alpha,
                                      Rng& rng) {
    if (rng.bernoulli(alpha)) return spec.sample_curated(rng);
    std::vector<std::string> pool;
    for (const auto& rec : baseline) {
        auto found = spec.extract(rec.cmd);
        pool.insert(pool.end(), found.begin(), found.end());
    }
    if (pool.empty()) return spec.sample_curated(rng);
    return rng.pick(pool);
}

}  // namespace lotlkit
