#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"
#include "lotlkit/placeholder.hpp"  // detail::find_ipv4
#include "lotlkit/record.hpp"
#include "lotlkit/rng.hpp"

namespace lotlkit {

enum class AttackKind { kBenignInjection, kShellEscape, kHybrid };

inline const char* to_string(AttackKind k) {
    switch (k) {
        case AttackKind::kBenignInjection: return "benign_injection";
        case AttackKind::kShellEscape: return "shell_escape";
        case AttackKind::kHybrid: return "hybrid";
    }
    return "hybrid";
}

inline AttackKind attack_kind_from_string(const std::string& s) {
    if (s == "benign_injection") return AttackKind::kBenignInjection;
    if (s == "shell_escape") return AttackKind::kShellEscape;
    if (s == "hybrid") return AttackKind::kHybrid;
    throw ConfigError("unknown attack kind: " + s);
}

struct AttackConfig {
    AttackKind kind = AttackKind::kHybrid;
    std::size_t payload_chars = 64;  // benign injection budget
    double threshold = 1.0;          // per-action escape probability
    double attack_param = 1.0;       // hybrid scalar in [0,1]
    std::vector<std::string> adversary_baseline;
    std::uint64_t seed = 0;
};

// ---- benign content injection ----------------------------------------------

// Prepend benign command text sampled from the adversary's baseline,
// truncated to exactly payload_chars characters and joined with ";".
inline std::string inject_benign(const std::string& x_evil, std::size_t payload_chars,
                                 const std::vector<std::string>& adversary_baseline, Rng& rng) {
    if (payload_chars == 0) return x_evil;
    if (adversary_baseline.empty())
        throw DataError("benign injection needs a non-empty adversary baseline");

    std::string payload;
    while (payload.size() < payload_chars) {
        if (!payload.empty()) payload += ';';
        payload += rng.pick(adversary_baseline);
    }
    payload.resize(payload_chars);
    return payload + ";" + x_evil;
}

inline std::string inject_benign(const std::string& x_evil, const AttackConfig& cfg, Rng& rng) {
    return inject_benign(x_evil, cfg.payload_chars, cfg.adversary_baseline, rng);
}

// ---- shell escape perturbations --------------------------------------------
// Only manipulations that survive auditd normalization: flag tampering,
// decimal IP notation, binary renaming and futile-code insertion.

namespace escape {

inline const std::vector<std::pair<std::string, std::string>>& flag_table() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"netcat", "-v"}, {"python3", "-u"}, {"python", "-u"}, {"bash", "-x"},
        {"perl", "-w"},   {"nc", "-v"},      {"sh", "-x"},
    };
    return table;
}

inline const std::vector<std::string>& rename_table() {
    static const std::vector<std::string> table = {
        "python3", "lua5.1", "netcat", "python", "telnet", "socat", "rcat", "bash",
        "dash",    "ruby",   "perl",   "zsh",    "php",    "ksh",  "lua",  "awk",
        "nc",      "sh",
    };
    return table;
}

inline bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline bool is_path_char(char c) {
    return is_name_char(c) || c == '/' || c == '.' || c == '-';
}

// Standalone occurrences of `name`, each extended left through a path prefix
// ("/bin/bash" for "bash"). Positions already claimed by a longer name are
// skipped via the mask.
inline std::vector<std::pair<std::size_t, std::size_t>> find_binary_tokens(
    const std::string& s, const std::string& name, std::vector<char>& claimed) {
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    std::size_t pos = 0;
    while ((pos = s.find(name, pos)) != std::string::npos) {
        const std::size_t end = pos + name.size();
        const bool left_ok = pos == 0 || !is_name_char(s[pos - 1]);
        const bool right_ok = end >= s.size() || !is_name_char(s[end]);
        bool free = true;
        for (std::size_t i = pos; i < end && free; ++i) free = !claimed[i];
        if (left_ok && right_ok && free) {
            std::size_t start = pos;
            if (start > 0 && s[start - 1] == '/') {
                while (start > 0 && is_path_char(s[start - 1])) --start;
            }
            bool prefix_free = true;
            for (std::size_t i = start; i < pos && prefix_free; ++i) prefix_free = !claimed[i];
            if (prefix_free) {
                hits.emplace_back(start, end - start);
                for (std::size_t i = start; i < end; ++i) claimed[i] = 1;
            }
        }
        pos = end;
    }
    return hits;
}

// Insert a harmless flag right after the first known binary.
inline std::string flag_tamper(const std::string& cmd, Rng& /*rng*/) {
    std::size_t best_pos = std::string::npos;
    std::size_t best_end = 0;
    std::string flag;
    for (const auto& [name, f] : flag_table()) {
        std::size_t pos = 0;
        while ((pos = cmd.find(name, pos)) != std::string::npos) {
            const std::size_t end = pos + name.size();
            const bool left_ok = pos == 0 || !is_name_char(cmd[pos - 1]);
            const bool right_ok = end < cmd.size() && cmd[end] == ' ';
            if (left_ok && right_ok && pos < best_pos) {
                best_pos = pos;
                best_end = end;
                flag = f;
            }
            pos = end;
        }
    }
    if (best_pos == std::string::npos) return cmd;
    return cmd.substr(0, best_end) + " " + flag + cmd.substr(best_end);
}

inline bool flag_tamper_applicable(const std::string& cmd) {
    Rng dummy(0);
    return flag_tamper(cmd, dummy) != cmd;
}

inline std::uint32_t encode_decimal_ip(int a, int b, int c, int d) {
    return (static_cast<std::uint32_t>(a) << 24) | (static_cast<std::uint32_t>(b) << 16) |
           (static_cast<std::uint32_t>(c) << 8) | static_cast<std::uint32_t>(d);
}

inline std::string decode_decimal_ip(std::uint32_t v) {
    return std::to_string(v >> 24) + "." + std::to_string((v >> 16) & 0xff) + "." +
           std::to_string((v >> 8) & 0xff) + "." + std::to_string(v & 0xff);
}

// Rewrite every dotted-quad IPv4 literal as its decimal integer form.
inline std::string decimal_ip(const std::string& cmd, Rng& /*rng*/) {
    auto hits = detail::find_ipv4(cmd);
    if (hits.empty()) return cmd;
    std::string out;
    out.reserve(cmd.size());
    std::size_t cursor = 0;
    for (auto [pos, len] : hits) {
        out.append(cmd, cursor, pos - cursor);
        int oct[4] = {0, 0, 0, 0};
        int oi = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (cmd[i] == '.') {
                ++oi;
            } else {
                oct[oi] = oct[oi] * 10 + (cmd[i] - '0');
            }
        }
        out += std::to_string(encode_decimal_ip(oct[0], oct[1], oct[2], oct[3]));
        cursor = pos + len;
    }
    out.append(cmd, cursor, cmd.size() - cursor);
    return out;
}

inline bool decimal_ip_applicable(const std::string& cmd) {
    return !detail::find_ipv4(cmd).empty();
}

// Copy each known interpreter to a random short name and invoke that instead:
// "bash -i" becomes "cp bash qd;qd -i". Every standalone occurrence of a
// known binary is renamed, grouped by its exact token text.
inline std::string binary_rename(const std::string& cmd, Rng& rng) {
    std::vector<char> claimed(cmd.size(), 0);
    struct Group {
        std::string token;
        std::string alias;
        std::size_t first_pos;
    };
    std::vector<Group> groups;
    std::map<std::string, std::size_t> group_of;
    std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>> spans;  // group, (pos,len)

    for (const auto& name : rename_table()) {
        for (auto [pos, len] : find_binary_tokens(cmd, name, claimed)) {
            const std::string token = cmd.substr(pos, len);
            auto it = group_of.find(token);
            std::size_t gi;
            if (it == group_of.end()) {
                gi = groups.size();
                group_of.emplace(token, gi);
                groups.push_back({token, "", pos});
            } else {
                gi = it->second;
                groups[gi].first_pos = std::min(groups[gi].first_pos, pos);
            }
            spans.push_back({gi, {pos, len}});
        }
    }
    if (groups.empty()) return cmd;

    // aliases in first-occurrence order, distinct from each other
    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return groups[a].first_pos < groups[b].first_pos; });
    // aliases must not collide with each other or with real binary names
    static const std::vector<std::string> denylist = {"id", "cp", "rm", "ls", "mv", "dd", "ip",
                                                      "at", "ar", "bc", "cd", "du", "df", "ln"};
    auto alias_ok = [&](const std::string& a, const std::vector<std::string>& used) {
        if (std::find(used.begin(), used.end(), a) != used.end()) return false;
        if (std::find(denylist.begin(), denylist.end(), a) != denylist.end()) return false;
        const auto& table = rename_table();
        return std::find(table.begin(), table.end(), a) == table.end();
    };
    std::vector<std::string> used;
    for (auto gi : order) {
        std::string alias;
        do {
            alias.clear();
            const std::size_t len = 1 + rng.uniform(2);
            for (std::size_t i = 0; i < len; ++i)
                alias += static_cast<char>('a' + rng.uniform(26));
        } while (!alias_ok(alias, used));
        used.push_back(alias);
        groups[gi].alias = alias;
    }

    std::sort(spans.begin(), spans.end(),
              [](const auto& a, const auto& b) { return a.second.first < b.second.first; });
    std::string body;
    body.reserve(cmd.size());
    std::size_t cursor = 0;
    for (const auto& [gi, span] : spans) {
        body.append(cmd, cursor, span.first - cursor);
        body += groups[gi].alias;
        cursor = span.first + span.second;
    }
    body.append(cmd, cursor, cmd.size() - cursor);

    std::string prelude;
    for (auto gi : order) prelude += "cp " + groups[gi].token + " " + groups[gi].alias + ";";
    return prelude + body;
}

inline bool binary_rename_applicable(const std::string& cmd) {
    std::vector<char> claimed(cmd.size(), 0);
    for (const auto& name : rename_table())
        if (!find_binary_tokens(cmd, name, claimed).empty()) return true;
    return false;
}

// Insert a no-op command at a ";" boundary or as a ";"-prefixed prelude.
inline std::string futile_code(const std::string& cmd, Rng& rng) {
    static const std::vector<std::string> noops = {"id", "true"};
    std::vector<std::size_t> boundaries{0};  // insert-before-char positions
    for (std::size_t i = 0; i < cmd.size(); ++i)
        if (cmd[i] == ';' && i + 1 < cmd.size()) boundaries.push_back(i + 1);
    const std::size_t pos = boundaries[rng.uniform(boundaries.size())];
    const std::string& noop = noops[rng.uniform(noops.size())];
    return cmd.substr(0, pos) + noop + ";" + cmd.substr(pos);
}

}  // namespace escape

struct EscapeAction {
    std::string name;
    bool (*applicable)(const std::string&);
    std::string (*transform)(const std::string&, Rng&);
};

inline const std::vector<EscapeAction>& escape_actions() {
    static const std::vector<EscapeAction> actions = {
        {"flag_tamper", escape::flag_tamper_applicable, escape::flag_tamper},
        {"decimal_ip", escape::decimal_ip_applicable, escape::decimal_ip},
        {"binary_rename", escape::binary_rename_applicable, escape::binary_rename},
        {"futile_code", [](const std::string&) { return true; }, escape::futile_code},
    };
    return actions;
}

// Apply each applicable escape action independently with the given
// probability.
inline std::string escape_perturb(const std::string& x_evil, double threshold, Rng& rng) {
    if (threshold < 0.0 || threshold > 1.0)
        throw ConfigError("escape threshold must be in [0, 1]");
    std::string cur = x_evil;
    for (const auto& action : escape_actions()) {
        if (!action.applicable(cur)) continue;
        if (!rng.bernoulli(threshold)) continue;
        cur = action.transform(cur, rng);
    }
    return cur;
}

// Escape perturbation followed by benign injection, both scaled by the
// attack parameter: escape probability = param, payload = round(param*128).
inline std::string hybrid_attack(const std::string& x_evil, double attack_param,
                                 const AttackConfig& cfg, Rng& rng) {
    if (attack_param < 0.0 || attack_param > 1.0)
        throw ConfigError("attack_param must be in [0, 1]");
    std::string cur = escape_perturb(x_evil, attack_param, rng);
    const auto payload = static_cast<std::size_t>(std::llround(attack_param * 128.0));
    if (payload == 0) return cur;
    return inject_benign(cur, payload, cfg.adversary_baseline, rng);
}

inline std::string apply_attack(const std::string& x_evil, const AttackConfig& cfg, Rng& rng) {
    switch (cfg.kind) {
        case AttackKind::kBenignInjection: return inject_benign(x_evil, cfg, rng);
        case AttackKind::kShellEscape: return escape_perturb(x_evil, cfg.threshold, rng);
        case AttackKind::kHybrid: return hybrid_attack(x_evil, cfg.attack_param, cfg, rng);
    }
    return x_evil;
}

// Transform the malicious rows of a dataset; benign rows pass through.
// Each sample gets its own derived RNG stream.
inline std::vector<CommandRecord> attack_dataset(const std::vector<CommandRecord>& records,
                                                 const AttackConfig& cfg) {
    std::vector<CommandRecord> out;
    out.reserve(records.size());
    Rng base(mix64(cfg.seed ^ 0x61747461ULL));
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].label != 1) {
            out.push_back(records[i]);
            continue;
        }
        Rng rng = base.derive(i);
        CommandRecord rec = records[i];
        rec.cmd = apply_attack(records[i].cmd, cfg, rng);
        rec.origin = std::string("adversarial:") + to_string(cfg.kind);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace lotlkit
