#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "lotlkit/errors.hpp"

namespace lotlkit {

// One EXECVE record from Linux audit telemetry.
struct ExecveEvent {
    double timestamp = 0.0;
    std::string host;
    std::int64_t parent_pid = 0;
    int argc = 0;
    std::vector<std::string> args;

    std::string joined_cmd() const {
        std::string out;
        for (const auto& a : args) {
            if (!out.empty()) out += ' ';
            out += a;
        }
        return out;
    }
};

namespace detail {

inline bool is_hex_digit(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

inline int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
}

// Replace invalid UTF-8 sequences with U+FFFD.
inline std::string utf8_lossy(const std::string& bytes) {
    static const std::string kReplacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4) len = 4;
        if (len == 0 || i + len > bytes.size()) {
            out += kReplacement;
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(bytes[i + k]) & 0xC0) != 0x80) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            out += kReplacement;
            ++i;
            continue;
        }
        out.append(bytes, i, len);
        i += len;
    }
    return out;
}

// auditd hex-encodes argument values containing spaces or quotes; decode those
// back to text so downstream models see the normalized command line.
inline std::string decode_audit_value(std::string_view raw) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        return std::string(raw.substr(1, raw.size() - 2));
    }
    if (!raw.empty() && raw.size() % 2 == 0 &&
        std::all_of(raw.begin(), raw.end(), is_hex_digit)) {
        std::string bytes;
        bytes.reserve(raw.size() / 2);
        for (std::size_t i = 0; i < raw.size(); i += 2) {
            bytes += static_cast<char>(hex_value(raw[i]) * 16 + hex_value(raw[i + 1]));
        }
        return utf8_lossy(bytes);
    }
    return std::string(raw);
}

// Split "key=value" tokens; values may be double-quoted and contain spaces.
inline std::vector<std::pair<std::string, std::string>> split_audit_fields(std::string_view line) {
    std::vector<std::pair<std::string, std::string>> fields;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= n) break;
        std::size_t key_start = i;
        while (i < n && line[i] != '=' && line[i] != ' ' && line[i] != '\t') ++i;
        if (i >= n || line[i] != '=') continue;  // token without '=', e.g. trailing colon chunk
        std::string key(line.substr(key_start, i - key_start));
        ++i;
        std::string value;
        if (i < n && line[i] == '"') {
            std::size_t close = line.find('"', i + 1);
            if (close == std::string_view::npos) close = n - 1;
            value = std::string(line.substr(i, close - i + 1));
            i = close + 1;
        } else {
            std::size_t value_start = i;
            while (i < n && line[i] != ' ' && line[i] != '\t') ++i;
            value = std::string(line.substr(value_start, i - value_start));
        }
        fields.emplace_back(std::move(key), std::move(value));
    }
    return fields;
}

}  // namespace detail

// Parse a single EXECVE audit record. a0..a{argc-1} must all be present;
// host (node=) and ppid= are optional enrichments emitted by some agents.
inline ExecveEvent parse_execve_record(const std::string& line) {
    ExecveEvent ev;

    auto fields = detail::split_audit_fields(line);
    bool saw_type = false;
    bool saw_argc = false;
    std::map<int, std::string> args_by_index;

    for (auto& [key, raw] : fields) {
        if (key == "type") {
            saw_type = true;
            if (raw != "EXECVE") throw ParseError("record type is not EXECVE: " + raw);
        } else if (key == "msg") {
            // msg=audit(1638286470.122:567): extract the epoch seconds.
            std::size_t open = raw.find('(');
            std::size_t colon = raw.find(':', open == std::string::npos ? 0 : open);
            if (open != std::string::npos && colon != std::string::npos && colon > open + 1) {
                try {
                    ev.timestamp = std::stod(raw.substr(open + 1, colon - open - 1));
                } catch (const std::exception&) {
                    ev.timestamp = 0.0;
                }
            }
        } else if (key == "node" || key == "host") {
            ev.host = detail::decode_audit_value(raw);
        } else if (key == "ppid") {
            try {
                ev.parent_pid = std::stoll(raw);
            } catch (const std::exception&) {
                throw ParseError("invalid ppid field: " + raw);
            }
            if (ev.parent_pid < 0) throw ParseError("ppid must be >= 0");
        } else if (key == "timestamp") {
            try {
                ev.timestamp = std::stod(raw);
            } catch (const std::exception&) {
                throw ParseError("invalid timestamp field: " + raw);
            }
        } else if (key == "argc") {
            saw_argc = true;
            try {
                ev.argc = std::stoi(raw);
            } catch (const std::exception&) {
                throw ParseError("invalid argc field: " + raw);
            }
        } else if (key.size() >= 2 && key[0] == 'a' &&
                   std::all_of(key.begin() + 1, key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            args_by_index[std::stoi(key.substr(1))] = detail::decode_audit_value(raw);
        }
    }

    if (!saw_type) throw ParseError("missing field: type");
    if (!saw_argc) throw ParseError("missing field: argc");
    if (ev.argc < 1) throw ParseError("argc must be >= 1");

    ev.args.reserve(static_cast<std::size_t>(ev.argc));
    for (int i = 0; i < ev.argc; ++i) {
        auto it = args_by_index.find(i);
        if (it == args_by_index.end()) throw ParseError("missing field: a" + std::to_string(i));
        ev.args.push_back(it->second);
    }
    return ev;
}

// Group events by (host, parent_pid, time bucket); concatenate each group's
// distinct command lines with ";" in timestamp order, then deduplicate the
// resulting strings globally. Groups are emitted in key order.
inline std::vector<std::string> aggregate_window(const std::vector<ExecveEvent>& events,
                                                 double window_seconds = 300.0) {
    if (window_seconds <= 0.0) throw DataError("aggregation window must be > 0");
    if (events.empty()) return {};

    using Key = std::tuple<std::string, std::int64_t, std::int64_t>;
    std::map<Key, std::vector<std::pair<double, std::string>>> groups;
    for (const auto& ev : events) {
        Key key{ev.host, ev.parent_pid,
                static_cast<std::int64_t>(std::floor(ev.timestamp / window_seconds))};
        groups[key].emplace_back(ev.timestamp, ev.joined_cmd());
    }

    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& [key, entries] : groups) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::string joined;
        std::unordered_set<std::string> in_group;
        for (const auto& [ts, cmd] : entries) {
            if (!in_group.insert(cmd).second) continue;
            if (!joined.empty()) joined += ';';
            joined += cmd;
        }
        if (seen.insert(joined).second) out.push_back(std::move(joined));
    }
    return out;
}

}  // namespace lotlkit
