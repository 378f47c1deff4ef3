#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"

namespace lotlkit {

enum class Split { kTrain, kTest };

inline const char* to_string(Split s) { return s == Split::kTrain ? "train" : "test"; }

inline Split split_from_string(const std::string& s) {
    if (s == "train") return Split::kTrain;
    if (s == "test") return Split::kTest;
    throw DataError("unknown split: " + s);
}

// One labeled command line. origin is "baseline", "template:<id>" or
// "adversarial:<attack>".
struct CommandRecord {
    std::string cmd;
    int label = 0;
    std::string origin;
    Split split = Split::kTrain;

    bool operator==(const CommandRecord&) const = default;
};

inline CommandRecord make_baseline_record(std::string cmd, Split split) {
    return CommandRecord{std::move(cmd), 0, "baseline", split};
}

inline nlohmann::json to_json(const CommandRecord& r) {
    return nlohmann::json{
        {"cmd", r.cmd}, {"label", r.label}, {"origin", r.origin}, {"split", to_string(r.split)}};
}

inline CommandRecord record_from_json(const nlohmann::json& j) {
    CommandRecord r;
    r.cmd = j.at("cmd").get<std::string>();
    r.label = j.at("label").get<int>();
    r.origin = j.at("origin").get<std::string>();
    r.split = split_from_string(j.at("split").get<std::string>());
    if (r.label != 0 && r.label != 1) throw DataError("label must be 0 or 1");
    return r;
}

inline std::string records_to_jsonl(const std::vector<CommandRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

inline std::vector<CommandRecord> records_from_jsonl_stream(std::istream& in) {
    std::vector<CommandRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw DataError("invalid JSON on dataset line " + std::to_string(lineno));
        records.push_back(record_from_json(j));
    }
    return records;
}

inline std::vector<CommandRecord> load_records_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);
    return records_from_jsonl_stream(in);
}

inline void save_records_jsonl(const std::vector<CommandRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset file: " + path);
    out << records_to_jsonl(records);
}

}  // namespace lotlkit
