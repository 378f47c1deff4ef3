#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "lotlkit/attack_template.hpp"
#include "lotlkit/errors.hpp"
#include "lotlkit/placeholder.hpp"
#include "lotlkit/record.hpp"
#include "lotlkit/rng.hpp"

namespace lotlkit {

struct SynthesisConfig {
    double alpha = 0.5;
    double train_ratio = 0.7;
    std::uint64_t seed = 0;
    // Stop generating once | |evil| - |legit| | drops below this. 0 means
    // |train templates| - 1, the largest value under the strict bound.
    std::size_t target_balance_delta = 0;
    std::size_t max_duplicate_attempts = 1000;
};

struct DatasetBuildResult {
    std::vector<CommandRecord> train;
    std::vector<CommandRecord> test;
    std::vector<std::string> warnings;
};

namespace detail {

struct SplitBuild {
    std::vector<CommandRecord> records;
    std::unordered_set<std::string> evil_cmds;
};

// Round-robin variant generation until the class counts are within delta.
// A template that fails to produce a new unique variant for too many
// consecutive attempts is excluded with a warning.
inline SplitBuild build_split(const std::vector<Template>& templates,
                              const std::vector<CommandRecord>& baseline, Split split,
                              const PlaceholderRegistry& registry, const SynthesisConfig& cfg,
                              std::size_t delta, const std::unordered_set<std::string>* other_evil,
                              Rng& rng, std::vector<std::string>& warnings) {
    SplitBuild out;
    out.records = baseline;
    for (auto& rec : out.records) rec.split = split;

    std::unordered_set<std::string> benign_cmds;
    for (const auto& rec : baseline) benign_cmds.insert(rec.cmd);

    const std::size_t legit = baseline.size();
    std::vector<std::size_t> stalls(templates.size(), 0);
    std::vector<bool> excluded(templates.size(), false);
    std::size_t n_active = templates.size();

    auto balanced = [&] {
        const std::size_t evil = out.evil_cmds.size();
        const std::size_t diff = evil > legit ? evil - legit : legit - evil;
        return diff < delta;
    };

    while (n_active > 0 && !balanced()) {
        for (std::size_t ti = 0; ti < templates.size(); ++ti) {
            if (excluded[ti]) continue;
            if (balanced()) break;
            const auto& t = templates[ti];
            auto bindings = sample_bindings(t, registry, cfg.alpha, rng);
            std::string variant = expand_template(t, bindings, registry);
            const bool fresh = !out.evil_cmds.count(variant) && !benign_cmds.count(variant) &&
                               (other_evil == nullptr || !other_evil->count(variant));
            if (fresh) {
                out.evil_cmds.insert(variant);
                out.records.push_back(
                    CommandRecord{std::move(variant), 1, "template:" + t.id, split});
                stalls[ti] = 0;
            } else if (++stalls[ti] >= cfg.max_duplicate_attempts) {
                excluded[ti] = true;
                --n_active;
                warnings.push_back("template " + t.id + " exhausted after " +
                                   std::to_string(cfg.max_duplicate_attempts) +
                                   " consecutive duplicate variants; excluded");
            }
        }
    }
    return out;
}

}  // namespace detail

// Assemble balanced train/test sets: baseline records plus per-template
// variants, with exact-string dedup inside each split, against the benign
// baseline, and across splits. Placeholder extraction for each split reads
// only that split's baseline.
inline DatasetBuildResult build_dataset(const std::vector<Template>& train_templates,
                                        const std::vector<Template>& test_templates,
                                        const std::vector<CommandRecord>& baseline_train,
                                        const std::vector<CommandRecord>& baseline_test,
                                        PlaceholderRegistry& registry, const SynthesisConfig& cfg) {
    for (const auto& rec : baseline_train)
        if (rec.label != 0) throw DataError("train baseline contains a non-benign record");
    for (const auto& rec : baseline_test)
        if (rec.label != 0) throw DataError("test baseline contains a non-benign record");
    for (const auto& tt : train_templates)
        for (const auto& te : test_templates)
            if (tt.id == te.id) throw DataError("template splits overlap on id " + tt.id);

    std::size_t delta = cfg.target_balance_delta;
    if (delta == 0) delta = train_templates.empty() ? 1 : train_templates.size() - 1;
    if (delta == 0) delta = 1;
    if (!train_templates.empty() && delta >= train_templates.size() + 1)
        throw ConfigError("target_balance_delta must be below the train template count");

    DatasetBuildResult result;
    Rng rng(mix64(cfg.seed ^ 0x64617461ULL));

    registry.index_baseline(baseline_train);
    auto train_build = detail::build_split(train_templates, baseline_train, Split::kTrain, registry,
                                           cfg, delta, nullptr, rng, result.warnings);

    registry.index_baseline(baseline_test);
    auto test_build = detail::build_split(test_templates, baseline_test, Split::kTest, registry,
                                          cfg, delta, &train_build.evil_cmds, rng, result.warnings);

    result.train = std::move(train_build.records);
    result.test = std::move(test_build.records);
    return result;
}

}  // namespace lotlkit
