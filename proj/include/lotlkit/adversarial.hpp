#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "lotlkit/errors.hpp"
#include "lotlkit/record.hpp"
#include "lotlkit/rng.hpp"

namespace lotlkit {

// Adversarial-training augmentation: copy a rho-fraction of the malicious
// training records with a random benign training command prepended
// (";"-joined) and append the copies, still labeled malicious. The defender
// is assumed unaware of the attacker's actual manipulations, so this is the
// naive prepend-only hardening. rho = 0 leaves the set untouched.
inline std::vector<CommandRecord> augment_adversarial(const std::vector<CommandRecord>& train,
                                                      double rho, std::uint64_t seed) {
    if (rho < 0.0 || rho > 1.0) throw ConfigError("adversarial rho must be in [0, 1]");

    std::vector<std::size_t> malicious_idx;
    std::vector<std::size_t> benign_idx;
    for (std::size_t i = 0; i < train.size(); ++i)
        (train[i].label == 1 ? malicious_idx : benign_idx).push_back(i);

    const auto n_perturb =
        static_cast<std::size_t>(std::llround(rho * static_cast<double>(malicious_idx.size())));
    if (n_perturb == 0) return train;
    if (benign_idx.empty())
        throw DataError("adversarial augmentation needs benign training records to prepend");

    Rng rng(mix64(seed ^ 0x61647674ULL));
    auto chosen = malicious_idx;
    rng.shuffle(chosen);
    chosen.resize(n_perturb);

    std::vector<CommandRecord> out = train;
    out.reserve(train.size() + n_perturb);
    for (auto idx : chosen) {
        const auto& benign = train[benign_idx[rng.uniform(benign_idx.size())]];
        CommandRecord rec;
        rec.cmd = benign.cmd + ";" + train[idx].cmd;
        rec.label = 1;
        rec.origin = "adversarial:train_prepend";
        rec.split = train[idx].split;
        out.push_back(std::move(rec));
    }
    return out;
}

// Wrapper matching the train-then-harden flow: augment, then hand the
// records to any trainer callable.
template <typename Trainer>
auto adversarial_train(Trainer&& trainer, const std::vector<CommandRecord>& train, double rho,
                       std::uint64_t seed) {
    return trainer(augment_adversarial(train, rho, seed));
}

}  // namespace lotlkit
