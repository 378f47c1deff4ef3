#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "lotlkit/encode.hpp"
#include "lotlkit/errors.hpp"
#include "lotlkit/rng.hpp"

namespace lotlkit {

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    double gain = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // leaf payload: margin contribution or probability
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict_row(const std::vector<double>& x) const {
        std::int32_t cur = 0;
        while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
            const auto& nd = nodes[static_cast<std::size_t>(cur)];
            cur = x[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
        }
        return nodes[static_cast<std::size_t>(cur)].value;
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& nd : nodes)
            arr.push_back({nd.feature, nd.threshold, nd.gain, nd.left, nd.right, nd.value});
        return arr;
    }

    static Tree from_json(const nlohmann::json& arr) {
        Tree t;
        for (const auto& j : arr) {
            TreeNode nd;
            nd.feature = j.at(0).get<std::int32_t>();
            nd.threshold = j.at(1).get<double>();
            nd.gain = j.at(2).get<double>();
            nd.left = j.at(3).get<std::int32_t>();
            nd.right = j.at(4).get<std::int32_t>();
            nd.value = j.at(5).get<double>();
            t.nodes.push_back(nd);
        }
        return t;
    }
};

namespace detail {

// Column-major view used for split finding. Feature values are assumed
// non-negative; absent entries are implicit zeros.
struct CscMatrix {
    std::size_t rows = 0;
    std::size_t dims = 0;
    std::vector<std::size_t> col_ptr;
    std::vector<std::uint32_t> row;
    std::vector<double> val;

    static CscMatrix build(const FeatureMatrix& m) {
        CscMatrix csc;
        csc.rows = m.rows;
        csc.dims = m.dims;
        std::vector<std::size_t> counts(m.dims, 0);
        if (m.dense) {
            for (std::size_t r = 0; r < m.rows; ++r)
                for (std::size_t c = 0; c < m.dims; ++c)
                    if (m.dense_data[r * m.dims + c] != 0.0) ++counts[c];
        } else {
            for (auto c : m.col) ++counts[c];
        }
        csc.col_ptr.assign(m.dims + 1, 0);
        for (std::size_t c = 0; c < m.dims; ++c) csc.col_ptr[c + 1] = csc.col_ptr[c] + counts[c];
        csc.row.resize(csc.col_ptr.back());
        csc.val.resize(csc.col_ptr.back());
        std::vector<std::size_t> cursor(csc.col_ptr.begin(), csc.col_ptr.end() - 1);
        if (m.dense) {
            for (std::size_t r = 0; r < m.rows; ++r) {
                for (std::size_t c = 0; c < m.dims; ++c) {
                    const double v = m.dense_data[r * m.dims + c];
                    if (v == 0.0) continue;
                    csc.row[cursor[c]] = static_cast<std::uint32_t>(r);
                    csc.val[cursor[c]] = v;
                    ++cursor[c];
                }
            }
        } else {
            for (std::size_t r = 0; r < m.rows; ++r) {
                for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
                    const auto c = m.col[k];
                    csc.row[cursor[c]] = static_cast<std::uint32_t>(r);
                    csc.val[cursor[c]] = m.val[k];
                    ++cursor[c];
                }
            }
        }
        return csc;
    }
};

// Split statistics accumulator. For boosting a = gradient sum, b = hessian
// sum; for gini a = weight sum, b = positive-weight sum.
struct SplitAcc {
    double a = 0.0;
    double b = 0.0;
    double n = 0.0;

    SplitAcc& operator+=(const SplitAcc& o) {
        a += o.a;
        b += o.b;
        n += o.n;
        return *this;
    }
    SplitAcc operator-(const SplitAcc& o) const { return {a - o.a, b - o.b, n - o.n}; }
};

struct SplitDecision {
    double gain = 0.0;
    std::int32_t feature = -1;
    double threshold = 0.0;
    SplitAcc left;
};

// Criterion interface: per-row stats, leaf value, child admissibility and
// split gain from (parent, left, right) accumulators.
class TreeGrower {
public:
    struct Config {
        std::size_t max_depth = 10;
        std::size_t features_per_node = 0;  // 0 = all
        double min_gain = 1e-12;
        // Gradient sums can cancel exactly on symmetric data (XOR-like),
        // leaving every split with zero gain even though a deeper tree
        // separates perfectly. When enabled, a gainless root takes the first
        // valid split so the children get a chance to find real gains.
        bool root_fallback = true;
    };

    template <typename Criterion>
    static Tree grow(const CscMatrix& csc, const Criterion& crit,
                     const std::vector<std::int32_t>& initial_node_of_row, const Config& cfg,
                     Rng* rng, std::vector<std::int32_t>* final_assignment = nullptr) {
        Tree tree;
        std::vector<std::int32_t> node_of_row = initial_node_of_row;

        tree.nodes.emplace_back();
        std::vector<SplitAcc> node_acc(1);
        for (std::size_t r = 0; r < csc.rows; ++r)
            if (node_of_row[r] == 0) node_acc[0] += crit.row_stats(static_cast<std::uint32_t>(r));

        std::vector<std::int32_t> frontier{0};
        std::vector<SplitDecision> best;
        std::vector<std::vector<std::pair<double, std::uint32_t>>> buf;
        std::vector<std::vector<std::uint32_t>> node_features;  // per frontier slot

        for (std::size_t depth = 0; depth < cfg.max_depth && !frontier.empty(); ++depth) {
            const std::size_t n_nodes = tree.nodes.size();
            best.assign(n_nodes, {});
            if (buf.size() < n_nodes) buf.resize(n_nodes);

            // frontier membership and per-node feature subsets
            std::vector<char> in_frontier(n_nodes, 0);
            std::vector<std::vector<std::uint64_t>> feature_mask;
            const bool subsample =
                cfg.features_per_node > 0 && cfg.features_per_node < csc.dims && rng != nullptr;
            if (subsample) feature_mask.assign(n_nodes, {});
            for (auto nd : frontier) {
                in_frontier[static_cast<std::size_t>(nd)] = 1;
                if (subsample) {
                    auto& mask = feature_mask[static_cast<std::size_t>(nd)];
                    mask.assign((csc.dims + 63) / 64, 0);
                    std::size_t chosen = 0;
                    while (chosen < cfg.features_per_node) {
                        const auto f = static_cast<std::size_t>(rng->uniform(csc.dims));
                        auto& word = mask[f / 64];
                        const std::uint64_t bit = 1ULL << (f % 64);
                        if (!(word & bit)) {
                            word |= bit;
                            ++chosen;
                        }
                    }
                }
            }
            auto node_wants = [&](std::int32_t nd, std::size_t f) {
                if (!in_frontier[static_cast<std::size_t>(nd)]) return false;
                if (!subsample) return true;
                const auto& mask = feature_mask[static_cast<std::size_t>(nd)];
                return ((mask[f / 64] >> (f % 64)) & 1) != 0;
            };

            std::vector<SplitDecision> fallback;
            const bool want_fallback = cfg.root_fallback && depth == 0;
            if (want_fallback) fallback.assign(n_nodes, {});

            std::vector<std::int32_t> touched;
            for (std::size_t f = 0; f < csc.dims; ++f) {
                touched.clear();
                for (std::size_t k = csc.col_ptr[f]; k < csc.col_ptr[f + 1]; ++k) {
                    const auto r = csc.row[k];
                    const auto nd = node_of_row[r];
                    if (nd < 0 || !node_wants(nd, f)) continue;
                    if (csc.val[k] == 0.0) continue;
                    auto& b = buf[static_cast<std::size_t>(nd)];
                    if (b.empty()) touched.push_back(nd);
                    b.emplace_back(csc.val[k], r);
                }
                for (auto nd : touched) {
                    eval_column(crit, static_cast<std::int32_t>(f),
                                buf[static_cast<std::size_t>(nd)],
                                node_acc[static_cast<std::size_t>(nd)],
                                best[static_cast<std::size_t>(nd)], cfg.min_gain,
                                want_fallback ? &fallback[static_cast<std::size_t>(nd)] : nullptr);
                    buf[static_cast<std::size_t>(nd)].clear();
                }
                // Nodes whose sampled features hit an all-zero column still
                // need the zero/nonzero boundary considered; with an empty
                // nonzero set there is no candidate threshold, so skip.
            }
            if (want_fallback) {
                for (auto nd : frontier) {
                    auto& b = best[static_cast<std::size_t>(nd)];
                    auto& fb = fallback[static_cast<std::size_t>(nd)];
                    if (b.feature < 0 && fb.feature >= 0) b = fb;
                }
            }

            // materialize accepted splits
            std::vector<std::int32_t> left_of(n_nodes, -1);
            struct Pending {
                std::int32_t feature;
                double threshold;
                std::int32_t right;
            };
            std::vector<Pending> pending(n_nodes, Pending{-1, 0.0, -1});
            std::vector<std::int32_t> new_frontier;
            bool any_split = false;
            for (auto nd : frontier) {
                auto& d = best[static_cast<std::size_t>(nd)];
                if (d.feature < 0) continue;
                any_split = true;
                auto& parent = tree.nodes[static_cast<std::size_t>(nd)];
                const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
                const auto right_id = left_id + 1;
                parent.feature = d.feature;
                parent.threshold = d.threshold;
                parent.gain = d.gain;
                parent.left = left_id;
                parent.right = right_id;
                tree.nodes.emplace_back();
                tree.nodes.emplace_back();
                node_acc.resize(tree.nodes.size());
                node_acc[static_cast<std::size_t>(left_id)] = d.left;
                node_acc[static_cast<std::size_t>(right_id)] =
                    node_acc[static_cast<std::size_t>(nd)] - d.left;
                left_of[static_cast<std::size_t>(nd)] = left_id;
                pending.resize(tree.nodes.size(), Pending{-1, 0.0, -1});
                pending[static_cast<std::size_t>(left_id)] = {d.feature, d.threshold, right_id};
                new_frontier.push_back(left_id);
                new_frontier.push_back(right_id);
            }
            if (!any_split) break;

            // move rows: everything falls to the left child, then the split
            // column sends high values right
            for (std::size_t r = 0; r < csc.rows; ++r) {
                const auto nd = node_of_row[r];
                if (nd >= 0 && static_cast<std::size_t>(nd) < left_of.size() && left_of[static_cast<std::size_t>(nd)] >= 0)
                    node_of_row[r] = left_of[static_cast<std::size_t>(nd)];
            }
            std::vector<char> feature_done(csc.dims, 0);
            for (auto nd : frontier) {
                const auto& d = best[static_cast<std::size_t>(nd)];
                if (d.feature < 0 || feature_done[static_cast<std::size_t>(d.feature)]) continue;
                feature_done[static_cast<std::size_t>(d.feature)] = 1;
                const auto f = static_cast<std::size_t>(d.feature);
                for (std::size_t k = csc.col_ptr[f]; k < csc.col_ptr[f + 1]; ++k) {
                    const auto r = csc.row[k];
                    const auto cur = node_of_row[r];
                    if (cur < 0) continue;
                    const auto& p = pending[static_cast<std::size_t>(cur)];
                    if (p.feature == d.feature && csc.val[k] >= p.threshold)
                        node_of_row[r] = p.right;
                }
            }
            frontier = std::move(new_frontier);
        }

        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            if (tree.nodes[i].feature < 0) tree.nodes[i].value = crit.leaf_value(node_acc[i]);
        }
        if (final_assignment != nullptr) *final_assignment = std::move(node_of_row);
        return tree;
    }

private:
    template <typename Criterion>
    static void eval_column(const Criterion& crit, std::int32_t feature,
                            std::vector<std::pair<double, std::uint32_t>>& entries,
                            const SplitAcc& parent, SplitDecision& best, double min_gain,
                            SplitDecision* fallback = nullptr) {
        if (entries.empty()) return;
        std::sort(entries.begin(), entries.end());

        SplitAcc nonzero;
        for (const auto& [v, r] : entries) nonzero += crit.row_stats(r);
        SplitAcc left = parent - nonzero;  // the implicit-zero group
        double prev_value = 0.0;

        std::size_t i = 0;
        while (i < entries.size()) {
            // candidate threshold between the previous distinct value (or the
            // zero group) and this one
            const double v = entries[i].first;
            if (left.n > 0.0 && v > prev_value) {
                const double threshold = prev_value + (v - prev_value) / 2.0;
                const SplitAcc right = parent - left;
                if (crit.child_ok(left) && crit.child_ok(right)) {
                    const double gain = crit.split_gain(parent, left, right);
                    if (gain > min_gain && gain > best.gain) {
                        best.gain = gain;
                        best.feature = feature;
                        best.threshold = threshold;
                        best.left = left;
                    }
                    if (fallback != nullptr && fallback->feature < 0) {
                        fallback->gain = 0.0;
                        fallback->feature = feature;
                        fallback->threshold = threshold;
                        fallback->left = left;
                    }
                }
            }
            // absorb the whole run of equal values
            const double run_value = entries[i].first;
            while (i < entries.size() && entries[i].first == run_value) {
                left += crit.row_stats(entries[i].second);
                ++i;
            }
            prev_value = run_value;
        }
    }
};

}  // namespace detail

}  // namespace lotlkit
