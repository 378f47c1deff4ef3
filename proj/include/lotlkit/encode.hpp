#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"
#include "lotlkit/rng.hpp"
#include "lotlkit/vocab.hpp"

namespace lotlkit {

enum class EncoderKind { kOneHot, kTfidf, kMinHash, kTokenIds };

inline const char* to_string(EncoderKind k) {
    switch (k) {
        case EncoderKind::kOneHot: return "onehot";
        case EncoderKind::kTfidf: return "tfidf";
        case EncoderKind::kMinHash: return "minhash";
        case EncoderKind::kTokenIds: return "token_ids";
    }
    return "onehot";
}

inline EncoderKind encoder_kind_from_string(const std::string& s) {
    if (s == "onehot") return EncoderKind::kOneHot;
    if (s == "tfidf") return EncoderKind::kTfidf;
    if (s == "minhash") return EncoderKind::kMinHash;
    if (s == "token_ids") return EncoderKind::kTokenIds;
    throw ConfigError("unknown encoder kind: " + s);
}

// Sparse (CSR) or dense row-major feature store with aligned labels.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t dims = 0;
    EncoderKind kind = EncoderKind::kOneHot;
    bool dense = false;

    std::vector<std::size_t> row_ptr;  // sparse: rows+1 offsets
    std::vector<std::uint32_t> col;
    std::vector<double> val;
    std::vector<double> dense_data;  // dense: rows*dims
    std::vector<int> labels;

    void densify_row(std::size_t r, std::vector<double>& out) const {
        out.assign(dims, 0.0);
        if (dense) {
            std::copy(dense_data.begin() + static_cast<std::ptrdiff_t>(r * dims),
                      dense_data.begin() + static_cast<std::ptrdiff_t>((r + 1) * dims), out.begin());
        } else {
            for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
                out[col[k]] = val[k];
        }
    }

    double at(std::size_t r, std::size_t c) const {
        if (dense) return dense_data[r * dims + c];
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            if (col[k] == c) return val[k];
        return 0.0;
    }
};

// Fitted encoder: vocabulary plus any statistics the kind needs.
struct EncoderSpec {
    EncoderKind kind = EncoderKind::kOneHot;
    Vocabulary vocabulary;
    std::size_t minhash_k = 64;
    std::uint64_t minhash_seed = 0x6d696e68ULL;
    std::size_t max_len = 256;
    std::vector<double> idf;  // tfidf only, indexed by vocabulary id

    std::size_t dims() const {
        switch (kind) {
            case EncoderKind::kOneHot:
            case EncoderKind::kTfidf: return vocabulary.size();
            case EncoderKind::kMinHash: return minhash_k;
            case EncoderKind::kTokenIds: return max_len;
        }
        return vocabulary.size();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["version"] = 1;
        j["kind"] = to_string(kind);
        j["vocabulary"] = vocabulary.to_json();
        j["minhash_k"] = minhash_k;
        j["minhash_seed"] = minhash_seed;
        j["max_len"] = max_len;
        j["idf"] = idf;
        return j;
    }

    static EncoderSpec from_json(const nlohmann::json& j) {
        if (j.at("version").get<int>() != 1) throw DataError("unsupported encoder version");
        EncoderSpec spec;
        spec.kind = encoder_kind_from_string(j.at("kind").get<std::string>());
        spec.vocabulary = Vocabulary::from_json(j.at("vocabulary"));
        spec.minhash_k = j.at("minhash_k").get<std::size_t>();
        spec.minhash_seed = j.at("minhash_seed").get<std::uint64_t>();
        spec.max_len = j.at("max_len").get<std::size_t>();
        spec.idf = j.at("idf").get<std::vector<double>>();
        return spec;
    }
};

struct EncoderParams {
    std::size_t minhash_k = 64;
    std::uint64_t minhash_seed = 0x6d696e68ULL;
    std::size_t max_len = 256;
};

// TF-IDF stores idf(t) = ln((1+N)/(1+df(t))) + 1 over the training documents;
// the other kinds carry no fitted statistics beyond the vocabulary.
inline EncoderSpec fit_encoder(EncoderKind kind,
                               const std::vector<std::vector<std::string>>& train_tokens,
                               const Vocabulary& vocabulary, const EncoderParams& params = {}) {
    if (params.minhash_k < 1) throw ConfigError("minhash_k must be >= 1");
    if (params.max_len < 1) throw ConfigError("max_len must be >= 1");

    EncoderSpec spec;
    spec.kind = kind;
    spec.vocabulary = vocabulary;
    spec.minhash_k = params.minhash_k;
    spec.minhash_seed = params.minhash_seed;
    spec.max_len = params.max_len;

    if (kind == EncoderKind::kTfidf) {
        if (train_tokens.empty()) throw DataError("TF-IDF fit needs a non-empty corpus");
        const std::size_t n_docs = train_tokens.size();
        std::vector<std::uint64_t> df(vocabulary.size(), 0);
        std::unordered_set<std::uint32_t> ids_in_doc;
        for (const auto& doc : train_tokens) {
            ids_in_doc.clear();
            for (const auto& tok : doc) ids_in_doc.insert(vocabulary.id(tok));
            for (auto id : ids_in_doc) ++df[id];
        }
        spec.idf.resize(vocabulary.size());
        for (std::size_t i = 0; i < spec.idf.size(); ++i) {
            spec.idf[i] = std::log((1.0 + static_cast<double>(n_docs)) /
                                   (1.0 + static_cast<double>(df[i]))) +
                          1.0;
        }
    }
    return spec;
}

// One encoded row as sparse pairs (onehot/tfidf) or a dense vector.
struct EncodedRow {
    std::vector<std::pair<std::uint32_t, double>> sparse;
    std::vector<double> dense;
    bool is_dense = false;
};

inline EncodedRow encode(const std::vector<std::string>& tokens, const EncoderSpec& spec) {
    EncodedRow row;
    switch (spec.kind) {
        case EncoderKind::kOneHot: {
            std::unordered_set<std::uint32_t> present;
            for (const auto& tok : tokens) present.insert(spec.vocabulary.id(tok));
            row.sparse.reserve(present.size());
            for (auto id : present) row.sparse.emplace_back(id, 1.0);
            std::sort(row.sparse.begin(), row.sparse.end());
            break;
        }
        case EncoderKind::kTfidf: {
            std::map<std::uint32_t, double> tf;
            for (const auto& tok : tokens) tf[spec.vocabulary.id(tok)] += 1.0;
            row.sparse.reserve(tf.size());
            for (const auto& [id, count] : tf)
                row.sparse.emplace_back(id, count * spec.idf.at(id));
            break;
        }
        case EncoderKind::kMinHash: {
            // k minima of seeded 64-bit hashes over the token *set*,
            // normalized into [0, 1).
            row.is_dense = true;
            row.dense.assign(spec.minhash_k, 1.0);
            std::unordered_set<std::string> uniq(tokens.begin(), tokens.end());
            for (std::size_t i = 0; i < spec.minhash_k; ++i) {
                const std::uint64_t seed = mix64(spec.minhash_seed + i);
                std::uint64_t best = ~std::uint64_t{0};
                for (const auto& tok : uniq) best = std::min(best, hash_with_seed(tok, seed));
                if (!uniq.empty())
                    row.dense[i] = static_cast<double>(best >> 11) * 0x1.0p-53;
            }
            break;
        }
        case EncoderKind::kTokenIds: {
            row.is_dense = true;
            row.dense.assign(spec.max_len, static_cast<double>(Vocabulary::kPadId));
            const std::size_t n = std::min(tokens.size(), spec.max_len);
            for (std::size_t i = 0; i < n; ++i)
                row.dense[i] = static_cast<double>(spec.vocabulary.id(tokens[i]));
            break;
        }
    }
    return row;
}

inline FeatureMatrix encode_matrix(const std::vector<std::vector<std::string>>& docs,
                                   const std::vector<int>& labels, const EncoderSpec& spec) {
    if (!labels.empty() && labels.size() != docs.size())
        throw DataError("label count does not match row count");

    FeatureMatrix m;
    m.kind = spec.kind;
    m.rows = docs.size();
    m.dims = spec.dims();
    m.labels = labels;
    m.dense = spec.kind == EncoderKind::kMinHash || spec.kind == EncoderKind::kTokenIds;

    if (m.dense) {
        m.dense_data.reserve(m.rows * m.dims);
        for (const auto& doc : docs) {
            auto row = encode(doc, spec);
            m.dense_data.insert(m.dense_data.end(), row.dense.begin(), row.dense.end());
        }
    } else {
        m.row_ptr.reserve(m.rows + 1);
        m.row_ptr.push_back(0);
        for (const auto& doc : docs) {
            auto row = encode(doc, spec);
            for (const auto& [c, v] : row.sparse) {
                m.col.push_back(c);
                m.val.push_back(v);
            }
            m.row_ptr.push_back(m.col.size());
        }
    }
    return m;
}

// ---- versioned binary container ------------------------------------------

namespace detail {

template <typename T>
void write_pod(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("truncated feature matrix file");
    return v;
}

}  // namespace detail

inline void save_feature_matrix(const FeatureMatrix& m, std::ostream& out) {
    out.write("LKFM", 4);
    detail::write_pod<std::uint32_t>(out, 1);  // version
    detail::write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(m.kind));
    detail::write_pod<std::uint8_t>(out, m.dense ? 1 : 0);
    detail::write_pod<std::uint64_t>(out, m.rows);
    detail::write_pod<std::uint64_t>(out, m.dims);
    detail::write_pod<std::uint64_t>(out, m.labels.size());
    for (int y : m.labels) detail::write_pod<std::int8_t>(out, static_cast<std::int8_t>(y));
    if (m.dense) {
        for (double v : m.dense_data) detail::write_pod<double>(out, v);
    } else {
        detail::write_pod<std::uint64_t>(out, m.col.size());
        for (auto p : m.row_ptr) detail::write_pod<std::uint64_t>(out, p);
        for (auto c : m.col) detail::write_pod<std::uint32_t>(out, c);
        for (auto v : m.val) detail::write_pod<double>(out, v);
    }
}

inline FeatureMatrix load_feature_matrix(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "LKFM", 4) != 0)
        throw DataError("not a feature matrix file");
    if (detail::read_pod<std::uint32_t>(in) != 1)
        throw DataError("unsupported feature matrix version");

    FeatureMatrix m;
    m.kind = static_cast<EncoderKind>(detail::read_pod<std::uint8_t>(in));
    m.dense = detail::read_pod<std::uint8_t>(in) != 0;
    m.rows = detail::read_pod<std::uint64_t>(in);
    m.dims = detail::read_pod<std::uint64_t>(in);
    const auto n_labels = detail::read_pod<std::uint64_t>(in);
    m.labels.resize(n_labels);
    for (auto& y : m.labels) y = detail::read_pod<std::int8_t>(in);
    if (m.dense) {
        m.dense_data.resize(m.rows * m.dims);
        for (auto& v : m.dense_data) v = detail::read_pod<double>(in);
    } else {
        const auto nnz = detail::read_pod<std::uint64_t>(in);
        m.row_ptr.resize(m.rows + 1);
        for (auto& p : m.row_ptr) p = detail::read_pod<std::uint64_t>(in);
        m.col.resize(nnz);
        for (auto& c : m.col) c = detail::read_pod<std::uint32_t>(in);
        m.val.resize(nnz);
        for (auto& v : m.val) v = detail::read_pod<double>(in);
    }
    return m;
}

// JSON export for small matrices.
inline nlohmann::json feature_matrix_to_json(const FeatureMatrix& m) {
    nlohmann::json j;
    j["version"] = 1;
    j["kind"] = to_string(m.kind);
    j["rows"] = m.rows;
    j["dims"] = m.dims;
    j["dense"] = m.dense;
    j["labels"] = m.labels;
    if (m.dense) {
        j["data"] = m.dense_data;
    } else {
        j["row_ptr"] = m.row_ptr;
        j["col"] = m.col;
        j["val"] = m.val;
    }
    return j;
}

}  // namespace lotlkit
