#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lotlkit/errors.hpp"

namespace lotlkit {

enum class TokenizerMode { kWhitespace, kWordpunct, kBpe };

inline const char* to_string(TokenizerMode m) {
    switch (m) {
        case TokenizerMode::kWhitespace: return "whitespace";
        case TokenizerMode::kWordpunct: return "wordpunct";
        case TokenizerMode::kBpe: return "bpe";
    }
    return "wordpunct";
}

inline TokenizerMode tokenizer_mode_from_string(const std::string& s) {
    if (s == "whitespace") return TokenizerMode::kWhitespace;
    if (s == "wordpunct") return TokenizerMode::kWordpunct;
    if (s == "bpe") return TokenizerMode::kBpe;
    throw ConfigError("unknown tokenizer mode: " + s);
}

namespace detail {

// ASCII word characters, the \w of the wordpunct pattern.
inline bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline bool is_space_char(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace detail

// Split on runs of space, tab and newline.
inline std::vector<std::string> tokenize_whitespace(std::string_view cmd) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < cmd.size()) {
        while (i < cmd.size() && (cmd[i] == ' ' || cmd[i] == '\t' || cmd[i] == '\n')) ++i;
        std::size_t start = i;
        while (i < cmd.size() && cmd[i] != ' ' && cmd[i] != '\t' && cmd[i] != '\n') ++i;
        if (i > start) out.emplace_back(cmd.substr(start, i - start));
    }
    return out;
}

// Maximal runs of word characters or of non-word non-space characters,
// i.e. the pattern \w+|[^\w\s]+.
inline std::vector<std::string> tokenize_wordpunct(std::string_view cmd) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < cmd.size()) {
        if (detail::is_space_char(cmd[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (detail::is_word_char(cmd[i])) {
            while (i < cmd.size() && detail::is_word_char(cmd[i])) ++i;
        } else {
            while (i < cmd.size() && !detail::is_word_char(cmd[i]) && !detail::is_space_char(cmd[i]))
                ++i;
        }
        out.emplace_back(cmd.substr(start, i - start));
    }
    return out;
}

}  // namespace lotlkit
