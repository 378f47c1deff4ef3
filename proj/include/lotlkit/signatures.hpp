#pragma once

#include <regex>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "lotlkit/errors.hpp"

namespace lotlkit {

struct SignatureRule {
    std::string id;
    std::string pattern;
};

// Compiled regex ruleset. Patterns are anchored on binary-flag adjacency or
// dotted-quad IPs, the way public LOTL detections are written.
class SignatureRuleset {
public:
    static SignatureRuleset from_rules(const std::vector<SignatureRule>& rules) {
        SignatureRuleset rs;
        std::unordered_set<std::string> ids;
        for (const auto& rule : rules) {
            if (!ids.insert(rule.id).second)
                throw ConfigError("duplicate signature rule id: " + rule.id);
            try {
                rs.compiled_.emplace_back(rule.pattern, std::regex::ECMAScript | std::regex::optimize);
            } catch (const std::regex_error& e) {
                throw ConfigError("signature rule " + rule.id + " does not compile: " + e.what());
            }
            rs.rules_.push_back(rule);
        }
        return rs;
    }

    static SignatureRuleset from_json(const nlohmann::json& j) {
        std::vector<SignatureRule> rules;
        for (const auto& item : j.at("rules"))
            rules.push_back({item.at("id").get<std::string>(), item.at("pattern").get<std::string>()});
        return from_rules(rules);
    }

    std::vector<std::string> match(const std::string& cmd) const {
        std::vector<std::string> hits;
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            if (std::regex_search(cmd, compiled_[i])) hits.push_back(rules_[i].id);
        }
        return hits;
    }

    bool any_match(const std::string& cmd) const {
        for (const auto& re : compiled_)
            if (std::regex_search(cmd, re)) return true;
        return false;
    }

    const std::vector<SignatureRule>& rules() const { return rules_; }

private:
    std::vector<SignatureRule> rules_;
    std::vector<std::regex> compiled_;
};

inline std::vector<std::string> match_signatures(const std::string& cmd,
                                                 const SignatureRuleset& rules) {
    return rules.match(cmd);
}

// Default ruleset distilled from public reverse-shell detection patterns.
inline SignatureRuleset default_signature_ruleset() {
    const std::vector<SignatureRule> rules = {
        {"nc-exec-flag", R"(\b(nc|netcat)\s+(-\w+\s+)*-\w*[ce]\w*(\s|$))"},
        {"dev-tcp-redirect", R"(/dev/(tcp|udp)/\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}/\d{1,5})"},
        {"mkfifo-shell-pipe", R"(mkfifo\s+\S+;cat\s+\S+\s*\|\s*\S*sh\s+-\w*i)"},
        {"interactive-shell", R"(\b(ba|da|z|k)?sh\s+-\w*i\b)"},
        {"exec-fd-dev", R"(exec\s+\d+<>\s*/dev/(tcp|udp)/\d{1,3}\.)"},
        {"python-pty-spawn", R"(python[\d.]*\s+-c\s+.{0,2}import.*(pty|dup2))"},
        {"perl-socket", R"(perl\s+(-e|-MIO)\b.*(Socket|fdopen))"},
        {"php-fsockopen", R"(php\s+-r\s+.{0,2}\$\w+\s*=\s*fsockopen)"},
        {"ruby-rsocket", R"(ruby\s+-rsocket\b)"},
        {"socat-exec", R"(socat\s+(tcp|udp):\S+\s+(EXEC|exec):)"},
        {"zsh-ztcp", R"(ztcp\s+\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}\s+\d+)"},
        {"lua-socket", R"(lua[\w.]*\s+-e\s+.{0,2}(local\s|require))"},
        {"awk-inet", R"(/inet/(tcp|udp)/\d+/\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}/)"},
        {"rcat-shell", R"(rcat\s+\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}\s+\d+\s+-r\b)"},
        {"telnet-pipe", R"(telnet\s+\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}\s+\d+\s*[0<>|])"},
    };
    return SignatureRuleset::from_rules(rules);
}

}  // namespace lotlkit
