#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "lotlkit/errors.hpp"
#include "lotlkit/record.hpp"
#include "lotlkit/rng.hpp"

namespace lotlkit {

// Synthetic legitimate-activity generator. Desk-scale stand-in for an
// enterprise baseline: a weighted mixture of admin command shapes covering
// file ops, /proc and /sys reads, package and process queries, and
// IP-bearing network utilities. Placeholder extraction (IPv4 literals,
// ports, /tmp paths, shell variables) finds material here.
//
// A fraction of records are ";"-joined compounds, matching the shape of
// windowed-aggregation telemetry where one record holds the distinct
// commands of a (host, parent, window) group.
class BaselineGrammar {
public:
    BaselineGrammar() { init_pools(); }

    // Probability that a record is a multi-command aggregate.
    double aggregate_probability = 0.35;

    struct Shape {
        std::string name;
        double weight;
        // Number of distinct commands this shape can produce.
        double capacity;
    };

    double total_capacity() const {
        double c = 0;
        for (const auto& s : shapes_) c += s.capacity;
        return c;
    }

    // Generate n unique benign commands. Deterministic for a fixed seed.
    std::vector<std::string> generate(std::size_t n, std::uint64_t seed) const {
        if (n == 0) throw ConfigError("baseline size must be > 0");
        const double cap = total_capacity();
        // Rejection sampling thrashes when the target nears capacity.
        const auto max_unique = static_cast<std::size_t>(cap / 4);
        if (n > max_unique) {
            throw ConfigError("requested " + std::to_string(n) +
                              " unique baseline commands; achievable maximum is about " +
                              std::to_string(max_unique));
        }

        Rng rng(mix64(seed ^ 0x6c6f746cULL));
        std::vector<std::string> out;
        out.reserve(n);
        std::unordered_set<std::string> seen;
        seen.reserve(n * 2);

        double weight_sum = 0;
        for (const auto& s : shapes_) weight_sum += s.weight;

        auto emit_primitive = [&]() {
            double pickw = rng.uniform_real() * weight_sum;
            std::size_t idx = 0;
            for (; idx + 1 < shapes_.size(); ++idx) {
                pickw -= shapes_[idx].weight;
                if (pickw < 0) break;
            }
            return emit(idx, rng);
        };

        std::size_t stall = 0;
        while (out.size() < n) {
            std::string cmd = emit_primitive();
            if (rng.bernoulli(aggregate_probability)) {
                const std::size_t extra = 1 + rng.uniform(3);
                for (std::size_t k = 0; k < extra; ++k) {
                    cmd += ';';
                    cmd += emit_primitive();
                }
            }
            if (seen.insert(cmd).second) {
                out.push_back(std::move(cmd));
                stall = 0;
            } else if (++stall > 100000) {
                throw ConfigError("baseline generation stalled at " + std::to_string(out.size()) +
                                  " unique commands; achievable maximum is about " +
                                  std::to_string(max_unique));
            }
        }
        return out;
    }

    std::vector<CommandRecord> generate_records(std::size_t n, std::uint64_t seed,
                                                Split split) const {
        std::vector<CommandRecord> records;
        records.reserve(n);
        for (auto& cmd : generate(n, seed)) records.push_back(make_baseline_record(cmd, split));
        return records;
    }

    const std::vector<Shape>& shapes() const { return shapes_; }

    void set_weight(const std::string& name, double w) {
        for (auto& s : shapes_) {
            if (s.name == name) {
                s.weight = w;
                return;
            }
        }
        throw ConfigError("unknown baseline shape: " + name);
    }

private:
    std::vector<std::string> users_, services_, logfiles_, words_, pkgs_, ifaces_, scripts_,
        etcfiles_, procfiles_, sysfiles_, devpaths_, varnames_, exts_, dirs_, patterns_;
    std::vector<int> ports_;
    std::vector<Shape> shapes_;

    void init_pools() {
        users_ = {"root",     "admin",   "deploy",  "ubuntu",  "svcacct", "ops",
                  "jenkins",  "backup",  "monitor", "www-data", "postgres", "appuser",
                  "devops",   "sre",     "ansible", "puppet",  "grafana", "influx",
                  "tomcat",   "celery",  "airflow", "etl",     "webadmin", "release",
                  "builder"};
        services_ = {"nginx",    "sshd",     "cron",      "docker",   "mysql",    "redis",
                     "postfix",  "rsyslog",  "haproxy",   "kubelet",  "chronyd",  "auditd",
                     "apache2",  "mariadb",  "mongod",    "rabbitmq", "memcached", "vault",
                     "consul",   "etcd",     "prometheus", "grafana", "logstash", "filebeat",
                     "telegraf", "unbound",  "dnsmasq",   "keepalived", "varnish", "squid"};
        logfiles_ = {"syslog",          "auth.log",        "kern.log",       "dpkg.log",
                     "nginx/access.log", "nginx/error.log", "mysql/error.log", "audit/audit.log",
                     "boot.log",        "cron.log",        "mail.log",       "secure",
                     "apache2/access.log", "apache2/error.log", "redis/redis.log", "haproxy.log",
                     "messages",        "daemon.log",      "ufw.log",        "fail2ban.log",
                     "mongodb/mongod.log", "rabbitmq/startup.log", "postgresql/postgresql.log",
                     "app/worker.log",  "app/api.log",     "app/scheduler.log", "cloud-init.log",
                     "alternatives.log", "apt/history.log", "unattended-upgrades.log"};
        words_ = {"report",   "backup",   "cache",    "session",  "deploy",   "metrics",
                  "export",   "dump",     "stage",    "batch",    "sync",     "probe",
                  "update",   "trace",    "index",    "manifest", "bundle",   "archive",
                  "snapshot", "payload",  "ingest",   "rollup",   "billing",  "invoice",
                  "catalog",  "inventory", "telemetry", "heartbeat", "quota",  "ledger",
                  "orders",   "events",   "audit",    "retention", "mirror",  "replica",
                  "shard",    "segment",  "partition", "offsets",  "cursor",  "digest",
                  "summary",  "rollback", "release",  "hotfix",   "patchset", "baseline",
                  "capture",  "extract",  "transform", "loader",   "monitor",  "alerts",
                  "incident", "ticket",   "runbook",  "failover", "drill",    "sandbox",
                  "staging",  "canary",   "bluegreen", "preview",  "nightly",  "weekly",
                  "migration", "seeds",   "fixtures", "schema",   "uploads",  "assets",
                  "thumbs",   "avatars",  "invoices", "receipts", "contracts", "profiles",
                  "queue",    "worker",   "broker",   "registry", "artifacts", "builds",
                  "packages", "vendors",  "modules",  "plugins",  "themes",   "locales",
                  "configs",  "secrets",  "certs",    "keys",     "tokens",   "grants",
                  "policies", "quotas",   "limits",   "budgets",  "costs",    "usage",
                  "traffic",  "latency",  "errors",   "spans",    "gauges",   "counters",
                  "histograms", "buckets", "streams",  "topics",  "channels", "feeds",
                  "webhooks", "callbacks", "uploads2", "exports2", "outbox",  "inbox"};
        pkgs_ = {"openssl",  "curl",    "vim",      "htop",    "tmux",     "jq",
                 "rsync",    "git",     "python3",  "gcc",     "make",     "strace",
                 "tcpdump",  "lsof",    "socat",    "wget",    "unzip",    "zip",
                 "nmap",     "iotop",   "sysstat",  "ncdu",    "tree",     "silversearcher-ag",
                 "ripgrep",  "fd-find", "bat",      "httpie",  "ansible",  "terraform",
                 "kubectl",  "helm",    "awscli",   "azure-cli", "gcloud",  "docker-compose",
                 "podman",   "buildah", "skopeo",   "cri-tools", "netcat",  "ncat",
                 "ruby",     "perl",    "php-cli",  "lua5.1",    "zsh",     "dash",
                 "telnet",   "rcat",    "gawk",     "busybox"};
        ifaces_ = {"eth0", "eth1", "ens3", "ens5", "bond0", "docker0", "lo",
                   "br0",  "veth1", "wlan0", "tun0", "vlan100"};
        scripts_ = {"rotate_logs.sh",   "backup_db.sh",    "healthcheck.sh",  "cleanup.sh",
                    "provision.sh",     "do_deploy.sh",    "sync_assets.sh",  "collect_stats.sh",
                    "renew_certs.sh",   "prune_images.sh", "vacuum_db.sh",    "warm_cache.sh",
                    "check_disks.sh",   "rebuild_index.sh", "trim_journals.sh", "export_report.sh",
                    "reload_proxy.sh",  "drain_node.sh",   "restart_workers.sh", "fetch_feeds.sh",
                    "compact_topics.sh", "capture_flows.sh", "verify_backup.sh", "rotate_keys.sh",
                    "bootstrap_env.sh"};
        etcfiles_ = {"passwd",        "group",          "hosts",          "fstab",
                     "resolv.conf",   "crontab",        "services",       "ssh/sshd_config",
                     "nginx/nginx.conf", "hostname",    "hosts.allow",    "sudoers",
                     "logrotate.conf", "sysctl.conf",   "docker/daemon.json", "environment",
                     "security/limits.conf", "ld.so.conf", "profile",     "rsyslog.conf"};
        procfiles_ = {"status", "maps",   "cmdline", "io",      "limits", "environ",
                      "stat",   "smaps",  "fd",      "cgroup",  "mounts", "net/dev",
                      "sched",  "stack",  "wchan",   "oom_score"};
        sysfiles_ = {"fs/cgroup/memory/memory.stat",
                     "fs/cgroup/memory/memory.usage_in_bytes",
                     "fs/cgroup/cpu/cpu.stat",
                     "class/net/eth0/statistics/rx_bytes",
                     "class/net/eth0/statistics/tx_bytes",
                     "kernel/mm/transparent_hugepage/enabled",
                     "block/sda/queue/scheduler",
                     "class/thermal/thermal_zone0/temp",
                     "fs/cgroup/blkio/blkio.throttle.io_serviced",
                     "class/net/docker0/operstate",
                     "devices/system/cpu/cpu0/cpufreq/scaling_governor",
                     "kernel/hostname",
                     "fs/file-nr",
                     "class/dmi/id/product_uuid"};
        devpaths_ = {"/dev/sda1", "/dev/sdb1", "/dev/vda1", "/dev/nvme0n1p1",
                     "/dev/mapper/vg0-root", "/dev/md0", "/dev/loop3", "/dev/dm-2"};
        varnames_ = {"logdir",  "tmpfile", "target",  "bkpath",  "relname", "svc",
                     "envname", "outfile", "srcdir",  "dst",     "appdir",  "conf",
                     "workdir", "region",  "bucket",  "prefix",  "retries", "timeout",
                     "version", "branch",  "tag",     "commit",  "buildid", "artifact",
                     "channel", "topic",   "jobname", "queue",   "shard",   "node"};
        exts_ = {"log", "txt", "csv", "json", "gz",  "tar.gz", "bak", "out",
                 "tmp", "dat", "yml", "yaml", "toml", "pid",   "sock", "db",
                 "sql", "tsv"};
        dirs_ = {"/var/log",   "/var/lib",  "/var/tmp",   "/var/www",    "/var/spool",
                 "/opt/app",   "/srv/data", "/usr/lib",   "/usr/share",  "/etc",
                 "/home",      "/var/cache", "/var/backups", "/opt/tools", "/srv/web",
                 "/usr/local/share", "/run", "/mnt/data", "/data/warehouse", "/exports",
                 "/var/run",   "/opt/monitoring", "/srv/ftp", "/var/mail", "/opt/ci"};
        patterns_ = {"error",    "fail",     "denied",   "timeout", "refused", "warning",
                     "panic",    "segfault", "oom",      "retry",   "throttle", "unreachable",
                     "conflict", "deadlock", "corrupt",  "expired", "invalid",  "rejected",
                     "dropped",  "evicted",  "starved",  "stale",   "degraded", "flapping",
                     "saturated"};
        ports_ = {22,   53,   80,   443,  3306, 5432, 6379, 8080, 8443, 9090,
                  9200, 2049, 25,   389,  636,  1521, 2181, 2379, 4369, 5044,
                  5672, 8000, 8081, 8500, 9092, 9100, 9300, 11211, 27017, 50070};

        const auto U = static_cast<double>(users_.size());
        const auto S = static_cast<double>(services_.size());
        const auto L = static_cast<double>(logfiles_.size());
        const auto W = static_cast<double>(words_.size());
        const auto P = static_cast<double>(ports_.size());
        const auto Proc = static_cast<double>(procfiles_.size());
        const auto Sys = static_cast<double>(sysfiles_.size());
        const auto Pat = static_cast<double>(patterns_.size());
        const auto Dev = static_cast<double>(devpaths_.size());
        const auto Ext = static_cast<double>(exts_.size());
        const auto Var = static_cast<double>(varnames_.size());
        const auto Pkg = static_cast<double>(pkgs_.size());
        const auto Scr = static_cast<double>(scripts_.size());
        const auto If = static_cast<double>(ifaces_.size());
        const double kIpSpace = 3.0 * 250 * 250;  // three /16-ish private families
        const double kPidSpace = 65000;
        const double kNumSpace = 50;

        shapes_ = {
            {"ls_dir", 5.0, 6.0 * 11.0 * W},
            {"cat_proc", 6.0, kPidSpace * Proc},
            {"cat_sys", 4.0, Sys * 4.0},
            {"grep_log", 5.0, Pat * L * 4.0},
            {"tail_log", 4.0, L * kNumSpace * 2.0},
            {"ps_grep", 4.0, S * 3.0},
            {"ps_awk", 2.0, 9.0 * 3.0},
            {"systemctl", 4.0, S * 3.0},
            {"journalctl", 3.0, S * kNumSpace},
            {"disk", 3.0, 11.0 + Dev * 2.0},
            {"find_clean", 3.0, 11.0 * Ext * kNumSpace},
            {"find_exec", 2.0, 11.0 * Ext * 3.0},
            {"ping", 0.8, kIpSpace * 5.0},
            {"ssh_cmd", 0.8, U * kIpSpace * 4.0},
            {"curl", 0.8, kIpSpace * P * W},
            {"scp_rsync", 0.5, U * kIpSpace * W * 2.0},
            {"tar", 2.5, W * 11.0 * 2.0},
            {"dd", 1.0, kNumSpace * W},
            {"redirect_combo", 3.0, S * 3.0 * W},
            {"export_echo", 4.0, Var * W * 3.0},
            {"net_stat", 3.0, P * 3.0 + If * 2.0},
            {"pkg_query", 2.5, Pkg * 3.0},
            {"py_oneliner", 2.0, 6.0 * W},
            {"perl_sed_awk", 2.0, Pat * L * 3.0 + 9.0 * 10.0},
            {"while_read", 0.8, Var * W},
            {"mkfifo_rare", 0.4, W * 2.0},
            {"kill_proc", 2.0, kPidSpace + S},
            {"docker_git", 2.0, S * kNumSpace + W * kNumSpace},
            {"run_script", 4.0, Scr * 3.0 * 2.0},
            {"checksum", 1.5, W * Ext * 2.0},
            {"nc_probe", 0.4, kIpSpace * P * 2.0},
            {"openssl_probe", 0.3, kIpSpace * 3.0},
            {"copy_move", 3.5, W * Ext * 11.0 * 2.0},
            {"shell_wrapper", 3.5, S * 6.0 + W * 4.0},
            {"sysctl_query", 1.5, 12.0},
            {"id_check", 2.0, U * 3.0 + 2.0},
            {"bin_path_ops", 3.0, 40.0 * 4.0},
            {"env_prefix", 2.0, 30.0 * 4.0},
            {"port_check", 1.2, kIpSpace * P * 3.0},
            {"mktemp_work", 1.5, W * 2.0 * 255.0},
            {"dated_log", 2.0, L * 12.0 * 28.0},
        };
    }

    std::string ip(Rng& rng) const {
        const int fam = static_cast<int>(rng.uniform(3));
        const int b = static_cast<int>(rng.uniform(250)) + 1;
        const int c = static_cast<int>(rng.uniform(250)) + 1;
        switch (fam) {
            case 0: return "10." + std::to_string(rng.uniform(250)) + "." + std::to_string(b) + "." + std::to_string(c);
            case 1: return "192.168." + std::to_string(b) + "." + std::to_string(c);
            default: return "172.16." + std::to_string(b) + "." + std::to_string(c);
        }
    }

    std::string pid(Rng& rng) const { return std::to_string(rng.uniform_int(120, 65119)); }
    std::string num(Rng& rng) const { return std::to_string(rng.uniform_int(1, 50)); }
    std::string port(Rng& rng) const { return std::to_string(rng.pick(ports_)); }

    // long-tail file stems: word, word_NN, word-hex4, word.word
    std::string stem(Rng& rng) const {
        const auto kind = rng.uniform(4);
        if (kind == 0) return rng.pick(words_);
        if (kind == 1) return rng.pick(words_) + "_" + std::to_string(rng.uniform_int(1, 99));
        if (kind == 2) return rng.pick(words_) + "-" + hash_hex(rng.next_u64()).substr(0, 4);
        return rng.pick(words_) + "." + rng.pick(words_);
    }

    std::string emit(std::size_t shape_idx, Rng& rng) const {
        const std::string& name = shapes_[shape_idx].name;
        if (name == "ls_dir") {
            static const std::vector<std::string> flags = {"-la", "-lh", "-l", "-ltr", "-a", "-lart"};
            return "ls " + rng.pick(flags) + " " + rng.pick(dirs_) + "/" + stem(rng);
        }
        if (name == "cat_proc") {
            static const std::vector<std::string> bins = {"cat", "head -n 20", "wc -l"};
            return rng.pick(bins) + " /proc/" + pid(rng) + "/" + rng.pick(procfiles_);
        }
        if (name == "cat_sys") {
            static const std::vector<std::string> bins = {"cat", "head -n 5", "tail -n 3", "wc -c"};
            return rng.pick(bins) + " /sys/" + rng.pick(sysfiles_);
        }
        if (name == "grep_log") {
            static const std::vector<std::string> flags = {"-i", "-c", "-n", "-iw", "-e"};
            return "grep " + rng.pick(flags) + " " + rng.pick(patterns_) + " /var/log/" + rng.pick(logfiles_);
        }
        if (name == "tail_log") {
            return (rng.bernoulli(0.5) ? std::string("tail -n ") : std::string("head -n ")) +
                   std::to_string(rng.uniform_int(5, 54)) + " /var/log/" + rng.pick(logfiles_);
        }
        if (name == "ps_grep") {
            static const std::vector<std::string> psf = {"aux", "-ef", "axo pid,cmd"};
            return "ps " + rng.pick(psf) + " | grep " + rng.pick(services_);
        }
        if (name == "ps_awk") {
            static const std::vector<std::string> psf = {"aux", "-ef", "axu"};
            return "ps " + rng.pick(psf) + " | grep -v grep | awk '{print $" +
                   std::to_string(rng.uniform_int(0, 9)) + "}'";
        }
        if (name == "systemctl") {
            static const std::vector<std::string> verbs = {"status", "restart", "is-active"};
            return "systemctl " + rng.pick(verbs) + " " + rng.pick(services_);
        }
        if (name == "journalctl") {
            return "journalctl -u " + rng.pick(services_) + " -n " + std::to_string(rng.uniform_int(10, 59));
        }
        if (name == "disk") {
            if (rng.bernoulli(0.4)) return "df -h " + rng.pick(dirs_);
            if (rng.bernoulli(0.5)) return "du -sh " + rng.pick(dirs_) + "/" + stem(rng);
            return "mount | grep " + rng.pick(devpaths_);
        }
        if (name == "find_clean") {
            return "find " + rng.pick(dirs_) + " -name '*." + rng.pick(exts_) + "' -mtime +" +
                   num(rng) + " -delete 2>/dev/null";
        }
        if (name == "find_exec") {
            static const std::vector<std::string> modes = {"644", "600", "755"};
            return "find " + rng.pick(dirs_) + " -type f -name '*." + rng.pick(exts_) +
                   "' -exec chmod " + rng.pick(modes) + " {} \\;";
        }
        if (name == "ping") {
            return "ping -c " + std::to_string(rng.uniform_int(1, 5)) + " " + ip(rng);
        }
        if (name == "ssh_cmd") {
            static const std::vector<std::string> remote = {"uptime", "df -h", "free -m", "hostname"};
            if (rng.bernoulli(0.4))
                return "ssh -i /home/" + rng.pick(users_) + "/.ssh/id_rsa " + rng.pick(users_) +
                       "@" + ip(rng) + " " + rng.pick(remote);
            return "ssh " + rng.pick(users_) + "@" + ip(rng) + " '" + rng.pick(remote) + "'";
        }
        if (name == "curl") {
            if (rng.bernoulli(0.5))
                return "curl -s http://" + ip(rng) + ":" + port(rng) + "/" + rng.pick(words_) +
                       " | head -n " + num(rng);
            return "curl -o /tmp/" + rng.pick(words_) + ".out http://" + ip(rng) + ":" + port(rng) +
                   "/" + rng.pick(words_) + "." + rng.pick(exts_);
        }
        if (name == "scp_rsync") {
            if (rng.bernoulli(0.5))
                return "scp /tmp/" + rng.pick(words_) + ".tar.gz " + rng.pick(users_) + "@" +
                       ip(rng) + ":/var/backup/";
            return "rsync -avz /srv/data/" + rng.pick(words_) + "/ " + rng.pick(users_) + "@" +
                   ip(rng) + ":/backup/" + rng.pick(words_) + "/";
        }
        if (name == "tar") {
            if (rng.bernoulli(0.5))
                return "tar -czf /tmp/" + stem(rng) + ".tar.gz " + rng.pick(dirs_) + "/" +
                       stem(rng) + " 2>/dev/null";
            return "tar -tzf /tmp/" + stem(rng) + ".tar.gz | wc -l";
        }
        if (name == "dd") {
            return "dd if=/dev/zero of=" + std::string("/tmp/") + stem(rng) + ".dat bs=1M count=" +
                   num(rng) + " 2>&1";
        }
        if (name == "redirect_combo") {
            static const std::vector<std::string> verbs = {"restart", "reload", "start"};
            if (rng.bernoulli(0.5))
                return "systemctl " + rng.pick(verbs) + " " + rng.pick(services_) +
                       " > /dev/null 2>&1";
            return "/usr/sbin/logrotate /etc/logrotate.d/" + rng.pick(services_) + " >> /var/log/" +
                   rng.pick(words_) + ".log 2>&1";
        }
        if (name == "export_echo") {
            const std::string& v = rng.pick(varnames_);
            if (rng.bernoulli(0.4)) return "export " + v + "=/var/tmp/" + rng.pick(words_) + "; echo $" + v;
            if (rng.bernoulli(0.5)) return "echo $" + v + " >> /tmp/" + stem(rng) + ".txt";
            return "export " + v + "=" + rng.pick(words_) + "_" + num(rng);
        }
        if (name == "net_stat") {
            if (rng.bernoulli(0.4)) return "ss -tlnp | grep :" + port(rng);
            if (rng.bernoulli(0.5)) return "netstat -an | grep :" + port(rng);
            return "ip addr show dev " + rng.pick(ifaces_);
        }
        if (name == "pkg_query") {
            if (rng.bernoulli(0.4)) return "dpkg -l | grep " + rng.pick(pkgs_);
            if (rng.bernoulli(0.5)) return "rpm -q " + rng.pick(pkgs_);
            return "apt list --installed 2>/dev/null | grep " + rng.pick(pkgs_);
        }
        if (name == "py_oneliner") {
            static const std::vector<std::string> lines = {
                "python3 -c 'import socket;print(socket.gethostname())'",
                "python3 -c 'import sys;print(sys.version)'",
                "python3 -c 'import os;print(os.getloadavg())'",
                "python3 -c 'import json,os;print(json.dumps(dict(os.environ)))'",
                "python3 -c 'import platform;print(platform.release())'",
                "python3 -c 'import socket;print(socket.getfqdn())'"};
            const int kind = static_cast<int>(rng.uniform(4));
            if (kind == 0)
                return "python3 -c 'import os;print(os.getenv(\"" + rng.pick(varnames_) + "\"))'";
            if (kind == 1)
                return "python3 -c 'print(\"" + rng.pick(words_) + "\");print(len(\"" +
                       rng.pick(words_) + "\"))'";
            std::string base = rng.pick(lines);
            if (rng.bernoulli(0.5)) return base;
            return base + " >> /tmp/" + stem(rng) + ".txt";
        }
        if (name == "perl_sed_awk") {
            const int kind = static_cast<int>(rng.uniform(3));
            if (kind == 0)
                return "awk '/" + rng.pick(patterns_) + "/ {print $" +
                       std::to_string(rng.uniform_int(1, 9)) + "}' /var/log/" + rng.pick(logfiles_);
            if (kind == 1)
                return "sed -n '" + std::to_string(rng.uniform_int(1, 9)) + "," +
                       std::to_string(rng.uniform_int(10, 99)) + "p' /etc/" + rng.pick(etcfiles_);
            return "perl -e 'print \"" + rng.pick(words_) + "\\n\";'";
        }
        if (name == "while_read") {
            const std::string& v = rng.pick(varnames_);
            return "while read " + v + "; do echo $" + v + "; done < /tmp/" + rng.pick(words_) + ".txt";
        }
        if (name == "mkfifo_rare") {
            if (rng.bernoulli(0.5)) return "mkfifo /var/run/" + rng.pick(words_) + ".fifo";
            return "rm -f /tmp/" + rng.pick(words_) + ".fifo";
        }
        if (name == "kill_proc") {
            if (rng.bernoulli(0.5)) return "kill -9 " + pid(rng);
            return "pkill -f " + rng.pick(services_);
        }
        if (name == "docker_git") {
            if (rng.bernoulli(0.5))
                return "docker logs " + rng.pick(services_) + " --tail " + std::to_string(rng.uniform_int(10, 59));
            return "git -C /opt/" + rng.pick(words_) + " log --oneline -n " + num(rng);
        }
        if (name == "run_script") {
            static const std::vector<std::string> shells = {"bash", "sh", "/bin/bash"};
            std::string base = rng.pick(shells) + " /usr/local/bin/" + rng.pick(scripts_);
            if (rng.bernoulli(0.5)) return base;
            return base + " --verbose";
        }
        if (name == "checksum") {
            static const std::vector<std::string> sums = {"md5sum", "sha256sum"};
            return rng.pick(sums) + " /tmp/" + stem(rng) + "." + rng.pick(exts_);
        }
        if (name == "nc_probe") {
            static const std::vector<std::string> flags = {"-z", "-vz"};
            return "nc " + rng.pick(flags) + " " + ip(rng) + " " + port(rng);
        }
        if (name == "shell_wrapper") {
            static const std::vector<std::string> shells = {"/bin/sh", "/bin/bash", "sh", "bash"};
            const int kind = static_cast<int>(rng.uniform(4));
            if (kind == 0)
                return rng.pick(shells) + " -c 'systemctl reload " + rng.pick(services_) + "'";
            if (kind == 1)
                return rng.pick(shells) + " -c 'df -h > /tmp/" + rng.pick(words_) + ".txt'";
            if (kind == 2)
                return rng.pick(shells) + " -c 'cat /proc/loadavg >> /var/log/" + rng.pick(words_) +
                       ".log'";
            return "/usr/bin/env " + rng.pick(shells) + " /usr/local/bin/" + rng.pick(scripts_);
        }
        if (name == "bin_path_ops") {
            static const std::vector<std::string> bins = {
                "bash", "sh",   "zsh",  "dash", "nc",   "socat", "perl", "python3",
                "ruby", "php",  "lua",  "awk",  "telnet", "curl", "rsync", "git"};
            const int kind = static_cast<int>(rng.uniform(4));
            if (kind == 0) return "stat /usr/bin/" + rng.pick(bins);
            if (kind == 1) return "ls -l /bin/" + rng.pick(bins);
            if (kind == 2) return "file /usr/bin/" + rng.pick(bins);
            return "md5sum /bin/" + rng.pick(bins);
        }
        if (name == "env_prefix") {
            const int kind = static_cast<int>(rng.uniform(4));
            if (kind == 0) return "LANG=C sort /tmp/" + stem(rng) + ".txt";
            if (kind == 1) return "TZ=UTC date +%s >> /var/log/" + rng.pick(words_) + ".log";
            if (kind == 2)
                return "DEBIAN_FRONTEND=noninteractive apt-get install -y " + rng.pick(pkgs_);
            return "GIT_DIR=/opt/" + rng.pick(words_) + "/.git git log --oneline -n " + num(rng);
        }
        if (name == "id_check") {
            const int kind = static_cast<int>(rng.uniform(5));
            if (kind == 0) return "id -u";
            if (kind == 1) return "id " + rng.pick(users_);
            if (kind == 2) return "whoami";
            if (kind == 3) return "groups " + rng.pick(users_);
            return "true";
        }
        if (name == "port_check") {
            const int kind = static_cast<int>(rng.uniform(3));
            if (kind == 0)
                return "timeout 1 bash -c '</dev/tcp/" + ip(rng) + "/" + port(rng) +
                       "' && echo open || echo closed";
            if (kind == 1)
                return "php -r '$c=@fsockopen(\"" + ip(rng) + "\"," + port(rng) +
                       ");echo $c ? \"up\" : \"down\";'";
            return "python3 -c 'import socket;print(socket.socket().connect_ex((\"" + ip(rng) +
                   "\"," + port(rng) + ")))'";
        }
        if (name == "sysctl_query") {
            static const std::vector<std::string> keys = {
                "vm.swappiness",          "kernel.hostname",      "net.core.somaxconn",
                "fs.file-max",            "kernel.pid_max",       "vm.overcommit_memory",
                "net.ipv4.ip_forward",    "kernel.random.uuid",   "fs.inotify.max_user_watches",
                "net.ipv4.tcp_fin_timeout", "vm.dirty_ratio",     "kernel.osrelease"};
            return "sysctl -n " + rng.pick(keys);
        }
        if (name == "copy_move") {
            const std::string src = rng.pick(dirs_) + "/" + stem(rng) + "." + rng.pick(exts_);
            if (rng.bernoulli(0.3)) return "cp -r " + rng.pick(dirs_) + "/" + rng.pick(words_) +
                                           " /tmp/" + stem(rng) + ".bak";
            if (rng.bernoulli(0.5)) return "cp " + src + " /tmp/" + stem(rng) + ".bak";
            return "mv " + src + " " + rng.pick(dirs_) + "/" + stem(rng) + "." + rng.pick(exts_);
        }
        if (name == "mktemp_work") {
            const std::string hex = hash_hex(rng.next_u64()).substr(0, 6);
            if (rng.bernoulli(0.5))
                return "mktemp -d /tmp/" + rng.pick(words_) + ".XXXXXX";
            return "touch /tmp/" + rng.pick(words_) + "." + hex;
        }
        if (name == "dated_log") {
            const std::string day = std::to_string(rng.uniform_int(1, 28));
            const std::string month = std::to_string(rng.uniform_int(1, 12));
            return "zgrep -c " + rng.pick(patterns_) + " /var/log/" + rng.pick(logfiles_) + "-2024" +
                   (month.size() == 1 ? "0" + month : month) + (day.size() == 1 ? "0" + day : day) +
                   ".gz";
        }
        // openssl_probe
        return "openssl s_client -connect " + ip(rng) + ":443 < /dev/null 2>/dev/null | head -n " + num(rng);
    }
};

inline std::vector<CommandRecord> generate_synthetic_baseline(std::size_t n, std::uint64_t seed,
                                                              Split split = Split::kTrain) {
    return BaselineGrammar().generate_records(n, seed, split);
}

}  // namespace lotlkit
