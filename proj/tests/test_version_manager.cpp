#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "tea/clock.hpp"
#include "tea/version_manager.hpp"

using namespace tea;
using testsupport::make_config;

namespace {

VersionString v(const char* s) { return VersionString::parse(s).value(); }

}  // namespace

TEST_SUITE_BEGIN("version_manager");

TEST_CASE("record on an empty store creates a one-entry history") {
    ManualClock clock;
    VersionManager vm(clock);
    auto rec = vm.record(make_config("add", ComponentKind::tool, "adds", "s0"), "registered");
    REQUIRE(rec.ok());
    CHECK(rec.value().state == LifecycleState::active);
    CHECK(vm.history("add", ComponentKind::tool).size() == 1);
}

TEST_CASE("recording the same triple twice is a name conflict") {
    ManualClock clock;
    VersionManager vm(clock);
    auto cfg = make_config("add", ComponentKind::tool, "adds", "s0");
    REQUIRE(vm.record(cfg, "registered").ok());
    auto dup = vm.record(cfg, "again");
    REQUIRE_FALSE(dup.ok());
    CHECK(dup.error().kind == ErrorKind::NameConflict);
}

TEST_CASE("register-then-update-twice replays to a three-entry ordered history") {
    // Replay oracle: apply the three mutations by hand and compare.
    ManualClock clock;
    VersionManager vm(clock);
    std::vector<std::string> expected;
    VersionString ver = initial_version();
    for (int i = 0; i < 3; ++i) {
        REQUIRE(vm.record(make_config("add", ComponentKind::tool, "adds", "s" + std::to_string(i),
                                      ver),
                          i == 0 ? "registered" : "update")
                    .ok());
        expected.push_back(ver.render());
        ver = bump(ver, BumpLevel::patch);
    }
    auto hist = vm.history("add", ComponentKind::tool);
    REQUIRE(hist.size() == 3);
    for (size_t i = 0; i < hist.size(); ++i) CHECK(hist[i].version.render() == expected[i]);
    CHECK(expected == std::vector<std::string>{"1.0.0", "1.0.1", "1.0.2"});
}

TEST_CASE("history of an unknown name is empty") {
    ManualClock clock;
    VersionManager vm(clock);
    CHECK(vm.history("ghost", ComponentKind::tool).empty());
}

TEST_CASE("history sorts numerically, not lexically") {
    ManualClock clock;
    VersionManager vm(clock);
    REQUIRE(vm.record(make_config("t", ComponentKind::tool, "d", "s", v("1.2.0")), "r").ok());
    REQUIRE(vm.record(make_config("t", ComponentKind::tool, "d", "s", v("1.10.0")), "r").ok());
    auto hist = vm.history("t", ComponentKind::tool);
    REQUIRE(hist.size() == 2);
    CHECK(hist[0].version.render() == "1.2.0");
    CHECK(hist[1].version.render() == "1.10.0");
}

TEST_CASE("latest returns the maximal non-archived record") {
    ManualClock clock;
    VersionManager vm(clock);
    REQUIRE(vm.record(make_config("t", ComponentKind::tool, "d", "s0", v("1.0.0")), "r").ok());
    REQUIRE(vm.record(make_config("t", ComponentKind::tool, "d", "s1", v("1.0.1")), "r").ok());
    CHECK(vm.latest("t", ComponentKind::tool).value().version.render() == "1.0.1");

    REQUIRE(vm.set_lifecycle("t", ComponentKind::tool, v("1.0.1"), LifecycleState::archived).ok());
    CHECK(vm.latest("t", ComponentKind::tool).value().version.render() == "1.0.0");

    REQUIRE(vm.set_lifecycle("t", ComponentKind::tool, v("1.0.0"), LifecycleState::archived).ok());
    auto none = vm.latest("t", ComponentKind::tool);
    REQUIRE_FALSE(none.ok());
    CHECK(none.error().kind == ErrorKind::NotFound);
}

TEST_CASE("lifecycle transitions are one-way") {
    ManualClock clock;
    VersionManager vm(clock);
    REQUIRE(vm.record(make_config("t", ComponentKind::tool, "d", "s"), "r").ok());

    CHECK(vm.set_lifecycle("t", ComponentKind::tool, v("1.0.0"), LifecycleState::deprecated).ok());
    CHECK(vm.set_lifecycle("t", ComponentKind::tool, v("1.0.0"), LifecycleState::archived).ok());
    auto back = vm.set_lifecycle("t", ComponentKind::tool, v("1.0.0"), LifecycleState::active);
    REQUIRE_FALSE(back.ok());
    CHECK(back.error().kind == ErrorKind::LifecycleViolation);

    auto missing = vm.set_lifecycle("t", ComponentKind::tool, v("9.9.9"), LifecycleState::archived);
    REQUIRE_FALSE(missing.ok());
    CHECK(missing.error().kind == ErrorKind::VersionNotFound);
}

TEST_CASE("a deprecated version still resolves through latest") {
    ManualClock clock;
    VersionManager vm(clock);
    REQUIRE(vm.record(make_config("t", ComponentKind::tool, "d", "s"), "r").ok());
    REQUIRE(vm.set_lifecycle("t", ComponentKind::tool, v("1.0.0"), LifecycleState::deprecated).ok());
    auto latest = vm.latest("t", ComponentKind::tool);
    REQUIRE(latest.ok());
    CHECK(latest.value().state == LifecycleState::deprecated);
}

TEST_CASE("lookup returns the exact stored config") {
    ManualClock clock;
    VersionManager vm(clock);
    const std::string source = "def add(a, b):\n    return a + b\n";
    REQUIRE(vm.record(make_config("add", ComponentKind::tool, "adds", source), "r").ok());
    auto cfg = vm.lookup("add", ComponentKind::tool, v("1.0.0"));
    REQUIRE(cfg.ok());
    CHECK(cfg.value().source == source);

    auto missing = vm.lookup("add", ComponentKind::tool, v("2.0.0"));
    REQUIRE_FALSE(missing.ok());
    CHECK(missing.error().kind == ErrorKind::VersionNotFound);
}

TEST_CASE("interleaved records across names keep per-name ledgers") {
    // Replay oracle: a per-name ledger of (version, source) pairs.
    ManualClock clock;
    VersionManager vm(clock);
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> ledger;
    std::mt19937 rng(123);
    const std::vector<std::string> names{"alpha", "beta", "gamma"};
    for (int i = 0; i < 10; ++i) {
        const auto& name = names[rng() % names.size()];
        auto& entries = ledger[name];
        VersionString ver =
            entries.empty() ? initial_version()
                            : bump(VersionString::parse(entries.back().first).value(),
                                   BumpLevel::patch);
        std::string source = name + "-src-" + std::to_string(i);
        REQUIRE(vm.record(make_config(name, ComponentKind::tool, "d", source, ver), "r").ok());
        entries.emplace_back(ver.render(), source);
    }
    for (const auto& [name, entries] : ledger) {
        for (const auto& [ver, source] : entries) {
            auto cfg = vm.lookup(name, ComponentKind::tool, VersionString::parse(ver).value());
            REQUIRE(cfg.ok());
            CHECK(cfg.value().source == source);
        }
    }
}

TEST_CASE("random operation sequences match a naive ledger oracle") {
    struct OracleRow {
        std::string name;
        VersionString version;
        LifecycleState state;
        std::string source;
    };

    ManualClock clock;
    VersionManager vm(clock);
    std::vector<OracleRow> oracle;
    std::mt19937 rng(2024);
    const std::vector<std::string> names{"a", "b", "c", "d"};

    auto oracle_rows = [&](const std::string& name) {
        std::vector<OracleRow> rows;
        for (const auto& r : oracle) {
            if (r.name == name) rows.push_back(r);
        }
        std::sort(rows.begin(), rows.end(),
                  [](const OracleRow& x, const OracleRow& y) { return x.version < y.version; });
        return rows;
    };

    for (int step = 0; step < 600; ++step) {
        const auto& name = names[rng() % names.size()];
        int action = rng() % 3;
        if (action == 0) {
            VersionString ver{int(rng() % 3), int(rng() % 3), int(rng() % 3)};
            std::string src = "s" + std::to_string(step);
            bool dup = std::any_of(oracle.begin(), oracle.end(), [&](const OracleRow& r) {
                return r.name == name && r.version == ver;
            });
            auto got = vm.record(make_config(name, ComponentKind::tool, "d", src, ver), "r");
            if (dup) {
                REQUIRE_FALSE(got.ok());
                CHECK(got.error().kind == ErrorKind::NameConflict);
            } else {
                REQUIRE(got.ok());
                oracle.push_back({name, ver, LifecycleState::active, src});
            }
        } else if (action == 1) {
            VersionString ver{int(rng() % 3), int(rng() % 3), int(rng() % 3)};
            auto to = static_cast<LifecycleState>(rng() % 3);
            auto it = std::find_if(oracle.begin(), oracle.end(), [&](const OracleRow& r) {
                return r.name == name && r.version == ver;
            });
            auto got = vm.set_lifecycle(name, ComponentKind::tool, ver, to);
            if (it == oracle.end()) {
                REQUIRE_FALSE(got.ok());
                CHECK(got.error().kind == ErrorKind::VersionNotFound);
            } else if (lifecycle_transition_legal(it->state, to)) {
                REQUIRE(got.ok());
                it->state = to;
            } else {
                REQUIRE_FALSE(got.ok());
                CHECK(got.error().kind == ErrorKind::LifecycleViolation);
            }
        } else {
            auto rows = oracle_rows(name);
            auto hist = vm.history(name, ComponentKind::tool);
            REQUIRE(hist.size() == rows.size());
            for (size_t i = 0; i < rows.size(); ++i) {
                CHECK(hist[i].version == rows[i].version);
                CHECK(hist[i].state == rows[i].state);
                CHECK(hist[i].config.source == rows[i].source);
            }
            const OracleRow* best = nullptr;
            for (const auto& r : rows) {
                if (r.state == LifecycleState::archived) continue;
                if (!best || r.version > best->version) best = &r;
            }
            auto latest = vm.latest(name, ComponentKind::tool);
            if (best) {
                REQUIRE(latest.ok());
                CHECK(latest.value().version == best->version);
            } else {
                CHECK_FALSE(latest.ok());
            }
        }
    }
}

TEST_CASE("created_at is monotonically non-decreasing per insertion") {
    ManualClock clock;
    VersionManager vm(clock);
    VersionString ver = initial_version();
    for (int i = 0; i < 5; ++i) {
        REQUIRE(vm.record(make_config("t", ComponentKind::tool, "d", "s", ver), "r").ok());
        ver = bump(ver, BumpLevel::patch);
    }
    auto hist = vm.history("t", ComponentKind::tool);
    for (size_t i = 1; i < hist.size(); ++i) CHECK(hist[i].created_at >= hist[i - 1].created_at);
}

TEST_CASE("version record round-trips through its value form") {
    ManualClock clock;
    VersionManager vm(clock);
    REQUIRE(vm.record(make_config("t", ComponentKind::environment, "d", "s"), "registered").ok());
    auto rec = vm.history("t", ComponentKind::environment).front();
    auto back = VersionRecord::from_value(rec.to_value());
    REQUIRE(back.ok());
    CHECK(back.value().to_value() == rec.to_value());
}

TEST_SUITE_END();
