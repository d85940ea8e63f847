#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <thread>

#include "support.hpp"
#include "tea/builtins.hpp"
#include "tea/codec.hpp"
#include "tea/memory_manager.hpp"
#include "tea/model_manager.hpp"
#include "tea/prompt_manager.hpp"
#include "tea/tracer.hpp"

using namespace tea;

namespace {

std::string temp_path(const std::string& stem) {
    static std::atomic<int> n{0};
    return (std::filesystem::temp_directory_path() /
            (stem + std::to_string(::getpid()) + "_" + std::to_string(n.fetch_add(1))))
        .string();
}

std::shared_ptr<ScriptedBackend> ok_backend(const std::string& id) {
    auto b = std::make_shared<ScriptedBackend>(id);
    b->respond_default(Value{{"text", "canned from " + id}});
    return b;
}

std::shared_ptr<ScriptedBackend> bad_backend(const std::string& id) {
    auto b = std::make_shared<ScriptedBackend>(id);
    b->always_fail("overloaded");
    return b;
}

}  // namespace

TEST_SUITE_BEGIN("managers");

TEST_CASE("model invoke returns the first backend's canned response") {
    ModelManager models;
    REQUIRE(models.register_backend(ok_backend("m1")).ok());
    auto got = models.invoke(Value{{"prompt", "hi"}}, {"m1"});
    REQUIRE(got.ok());
    CHECK(got.value()["text"] == "canned from m1");
    CHECK(got.value()["served_by"] == "m1");
}

TEST_CASE("fallback skips a failing backend and annotates the server") {
    ModelManager models;
    REQUIRE(models.register_backend(bad_backend("flaky")).ok());
    REQUIRE(models.register_backend(ok_backend("steady")).ok());
    auto got = models.invoke(Value{{"prompt", "hi"}}, {"flaky", "steady"});
    REQUIRE(got.ok());
    CHECK(got.value()["served_by"] == "steady");
}

TEST_CASE("an all-failing chain aggregates every cause") {
    ModelManager models;
    REQUIRE(models.register_backend(bad_backend("a")).ok());
    REQUIRE(models.register_backend(bad_backend("b")).ok());
    auto got = models.invoke(Value{{"prompt", "x"}}, {"a", "b"});
    REQUIRE_FALSE(got.ok());
    CHECK(got.error().kind == ErrorKind::BackendFailure);
    CHECK(got.error().detail.find("a: overloaded") != std::string::npos);
    CHECK(got.error().detail.find("b: overloaded") != std::string::npos);
}

TEST_CASE("chains reject unknown ids and empty chains") {
    ModelManager models;
    REQUIRE(models.register_backend(ok_backend("m1")).ok());
    CHECK(models.invoke(Value::object(), {}).error().kind == ErrorKind::ValidationFailed);
    CHECK(models.invoke(Value::object(), {"nope"}).error().kind == ErrorKind::NotFound);
    CHECK(models.register_backend(ok_backend("m1")).error().kind == ErrorKind::NameConflict);
}

TEST_CASE("scripted backends answer per-request fingerprints deterministically") {
    auto b = std::make_shared<ScriptedBackend>("s");
    b->respond(Value{{"q", 1}}, Value{{"a", 1}});
    b->respond(Value{{"q", 2}}, Value{{"a", 2}});
    ModelManager models;
    REQUIRE(models.register_backend(b).ok());
    CHECK(models.invoke(Value{{"q", 2}}, {"s"}).value()["a"] == 2);
    CHECK(models.invoke(Value{{"q", 1}}, {"s"}).value()["a"] == 1);
    CHECK_FALSE(models.invoke(Value{{"q", 3}}, {"s"}).ok());
}

TEST_CASE("prompt render is pure text substitution") {
    ManualClock clock;
    VersionManager versions(clock);
    PromptManager prompts(versions, nullptr, clock);
    PromptSpec spec;
    spec.name = "greet";
    spec.description = "greeting prompt";
    spec.system_template = "You are {persona}.";
    spec.message_template = "Hello {name}";
    spec.modules = {{"persona", "a terse assistant"}};
    REQUIRE(prompts.register_prompt(spec).ok());

    auto out = prompts.render("greet", Value{{"name", "World"}});
    REQUIRE(out.ok());
    CHECK(out.value().message == "Hello World");
    CHECK(out.value().system == "You are a terse assistant.");
}

TEST_CASE("render reports every missing variable by name") {
    ManualClock clock;
    VersionManager versions(clock);
    PromptManager prompts(versions, nullptr, clock);
    PromptSpec spec;
    spec.name = "p";
    spec.description = "d";
    spec.message_template = "{a} {b}";
    REQUIRE(prompts.register_prompt(spec).ok());
    auto out = prompts.render("p", Value::object());
    REQUIRE_FALSE(out.ok());
    CHECK(out.error().kind == ErrorKind::ValidationFailed);
    CHECK(out.error().detail.find("a") != std::string::npos);
    CHECK(out.error().detail.find("b") != std::string::npos);
}

TEST_CASE("doubled braces render as literal braces") {
    ManualClock clock;
    VersionManager versions(clock);
    PromptManager prompts(versions, nullptr, clock);
    PromptSpec spec;
    spec.name = "braces";
    spec.description = "d";
    spec.message_template = "literal {{x}} and value {x}";
    REQUIRE(prompts.register_prompt(spec).ok());
    auto out = prompts.render("braces", Value{{"x", "42"}});
    REQUIRE(out.ok());
    CHECK(out.value().message == "literal {x} and value 42");
}

TEST_CASE("non-string render variables substitute canonically") {
    ManualClock clock;
    VersionManager versions(clock);
    PromptManager prompts(versions, nullptr, clock);
    PromptSpec spec;
    spec.name = "p";
    spec.description = "d";
    spec.message_template = "data: {payload}";
    REQUIRE(prompts.register_prompt(spec).ok());
    auto out = prompts.render("p", Value{{"payload", Value{{"b", 1}, {"a", 2}}}});
    REQUIRE(out.ok());
    CHECK(out.value().message == "data: {\"a\":2,\"b\":1}");
}

TEST_CASE("prompt updates version while the old text stays resolvable") {
    ManualClock clock;
    VersionManager versions(clock);
    PromptManager prompts(versions, nullptr, clock);
    PromptSpec spec;
    spec.name = "p";
    spec.description = "d";
    spec.message_template = "old {x}";
    REQUIRE(prompts.register_prompt(spec).ok());
    REQUIRE(prompts.update_prompt("p", Value{{"message_template", "new {x}"}}).ok());

    auto now = prompts.render("p", Value{{"x", "1"}});
    REQUIRE(now.ok());
    CHECK(now.value().message == "new 1");

    auto old_cfg = versions.lookup("p", ComponentKind::prompt, VersionString{1, 0, 0});
    REQUIRE(old_cfg.ok());
    auto replay = PromptManager::render_config(old_cfg.value(), Value{{"x", "1"}});
    REQUIRE(replay.ok());
    CHECK(replay.value().message == "old 1");
}

TEST_CASE("trainable slots become evolution variables") {
    ManualClock clock;
    VersionManager versions(clock);
    PromptManager prompts(versions, nullptr, clock);
    PromptSpec spec;
    spec.name = "p";
    spec.description = "d";
    spec.system_template = "{style} {focus}";
    spec.modules = {{"style", "be brief"}, {"focus", "stay on topic"}};
    spec.trainable_slots = {"style", "focus"};
    REQUIRE(prompts.register_prompt(spec).ok());
    auto vars = prompts.extract_vars("p");
    REQUIRE(vars.ok());
    REQUIRE(vars.value().size() == 2);
    std::set<std::string> slots{vars.value()[0].slot, vars.value()[1].slot};
    CHECK(slots == std::set<std::string>{"focus", "style"});

    auto bad = PromptSpec{spec};
    bad.name = "q";
    bad.trainable_slots = {"missing"};
    CHECK(prompts.register_prompt(bad).error().kind == ErrorKind::ValidationFailed);
}

TEST_CASE("sessions open uniquely and seal on close") {
    SessionRegistry sessions(random_hex_ids());
    auto a = sessions.open("agent", "t1");
    auto b = sessions.open("agent", "t1");
    CHECK(a.session_id != b.session_id);
    CHECK(sessions.is_open(a.session_id));
    REQUIRE(sessions.close(a.session_id).ok());
    CHECK_FALSE(sessions.is_open(a.session_id));
    CHECK(sessions.close(a.session_id).error().kind == ErrorKind::LifecycleViolation);
    CHECK(sessions.close("nope").error().kind == ErrorKind::NotFound);
}

TEST_CASE("100 concurrent opens yield 100 distinct ids") {
    SessionRegistry sessions(random_hex_ids());
    std::vector<std::thread> threads;
    std::mutex mu;
    std::set<std::string> ids;
    for (int t = 0; t < 10; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 10; ++i) {
                auto h = sessions.open("a", "t");
                std::lock_guard<std::mutex> lock(mu);
                ids.insert(h.session_id);
            }
        });
    }
    for (auto& t : threads) t.join();
    CHECK(ids.size() == 100);
}

TEST_CASE("memory events number gaplessly and partition by session") {
    ManualClock clock;
    SessionRegistry sessions(sequential_ids("s"));
    MemoryManager memory(clock, sessions);
    auto s1 = sessions.open("a", "t1");
    auto s2 = sessions.open("a", "t2");

    for (int i = 0; i < 3; ++i) {
        REQUIRE(memory.record(s1, "step", Value{{"i", i}}).ok());
        REQUIRE(memory.record(s2, "other", Value{{"i", i}}).ok());
    }
    auto e1 = memory.events(s1.session_id);
    REQUIRE(e1.size() == 3);
    CHECK(e1[0].step == 1);
    CHECK(e1[2].step == 3);
    for (const auto& e : e1) CHECK(e.kind == "step");
    CHECK(memory.events("unknown").empty());
}

TEST_CASE("recording into a closed session is a lifecycle violation") {
    ManualClock clock;
    SessionRegistry sessions(sequential_ids("s"));
    MemoryManager memory(clock, sessions);
    auto s = sessions.open("a", "t");
    REQUIRE(sessions.close(s.session_id).ok());
    auto got = memory.record(s, "late", Value::object());
    REQUIRE_FALSE(got.ok());
    CHECK(got.error().kind == ErrorKind::LifecycleViolation);
}

TEST_CASE("the summary hook fires every N events over the trailing window") {
    ManualClock clock;
    SessionRegistry sessions(sequential_ids("s"));
    MemoryManager memory(clock, sessions);
    memory.set_summary_hook(default_summary_hook, 20);
    auto s = sessions.open("a", "t");
    for (int i = 0; i < 45; ++i) {
        REQUIRE(memory.record(s, i % 2 == 0 ? "even" : "odd", Value::object()).ok());
    }
    auto summaries = memory.summaries(s.session_id);
    REQUIRE(summaries.size() == 2);  // at events 20 and 40
    CHECK(summaries[0]["event_counts"]["even"] == 10);
    CHECK(summaries[0]["event_counts"]["odd"] == 10);
    CHECK(summaries[1]["from_step"] == 21);
    CHECK(summaries[1]["to_step"] == 40);
}

TEST_CASE("trace records index gaplessly and answer every query form") {
    ManualClock clock;
    SessionRegistry sessions(sequential_ids("s"));
    Tracer tracer(clock, sessions, sequential_ids("r"));
    auto s = sessions.open("agent", "task-7");
    auto r1 = tracer.record(s, Value{{"note", 1}}, std::nullopt);
    auto r2 = tracer.record(s, Value{{"note", 2}},
                            TraceInvocation{"tool", "add", Value{{"a", 1}}, Value{{"ok", true}}});
    REQUIRE(r1.ok());
    REQUIRE(r2.ok());
    CHECK(r1.value().index == 1);
    CHECK(r2.value().index == 2);

    auto by_session = tracer.by_session(s.session_id);
    REQUIRE(by_session.size() == 2);

    auto by_id = tracer.by_record_id(r2.value().record_id);
    REQUIRE(by_id.ok());
    CHECK(by_id.value().index == 2);
    CHECK(tracer.by_record_id("zzz").error().kind == ErrorKind::NotFound);

    auto by_index = tracer.by_index(s.session_id, 1);
    REQUIRE(by_index.ok());
    CHECK(by_index.value().record_id == r1.value().record_id);

    CHECK(tracer.by_task("task-7").size() == 2);
    CHECK(tracer.by_task("other").empty());
}

TEST_CASE("trace save/load round-trips the record set") {
    ManualClock clock;
    SessionRegistry sessions(sequential_ids("s"));
    Tracer tracer(clock, sessions, sequential_ids("r"));
    auto s1 = sessions.open("a", "t1");
    auto s2 = sessions.open("a", "t2");
    for (int i = 0; i < 5; ++i) {
        REQUIRE(tracer.record(i % 2 ? s1 : s2, Value{{"i", i}}, std::nullopt).ok());
    }
    auto path = temp_path("trace");
    REQUIRE(tracer.save(path).ok());

    Tracer fresh(clock, sessions, sequential_ids("x"));
    REQUIRE(fresh.load(path).ok());
    CHECK(fresh.total_records() == 5);
    auto a = tracer.by_session(s1.session_id);
    auto b = fresh.by_session(s1.session_id);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_value() == b[i].to_value());
    std::filesystem::remove(path);
}

TEST_CASE("concurrent savers leave one complete parseable file") {
    ManualClock clock;
    SessionRegistry sessions(sequential_ids("s"));
    Tracer a(clock, sessions, sequential_ids("a"));
    Tracer b(clock, sessions, sequential_ids("b"));
    auto sa = sessions.open("w", "ta");
    auto sb = sessions.open("w", "tb");
    for (int i = 0; i < 50; ++i) {
        REQUIRE(a.record(sa, Value{{"src", "a"}, {"i", i}}, std::nullopt).ok());
        REQUIRE(b.record(sb, Value{{"src", "b"}, {"i", i}}, std::nullopt).ok());
    }
    auto path = temp_path("clash");
    for (int round = 0; round < 10; ++round) {
        std::thread ta([&] { REQUIRE(a.save(path).ok()); });
        std::thread tb([&] { REQUIRE(b.save(path).ok()); });
        ta.join();
        tb.join();
        // The file is one writer's complete state, never interleaved bytes.
        Tracer check(clock, sessions, sequential_ids("c"));
        REQUIRE(check.load(path).ok());
        auto records = check.by_task("ta");
        auto other = check.by_task("tb");
        CHECK(((records.size() == 50 && other.empty()) ||
               (records.empty() && other.size() == 50)));
    }
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".lock");
}

TEST_CASE("loading a missing trace file is a persistence error") {
    ManualClock clock;
    SessionRegistry sessions(sequential_ids("s"));
    Tracer tracer(clock, sessions, sequential_ids("r"));
    auto got = tracer.load(temp_path("missing"));
    REQUIRE_FALSE(got.ok());
    CHECK(got.error().kind == ErrorKind::PersistenceError);
}

TEST_CASE("codec round-trips a config field-for-field") {
    builtins::BuiltinResolver resolver;
    auto cfg = testsupport::make_config("add", ComponentKind::tool, "adds", "src");
    cfg.descriptor.metadata["behavior_id"] = "builtin.add";
    auto text = codec_encode(cfg);
    auto decoded = codec_decode(text, &resolver);
    REQUIRE(decoded.ok());
    CHECK(decoded.value().config == cfg);
    CHECK_FALSE(decoded.value().dormant);
}

TEST_CASE("decoding with an unresolvable behavior flags dormant") {
    builtins::BuiltinResolver resolver;
    auto cfg = testsupport::make_config("odd", ComponentKind::tool, "no factory", "src");
    cfg.descriptor.metadata["behavior_id"] = "ghost.fn";
    auto decoded = codec_decode(codec_encode(cfg), &resolver);
    REQUIRE(decoded.ok());
    CHECK(decoded.value().dormant);

    auto prompt_cfg = testsupport::make_config("p", ComponentKind::prompt, "prompt", "");
    CHECK_FALSE(codec_decode(codec_encode(prompt_cfg), &resolver).value().dormant);
}

TEST_CASE("malformed codec text is a protocol error") {
    auto got = codec_decode("{not json", nullptr);
    REQUIRE_FALSE(got.ok());
    CHECK(got.error().kind == ErrorKind::ProtocolError);

    auto missing = codec_decode("{\"kind\":\"tool\"}\n", nullptr);
    REQUIRE_FALSE(missing.ok());
    CHECK(missing.error().kind == ErrorKind::ValidationFailed);
}

TEST_CASE("codec decode is lossless over randomized configs") {
    std::mt19937 rng(2);
    builtins::BuiltinResolver resolver;
    for (int i = 0; i < 200; ++i) {
        auto cfg = testsupport::make_config(testsupport::random_name(rng),
                                            ComponentKind::tool, "d" + std::to_string(i),
                                            "line1\nline2\t\"quoted\" \\ " + std::to_string(i));
        cfg.extensions["params"] =
            params_to_value({{"a", SemanticType::integer, bool(rng() % 2), "doc"}});
        cfg.extensions["nested"] = testsupport::random_value(rng, 3);
        auto decoded = codec_decode(codec_encode(cfg), &resolver);
        REQUIRE(decoded.ok());
        REQUIRE(decoded.value().config == cfg);
    }
}

TEST_SUITE_END();
