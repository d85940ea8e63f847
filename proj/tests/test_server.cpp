#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <sstream>
#include <thread>

#include "support.hpp"
#include "tea/server.hpp"

using namespace tea;

namespace {

RuntimeOptions test_options(const std::string& dir = "") {
    RuntimeOptions opts;
    opts.clock = std::make_shared<ManualClock>();
    opts.ids = sequential_ids();
    opts.data_dir = dir.empty() ? (std::filesystem::temp_directory_path() /
                                   ("tea_rt_" + std::to_string(::getpid()) + "_" +
                                    std::to_string(rand())))
                                      .string()
                                : dir;
    return opts;
}

Value register_add_params() {
    return Value{{"spec", Value{{"name", "add"},
                                {"description", "adds two integers"},
                                {"metadata", Value{{"behavior_id", "builtin.add"}}},
                                {"params", params_to_value(
                                               {{"a", SemanticType::integer, true, "first"},
                                                {"b", SemanticType::integer, true, "second"}})},
                                {"source", "lambda a, b: a + b"}}}};
}

// Blocking line-oriented client over a raw socket.
struct LineClient {
    int fd = -1;
    std::string buffer;

    explicit LineClient(int port) {
        fd = ::socket(AF_INET, SOCK_STREAM, 0);
        REQUIRE(fd >= 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(uint16_t(port));
        ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
        REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    }
    ~LineClient() {
        if (fd >= 0) ::close(fd);
    }

    void send_line(const std::string& line) {
        std::string out = line + "\n";
        REQUIRE(::write(fd, out.data(), out.size()) == ssize_t(out.size()));
    }

    std::string read_line() {
        while (true) {
            auto nl = buffer.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer.substr(0, nl);
                buffer.erase(0, nl + 1);
                return line;
            }
            char chunk[2048];
            ssize_t n = ::read(fd, chunk, sizeof(chunk));
            REQUIRE(n > 0);
            buffer.append(chunk, size_t(n));
        }
    }
};

}  // namespace

TEST_SUITE_BEGIN("server");

TEST_CASE("dispatch answers tool.list on an empty registry with []") {
    TeaRuntime rt(test_options());
    Dispatcher dispatcher(rt);
    auto resp = dispatcher.dispatch({"1", "tool.list", Value::object()});
    REQUIRE(resp.ok);
    CHECK(resp.result == Value::array());
    CHECK(resp.id == "1");
}

TEST_CASE("dispatch classifies unknown ops and bad envelopes as protocol errors") {
    TeaRuntime rt(test_options());
    Dispatcher dispatcher(rt);
    auto unknown = dispatcher.dispatch({"1", "tool.destroy", Value::object()});
    REQUIRE_FALSE(unknown.ok);
    CHECK(unknown.error->kind == ErrorKind::ProtocolError);

    auto no_id = dispatcher.dispatch({"", "tool.list", Value::object()});
    REQUIRE_FALSE(no_id.ok);

    auto malformed = dispatcher.dispatch_line("{broken");
    REQUIRE_FALSE(malformed.ok);
    CHECK(malformed.error->kind == ErrorKind::ProtocolError);

    auto bad_params = dispatcher.dispatch({"2", "tool.info", Value{{"name", 42}}});
    REQUIRE_FALSE(bad_params.ok);
    CHECK(bad_params.error->kind == ErrorKind::ProtocolError);
}

TEST_CASE("dispatch wraps tool registration and invocation") {
    TeaRuntime rt(test_options());
    Dispatcher dispatcher(rt);
    auto reg = dispatcher.dispatch({"1", "tool.register", register_add_params()});
    REQUIRE(reg.ok);
    auto inv = dispatcher.dispatch(
        {"2", "tool.invoke", Value{{"name", "add"}, {"args", Value{{"a", 2}, {"b", 3}}}}});
    REQUIRE(inv.ok);
    CHECK(inv.result["output"] == 5);

    auto bad = dispatcher.dispatch(
        {"3", "tool.invoke", Value{{"name", "add"}, {"args", Value{{"a", 2}}}}});
    REQUIRE_FALSE(bad.ok);
    CHECK(bad.error->kind == ErrorKind::ValidationFailed);
}

TEST_CASE("wire sessions, memory, and trace queries work end to end") {
    TeaRuntime rt(test_options());
    Dispatcher dispatcher(rt);
    REQUIRE(dispatcher.dispatch({"1", "tool.register", register_add_params()}).ok);
    auto opened = dispatcher.dispatch(
        {"2", "session.open", Value{{"agent_name", "driver"}, {"task_id", "t1"}}});
    REQUIRE(opened.ok);
    std::string sid = opened.result["session_id"].get<std::string>();

    REQUIRE(dispatcher
                .dispatch({"3", "tool.invoke",
                           Value{{"name", "add"},
                                 {"args", Value{{"a", 1}, {"b", 2}}},
                                 {"session_id", sid}}})
                .ok);
    REQUIRE(dispatcher
                .dispatch({"4", "memory.record",
                           Value{{"session_id", sid},
                                 {"event_kind", "note"},
                                 {"payload", Value{{"v", 1}}}}})
                .ok);

    auto events = dispatcher.dispatch({"5", "memory.events", Value{{"session_id", sid}}});
    REQUIRE(events.ok);
    CHECK(events.result.size() == 1);

    auto traces = dispatcher.dispatch({"6", "trace.query", Value{{"session_id", sid}}});
    REQUIRE(traces.ok);
    CHECK(traces.result.size() == 1);
    std::string record_id = traces.result[0]["record_id"].get<std::string>();
    auto by_id = dispatcher.dispatch({"7", "trace.query", Value{{"record_id", record_id}}});
    REQUIRE(by_id.ok);
    CHECK(by_id.result[0]["index"] == 1);
    auto by_index = dispatcher.dispatch(
        {"7b", "trace.query", Value{{"session_id", sid}, {"index", 1}}});
    REQUIRE(by_index.ok);
    CHECK(by_index.result[0]["record_id"] == record_id);

    REQUIRE(dispatcher.dispatch({"8", "session.close", Value{{"session_id", sid}}}).ok);
    auto late = dispatcher.dispatch({"9", "memory.record",
                                     Value{{"session_id", sid}, {"event_kind", "late"}}});
    REQUIRE_FALSE(late.ok);
    CHECK(late.error->kind == ErrorKind::LifecycleViolation);  // sealed, not unknown
    auto ghost = dispatcher.dispatch({"10", "memory.record",
                                      Value{{"session_id", "zzz"}, {"event_kind", "x"}}});
    REQUIRE_FALSE(ghost.ok);
    CHECK(ghost.error->kind == ErrorKind::NotFound);
}

TEST_CASE("wire env, agent, transform, prompt, model, and evolve ops round out the table") {
    TeaRuntime rt(test_options());
    Dispatcher dispatcher(rt);
    REQUIRE(dispatcher
                .dispatch({"1", "env.register",
                           Value{{"spec", Value{{"name", "counter"},
                                                {"metadata",
                                                 Value{{"behavior_id", "builtin.counter"}}}}}}})
                .ok);
    auto acted = dispatcher.dispatch(
        {"2", "env.act", Value{{"name", "counter"}, {"action", "increment"}}});
    REQUIRE(acted.ok);
    CHECK(acted.result == Value{{"count", 1}});
    CHECK(dispatcher.dispatch({"3", "env.state", Value{{"name", "counter"}}}).result ==
          Value{{"count", 1}});

    REQUIRE(dispatcher
                .dispatch({"4", "agent.register",
                           Value{{"spec", Value{{"name", "echo"},
                                                {"description", "echoes"},
                                                {"open_task", true},
                                                {"metadata",
                                                 Value{{"behavior_id", "builtin.echo_agent"}}}}}}})
                .ok);
    auto invoked = dispatcher.dispatch(
        {"5", "agent.invoke", Value{{"name", "echo"}, {"task", Value{{"q", 7}}}}});
    REQUIRE(invoked.ok);
    CHECK(invoked.result == Value{{"q", 7}});

    auto kit = dispatcher.dispatch({"6", "transform.e2t", Value{{"env", "counter"}}});
    REQUIRE(kit.ok);
    auto t2e = dispatcher.dispatch(
        {"7", "transform.t2e", Value{{"kit", kit.result}, {"name", "counter2"}}});
    REQUIRE(t2e.ok);
    auto records = dispatcher.dispatch({"8", "transform.records", Value::object()});
    REQUIRE(records.ok);
    REQUIRE(records.result.size() == 2);
    auto checked = dispatcher.dispatch(
        {"9", "transform.check",
         Value{{"first", records.result[0]}, {"second", records.result[1]}}});
    REQUIRE(checked.ok);
    CHECK(checked.result["ok"] == true);

    REQUIRE(dispatcher
                .dispatch({"10", "prompt.register",
                           Value{{"spec", Value{{"name", "greet"},
                                                {"description", "greeting"},
                                                {"message_template", "hi {name}"}}}}})
                .ok);
    auto rendered = dispatcher.dispatch(
        {"11", "prompt.render",
         Value{{"name", "greet"}, {"variables", Value{{"name", "you"}}}}});
    REQUIRE(rendered.ok);
    CHECK(rendered.result["message"] == "hi you");

    auto modeled = dispatcher.dispatch(
        {"12", "model.invoke",
         Value{{"request", Value{{"p", 1}}}, {"chain", Value::array({"missing"})}}});
    REQUIRE_FALSE(modeled.ok);
    CHECK(modeled.error->kind == ErrorKind::NotFound);

    // An evolvable tool driven by the builtin appending critic.
    Value spec = register_add_params();
    spec["spec"]["name"] = "addx";
    spec["spec"]["evolvable"] = true;
    REQUIRE(dispatcher.dispatch({"13", "tool.register", spec}).ok);
    auto evolved = dispatcher.dispatch({"14", "evolve.run",
                                        Value{{"kind", "tool"},
                                              {"name", "addx"},
                                              {"critic_id", "builtin.append"},
                                              {"max_iter", 2}}});
    REQUIRE(evolved.ok);
    CHECK(evolved.result["accepted"] == true);
    CHECK(evolved.result["committed_version"] == "1.1.0");

    auto rolled = dispatcher.dispatch({"15", "evolve.rollback",
                                       Value{{"kind", "tool"},
                                             {"name", "addx"},
                                             {"version", "1.0.0"}}});
    REQUIRE(rolled.ok);
    CHECK(rolled.result["source"] == "lambda a, b: a + b");

    auto routed = dispatcher.dispatch(
        {"16", "route", Value{{"kind", "tool"}, {"query", "adds two integers"}}});
    REQUIRE(routed.ok);
    CHECK(routed.result["candidates_examined"].get<int>() >= 1);
}

TEST_CASE("the stream server answers pipelined requests and survives junk") {
    TeaRuntime rt(test_options());
    Dispatcher dispatcher(rt);
    StreamServer server(dispatcher, 4);

    std::istringstream in(
        "{\"id\":\"a\",\"op\":\"tool.list\",\"params\":{}}\n"
        "definitely not json\n"
        "{\"id\":\"b\",\"op\":\"tool.list\",\"params\":{}}\n"
        "{\"id\":\"c\",\"op\":\"sys.ops\",\"params\":{}}\n");
    std::ostringstream out;
    server.serve(in, out);

    std::istringstream lines(out.str());
    std::string line;
    std::set<std::string> ids;
    int errors = 0;
    int count = 0;
    while (std::getline(lines, line)) {
        auto v = parse_value(line);
        REQUIRE(v.ok());
        ++count;
        ids.insert(v.value()["id"].get<std::string>());
        if (!v.value()["ok"].get<bool>()) ++errors;
    }
    CHECK(count == 4);
    CHECK(errors == 1);  // the junk line only
    CHECK(ids == std::set<std::string>{"", "a", "b", "c"});
}

TEST_CASE("fifty concurrent socket connections all get answers and traces") {
    TeaRuntime rt(test_options());
    Dispatcher dispatcher(rt);
    REQUIRE(dispatcher.dispatch({"r", "tool.register", register_add_params()}).ok);
    SocketServer server(dispatcher, "127.0.0.1", 0);
    REQUIRE(server.start().ok());

    const int kConnections = 50;
    const int kPerConnection = 4;
    std::atomic<int> answered{0};
    std::vector<std::thread> clients;
    for (int c = 0; c < kConnections; ++c) {
        clients.emplace_back([&, c] {
            LineClient client(server.port());
            client.send_line("{\"id\":\"open\",\"op\":\"session.open\",\"params\":{"
                             "\"agent_name\":\"load\",\"task_id\":\"t" +
                             std::to_string(c) + "\"}}");
            auto opened = parse_value(client.read_line()).value();
            REQUIRE(opened["ok"].get<bool>());
            std::string sid = opened["result"]["session_id"].get<std::string>();
            for (int i = 0; i < kPerConnection; ++i) {
                Value req{{"id", "i" + std::to_string(i)},
                          {"op", "tool.invoke"},
                          {"params", Value{{"name", "add"},
                                           {"args", Value{{"a", c}, {"b", i}}},
                                           {"session_id", sid}}}};
                client.send_line(canonical_line(req));
                auto resp = parse_value(client.read_line()).value();
                REQUIRE(resp["ok"].get<bool>());
                REQUIRE(resp["result"]["output"] == c + i);
                ++answered;
            }
        });
    }
    for (auto& t : clients) t.join();
    server.stop();
    CHECK(answered.load() == kConnections * kPerConnection);
    // Exactly one trace per invocation.
    CHECK(rt.tracer().total_records() == std::size_t(kConnections * kPerConnection));
}

TEST_CASE("save, load, save is byte-identical across a fresh runtime") {
    auto opts = test_options();
    TeaRuntime rt(opts);
    Dispatcher dispatcher(rt);
    REQUIRE(dispatcher.dispatch({"1", "tool.register", register_add_params()}).ok);
    REQUIRE(dispatcher
                .dispatch({"2", "env.register",
                           Value{{"spec", Value{{"name", "counter"},
                                                {"metadata",
                                                 Value{{"behavior_id", "builtin.counter"}}}}}}})
                .ok);
    REQUIRE(dispatcher
                .dispatch({"3", "agent.register",
                           Value{{"spec", Value{{"name", "echo"},
                                                {"description", "echoes"},
                                                {"open_task", true},
                                                {"metadata",
                                                 Value{{"behavior_id", "builtin.echo_agent"}}}}}}})
                .ok);
    REQUIRE(dispatcher.dispatch({"4", "transform.a2t", Value{{"agent", "echo"}}}).ok);
    REQUIRE(dispatcher
                .dispatch({"5", "agent.relate", Value{{"from", "echo"},
                                                      {"to", "echo"},
                                                      {"kind", "cooperative"}}})
                .ok);
    auto first = rt.export_manifests();

    REQUIRE(rt.save_all().ok());
    auto opts2 = test_options();
    opts2.data_dir = opts.data_dir;
    TeaRuntime rt3(opts2);
    REQUIRE(rt3.load_all().ok());
    auto second = rt3.export_manifests();
    REQUIRE(first.size() == second.size());
    for (const auto& [name, bytes] : first) {
        CHECK(second.at(name) == bytes);
    }

    // Loaded components resolve to live behavior, including derived ones.
    auto resp = rt3.invoke_tool("agent.echo", Value{{"q", 1}});
    REQUIRE(resp.ok);
    CHECK(resp.output == Value{{"q", 1}});
    CHECK(rt3.envs().state("counter").value() == Value{{"count", 0}});

    std::filesystem::remove_all(opts.data_dir);
}

TEST_CASE("a hierarchical planner can delegate through the relation store") {
    // The planner pattern: a scripted policy resolves its hierarchical
    // children and forwards the task to the first one.
    TeaRuntime rt(test_options());
    REQUIRE(rt.agents().register_agent(builtins::echo_agent_spec("worker")).ok());

    AgentSpec planner;
    planner.descriptor = {"planner", "delegates to its first hierarchical child", {}, false};
    planner.open_task = true;
    planner.reentrant = true;
    planner.policy = [](const Value& task, InvokeContext& ctx) -> Result<Value> {
        if (!ctx.runtime) return make_error(ErrorKind::BackendFailure, "no runtime bound");
        auto children = ctx.runtime->agents().relations("planner", RelationKind::hierarchical);
        if (children.empty()) {
            return make_error(ErrorKind::BackendFailure, "planner has no sub-agents");
        }
        const SessionHandle* session = ctx.session ? &*ctx.session : nullptr;
        return ctx.runtime->invoke_agent(children.front().to, task, session);
    };
    REQUIRE(rt.agents().register_agent(planner).ok());
    REQUIRE(rt.agents().add_relation({"planner", "worker", RelationKind::hierarchical}).ok());

    auto session = rt.session_open("driver", "t");
    auto out = rt.invoke_agent("planner", Value{{"goal", "test"}}, &session);
    REQUIRE(out.ok());
    CHECK(out.value() == Value{{"goal", "test"}});
    // Two invocations traced: the planner and the delegated worker.
    CHECK(rt.tracer().by_session(session.session_id).size() == 2);
}

TEST_CASE("contract documents are byte-identical after save/load") {
    auto opts = test_options();
    auto clock_a = std::make_shared<ManualClock>();
    opts.clock = clock_a;
    TeaRuntime rt(opts);
    Dispatcher dispatcher(rt);
    REQUIRE(dispatcher.dispatch({"1", "tool.register", register_add_params()}).ok);
    REQUIRE(rt.save_all().ok());

    auto opts2 = test_options();
    opts2.data_dir = opts.data_dir;
    auto clock_b = std::make_shared<ManualClock>();
    opts2.clock = clock_b;
    TeaRuntime rt2(opts2);
    REQUIRE(rt2.load_all().ok());

    // Pin the generation instant on both sides: byte-identical output.
    clock_a->set(777);
    clock_b->set(777);
    CHECK(canonical_dump(rt.tools().contract().to_value()) ==
          canonical_dump(rt2.tools().contract().to_value()));
    std::filesystem::remove_all(opts.data_dir);
}

TEST_SUITE_END();
