// Operator CLI: serve the wire protocol, inspect registries, invoke tools,
// run retrieval, print traces and histories, roll back versions, and
// normalize manifests on disk.
#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>

#include "tea/server.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void handle_signal(int) { g_stop = 1; }

int fail(const tea::Error& error) {
    std::cerr << "error: " << error.to_text() << "\n";
    return 1;
}

tea::ComponentKind parse_kind_or_exit(const std::string& text) {
    tea::ComponentKind kind;
    if (!tea::component_kind_from_string(text, kind)) {
        std::cerr << "error: unknown kind '" << text << "' (tool|environment|agent|prompt)\n";
        std::exit(2);
    }
    return kind;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TEA protocol server and registry CLI"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may trail the subcommand

    std::string data_dir;
    std::string format = "human";
    app.add_option("--data-dir", data_dir, "data directory (default: $TEA_DATA_DIR or ./tea-data)");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"human", "canonical"}));

    auto* serve_cmd = app.add_subcommand("serve", "run the wire-protocol server");
    std::string listen = "stdio";
    int max_concurrency = 8;
    serve_cmd->add_option("--listen", listen, "stdio or HOST:PORT");
    serve_cmd->add_option("--max-concurrency", max_concurrency, "concurrent requests on stdio");

    std::string kind_arg, name_arg, version_arg, query_arg, tool_arg, session_arg;
    std::string args_json = "{}";
    int top_k = 5;

    auto* list_cmd = app.add_subcommand("list", "list active components of one kind");
    list_cmd->add_option("kind", kind_arg)->required();

    auto* info_cmd = app.add_subcommand("info", "show the active config of a component");
    info_cmd->add_option("kind", kind_arg)->required();
    info_cmd->add_option("name", name_arg)->required();

    auto* contract_cmd = app.add_subcommand("contract", "print the contract document of a kind");
    contract_cmd->add_option("kind", kind_arg)->required();

    auto* invoke_cmd = app.add_subcommand("invoke", "invoke a tool");
    invoke_cmd->add_option("tool", tool_arg)->required();
    invoke_cmd->add_option("--args", args_json, "arguments as a JSON mapping");

    auto* retrieve_cmd = app.add_subcommand("retrieve", "semantic retrieval over descriptions");
    retrieve_cmd->add_option("kind", kind_arg)->required();
    retrieve_cmd->add_option("query", query_arg)->required();
    retrieve_cmd->add_option("-k", top_k, "number of results");

    auto* trace_cmd = app.add_subcommand("trace", "print the trace of one session");
    trace_cmd->add_option("session_id", session_arg)->required();

    auto* history_cmd = app.add_subcommand("history", "print the version history of a component");
    history_cmd->add_option("kind", kind_arg)->required();
    history_cmd->add_option("name", name_arg)->required();

    auto* rollback_cmd = app.add_subcommand("rollback", "restore a historical version");
    rollback_cmd->add_option("kind", kind_arg)->required();
    rollback_cmd->add_option("name", name_arg)->required();
    rollback_cmd->add_option("version", version_arg)->required();

    app.add_subcommand("save", "write all manifests to the data directory");
    app.add_subcommand("load", "validate that the data directory loads cleanly");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const bool canonical = format == "canonical";

    tea::RuntimeOptions opts;
    opts.data_dir = data_dir;
    tea::TeaRuntime runtime(opts);
    if (std::filesystem::exists(runtime.data_dir())) {
        if (auto st = runtime.load_all(); !st.ok()) return fail(st.error());
    }

    if (app.got_subcommand("serve")) {
        tea::Dispatcher dispatcher(runtime);
        if (listen == "stdio") {
            tea::StreamServer server(dispatcher, std::size_t(max_concurrency));
            server.serve(std::cin, std::cout);
        } else {
            auto colon = listen.rfind(':');
            if (colon == std::string::npos) {
                std::cerr << "error: --listen expects stdio or HOST:PORT\n";
                return 2;
            }
            std::string host = listen.substr(0, colon);
            int port = 0;
            try {
                port = std::stoi(listen.substr(colon + 1));
            } catch (...) {
                std::cerr << "error: invalid port in '" << listen << "'\n";
                return 2;
            }
            tea::SocketServer server(dispatcher, host, port);
            if (auto st = server.start(); !st.ok()) return fail(st.error());
            std::signal(SIGINT, handle_signal);
            std::signal(SIGTERM, handle_signal);
            std::cerr << "listening on " << host << ":" << server.port() << "\n";
            while (!g_stop) {
                std::this_thread::sleep_for(std::chrono::milliseconds(50));
            }
            server.stop();  // drains in-flight connections
        }
        if (auto st = runtime.save_all(); !st.ok()) return fail(st.error());
        return 0;
    }

    if (app.got_subcommand("list")) {
        auto registry = runtime.registry_for(parse_kind_or_exit(kind_arg));
        if (!registry.ok()) return fail(registry.error());
        auto names = registry.value()->list();
        if (canonical) {
            tea::Value arr = tea::Value::array();
            for (const auto& n : names) arr.push_back(n);
            std::cout << tea::canonical_dump(arr);
        } else {
            for (const auto& n : names) std::cout << n << "\n";
        }
        return 0;
    }

    if (app.got_subcommand("info")) {
        auto registry = runtime.registry_for(parse_kind_or_exit(kind_arg));
        if (!registry.ok()) return fail(registry.error());
        auto cfg = registry.value()->active_config(name_arg);
        if (!cfg.ok()) return fail(cfg.error());
        if (canonical) {
            std::cout << tea::canonical_dump(cfg.value().to_value());
        } else {
            const auto& c = cfg.value();
            std::cout << c.descriptor.name << " v" << c.version.render() << " ("
                      << tea::to_string(c.kind) << ")\n"
                      << c.representations.text_description;
        }
        return 0;
    }

    if (app.got_subcommand("contract")) {
        auto registry = runtime.registry_for(parse_kind_or_exit(kind_arg));
        if (!registry.ok()) return fail(registry.error());
        auto doc = registry.value()->contract();
        std::cout << (canonical ? tea::canonical_dump(doc.to_value()) : doc.to_text());
        return 0;
    }

    if (app.got_subcommand("invoke")) {
        auto args = tea::parse_value(args_json);
        if (!args.ok()) return fail(args.error());
        auto resp = runtime.invoke_tool(tool_arg, args.value());
        if (canonical) {
            std::cout << tea::canonical_dump(resp.to_value());
        } else if (resp.ok) {
            std::cout << "ok (v" << resp.tool_version.render() << ", " << resp.elapsed_us
                      << "us): " << resp.output.dump() << "\n";
        }
        if (!resp.ok) return fail(*resp.error);
        return 0;
    }

    if (app.got_subcommand("retrieve")) {
        auto kind = parse_kind_or_exit(kind_arg);
        auto hits = runtime.index().retrieve(kind, query_arg, std::size_t(top_k));
        if (canonical) {
            tea::Value arr = tea::Value::array();
            for (const auto& h : hits) {
                arr.push_back(tea::Value{{"name", h.name}, {"score", h.score}});
            }
            std::cout << tea::canonical_dump(arr);
        } else {
            for (const auto& h : hits) std::cout << h.name << "\t" << h.score << "\n";
        }
        return 0;
    }

    if (app.got_subcommand("trace")) {
        auto records = runtime.tracer().by_session(session_arg);
        if (canonical) {
            for (const auto& rec : records) std::cout << tea::canonical_dump(rec.to_value());
        } else {
            for (const auto& rec : records) {
                std::cout << "#" << rec.index << " " << rec.record_id;
                if (rec.invocation) {
                    std::cout << " " << rec.invocation->kind << ":" << rec.invocation->name;
                }
                std::cout << " " << rec.observation.dump() << "\n";
            }
        }
        return 0;
    }

    if (app.got_subcommand("history")) {
        auto kind = parse_kind_or_exit(kind_arg);
        auto records = runtime.versions().history(name_arg, kind);
        if (records.empty()) {
            return fail(tea::make_error(tea::ErrorKind::NotFound,
                                        "no history for " + kind_arg + " '" + name_arg + "'"));
        }
        if (canonical) {
            tea::Value arr = tea::Value::array();
            for (const auto& rec : records) arr.push_back(rec.to_value());
            std::cout << tea::canonical_dump(arr);
        } else {
            for (const auto& rec : records) {
                std::cout << rec.version.render() << "\t" << tea::to_string(rec.state) << "\t"
                          << rec.description << "\n";
            }
        }
        return 0;
    }

    if (app.got_subcommand("rollback")) {
        auto kind = parse_kind_or_exit(kind_arg);
        auto version = tea::VersionString::parse(version_arg);
        if (!version.ok()) return fail(version.error());
        auto registry = runtime.registry_for(kind);
        if (!registry.ok()) return fail(registry.error());
        auto cfg = registry.value()->restore(name_arg, version.value());
        if (!cfg.ok()) return fail(cfg.error());
        if (auto st = runtime.save_all(); !st.ok()) return fail(st.error());
        if (canonical) {
            std::cout << tea::canonical_dump(cfg.value().to_value());
        } else {
            std::cout << "restored " << name_arg << " to content of " << version_arg << " as v"
                      << cfg.value().version.render() << "\n";
        }
        return 0;
    }

    if (app.got_subcommand("save")) {
        if (auto st = runtime.save_all(); !st.ok()) return fail(st.error());
        std::cout << "saved manifests under " << runtime.data_dir() << "\n";
        return 0;
    }

    if (app.got_subcommand("load")) {
        std::cout << "loaded " << runtime.tools().size() << " tools, " << runtime.envs().size()
                  << " environments, " << runtime.agents().size() << " agents, "
                  << runtime.prompts().size() << " prompts from " << runtime.data_dir() << "\n";
        return 0;
    }

    return 2;
}
