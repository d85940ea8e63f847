#include "tea/builtins.hpp"

#include <algorithm>
#include <map>

namespace tea::builtins {

ToolBehavior add_behavior() {
    return [](const Value& args, InvokeContext&) -> Result<Value> {
        std::int64_t a = args["a"].get<std::int64_t>();
        std::int64_t b = args["b"].get<std::int64_t>();
        std::int64_t sum = 0;
        if (__builtin_add_overflow(a, b, &sum)) {
            return make_error(ErrorKind::BackendFailure, "integer overflow in add");
        }
        return Value(sum);
    };
}

ToolBehavior echo_behavior() {
    return [](const Value& args, InvokeContext&) -> Result<Value> { return args; };
}

ToolBehavior concat_behavior() {
    return [](const Value& args, InvokeContext&) -> Result<Value> {
        return Value(args["x"].get<std::string>() + args["y"].get<std::string>());
    };
}

ToolBehavior fail_behavior() {
    return [](const Value&, InvokeContext&) -> Result<Value> {
        return make_error(ErrorKind::BackendFailure, "builtin.fail always fails");
    };
}

ToolSpec add_tool_spec() {
    ToolSpec spec;
    spec.descriptor = {"add",
                       "adds two integers",
                       {{"behavior_id", "builtin.add"}},
                       false};
    spec.params = {{"a", SemanticType::integer, true, "first addend"},
                   {"b", SemanticType::integer, true, "second addend"}};
    spec.behavior = add_behavior();
    spec.source = "lambda a, b: a + b";
    return spec;
}

ToolSpec echo_tool_spec() {
    ToolSpec spec;
    spec.descriptor = {"echo",
                       "returns its arguments unchanged",
                       {{"behavior_id", "builtin.echo"}},
                       false};
    spec.open_args = true;
    spec.behavior = echo_behavior();
    spec.source = "lambda **kw: kw";
    return spec;
}

ToolSpec concat_tool_spec() {
    ToolSpec spec;
    spec.descriptor = {"concat",
                       "concatenates two text values",
                       {{"behavior_id", "builtin.concat"}},
                       false};
    spec.params = {{"x", SemanticType::text, true, "left part"},
                   {"y", SemanticType::text, true, "right part"}};
    spec.behavior = concat_behavior();
    spec.source = "lambda x, y: x + y";
    return spec;
}

namespace {

class CounterEnv final : public EnvInstance {
public:
    Value state() override { return Value{{"count", count_}}; }

    Result<Value> step(const std::string& action, const Value&, InvokeContext&) override {
        if (action == "increment") {
            ++count_;
        } else if (action == "reset") {
            count_ = 0;
        } else {
            return make_error(ErrorKind::BackendFailure, "counter: unknown action " + action);
        }
        return state();
    }

private:
    std::int64_t count_ = 0;
};

class KvStoreEnv final : public EnvInstance {
public:
    Value state() override {
        Value entries = Value::object();
        for (const auto& [k, v] : map_) entries[k] = v;
        return Value{{"entries", entries}, {"size", std::int64_t(map_.size())}};
    }

    Result<Value> step(const std::string& action, const Value& args, InvokeContext&) override {
        if (action == "put") {
            map_[args["key"].get<std::string>()] = args["value"].get<std::string>();
            return Value{{"ok", true}, {"size", std::int64_t(map_.size())}};
        }
        if (action == "get") {
            auto it = map_.find(args["key"].get<std::string>());
            if (it == map_.end()) return Value{{"found", false}};
            return Value{{"found", true}, {"value", it->second}};
        }
        if (action == "del") {
            bool erased = map_.erase(args["key"].get<std::string>()) > 0;
            return Value{{"deleted", erased}, {"size", std::int64_t(map_.size())}};
        }
        return make_error(ErrorKind::BackendFailure, "kvstore: unknown action " + action);
    }

private:
    std::map<std::string, std::string> map_;
};

// Fixed page graph; every run walks the same pages.
class ScriptedWebEnv final : public EnvInstance {
public:
    ScriptedWebEnv() {
        pages_["home"] = {"welcome home", {"about", "docs"}};
        pages_["about"] = {"about this site", {"home"}};
        pages_["docs"] = {"documentation index", {"api", "home"}};
        pages_["api"] = {"api reference", {"docs"}};
    }

    Value state() override {
        Value visited = Value::array();
        for (const auto& p : visited_) visited.push_back(p);
        return Value{{"current", current_}, {"visited", visited}};
    }

    Result<Value> step(const std::string& action, const Value& args, InvokeContext&) override {
        if (action == "navigate") {
            std::string page = args["page"].get<std::string>();
            if (!pages_.count(page)) {
                return make_error(ErrorKind::BackendFailure, "scripted_web: unknown page " + page);
            }
            current_ = page;
            visited_.push_back(page);
            return read();
        }
        if (action == "click") {
            std::string link = args["link"].get<std::string>();
            const auto& links = pages_[current_].links;
            if (std::find(links.begin(), links.end(), link) == links.end()) {
                return make_error(ErrorKind::BackendFailure,
                                  "scripted_web: page '" + current_ + "' has no link " + link);
            }
            current_ = link;
            visited_.push_back(link);
            return read();
        }
        if (action == "read") return read();
        return make_error(ErrorKind::BackendFailure, "scripted_web: unknown action " + action);
    }

private:
    struct Page {
        std::string text;
        std::vector<std::string> links;
    };

    Value read() {
        const Page& page = pages_[current_];
        Value links = Value::array();
        for (const auto& l : page.links) links.push_back(l);
        return Value{{"links", links}, {"page", current_}, {"text", page.text}};
    }

    std::map<std::string, Page> pages_;
    std::string current_ = "home";
    std::vector<std::string> visited_;
};

}  // namespace

EnvBlueprint counter_env(const std::string& name) {
    EnvBlueprint bp;
    bp.descriptor = {name,
                     "deterministic counter with increment and reset",
                     {{"behavior_id", "builtin.counter"}},
                     false};
    bp.actions = {{"increment", {}, false, "increase the counter by one", {}},
                  {"reset", {}, false, "reset the counter to zero", {}}};
    bp.make = [] { return std::make_unique<CounterEnv>(); };
    bp.source = "class Counter: ...";
    return bp;
}

EnvBlueprint kvstore_env(const std::string& name) {
    EnvBlueprint bp;
    bp.descriptor = {name,
                     "in-memory key-value store",
                     {{"behavior_id", "builtin.kvstore"}},
                     false};
    bp.actions = {{"put",
                   {{"key", SemanticType::text, true, "entry key"},
                    {"value", SemanticType::text, true, "entry value"}},
                   false,
                   "store a value under a key",
                   {}},
                  {"get",
                   {{"key", SemanticType::text, true, "entry key"}},
                   false,
                   "fetch the value stored under a key",
                   {}},
                  {"del",
                   {{"key", SemanticType::text, true, "entry key"}},
                   false,
                   "remove a key",
                   {}}};
    bp.make = [] { return std::make_unique<KvStoreEnv>(); };
    bp.source = "class KvStore: ...";
    return bp;
}

EnvBlueprint scripted_web_env(const std::string& name) {
    EnvBlueprint bp;
    bp.descriptor = {name,
                     "deterministic page graph with navigate, click, and read",
                     {{"behavior_id", "builtin.scripted_web"}},
                     false};
    bp.actions = {{"navigate",
                   {{"page", SemanticType::text, true, "page id to jump to"}},
                   false,
                   "jump directly to a known page",
                   {}},
                  {"click",
                   {{"link", SemanticType::text, true, "link on the current page"}},
                   false,
                   "follow a link from the current page",
                   {}},
                  {"read", {}, false, "read the current page", {}}};
    bp.make = [] { return std::make_unique<ScriptedWebEnv>(); };
    bp.source = "class ScriptedWeb: ...";
    return bp;
}

AgentSpec echo_agent_spec(const std::string& name) {
    AgentSpec spec;
    spec.descriptor = {name,
                       "returns every task unchanged",
                       {{"behavior_id", "builtin.echo_agent"}},
                       false};
    spec.policy = [](const Value& task, InvokeContext&) -> Result<Value> { return task; };
    spec.reentrant = true;
    spec.open_task = true;
    spec.source = "lambda task: task";
    return spec;
}

std::optional<EnvBlueprint> env_blueprint_for(const std::string& behavior_id,
                                              const std::string& name) {
    if (behavior_id == "builtin.counter") return counter_env(name);
    if (behavior_id == "builtin.kvstore") return kvstore_env(name);
    if (behavior_id == "builtin.scripted_web") return scripted_web_env(name);
    return std::nullopt;
}

StepPolicy always_increment() {
    return [](const Value&, const std::vector<std::string>& actions)
               -> Result<std::pair<std::string, Value>> {
        if (std::find(actions.begin(), actions.end(), "increment") == actions.end()) {
            return make_error(ErrorKind::BackendFailure,
                              "always_increment: environment has no increment action");
        }
        return std::make_pair(std::string("increment"), Value::object());
    };
}

StepPolicy greedy_first_action() {
    return [](const Value&, const std::vector<std::string>& actions)
               -> Result<std::pair<std::string, Value>> {
        if (actions.empty()) {
            return make_error(ErrorKind::BackendFailure,
                              "greedy_first_action: environment has no actions");
        }
        return std::make_pair(actions.front(), Value::object());
    };
}

std::optional<ToolBehavior> BuiltinResolver::resolve_tool(const ComponentConfig& cfg) {
    const std::string id = behavior_id_of(cfg);
    if (id == "builtin.add") return add_behavior();
    if (id == "builtin.echo") return echo_behavior();
    if (id == "builtin.concat") return concat_behavior();
    if (id == "builtin.fail") return fail_behavior();
    return std::nullopt;
}

std::optional<AgentPolicyInfo> BuiltinResolver::resolve_agent(const ComponentConfig& cfg) {
    const std::string id = behavior_id_of(cfg);
    if (id == "builtin.echo_agent") {
        return AgentPolicyInfo{[](const Value& task, InvokeContext&) -> Result<Value> {
                                   return task;
                               },
                               true};
    }
    return std::nullopt;
}

std::optional<EnvFactory> BuiltinResolver::resolve_env(const ComponentConfig& cfg) {
    const std::string id = behavior_id_of(cfg);
    if (id == "builtin.counter") return [] { return std::make_unique<CounterEnv>(); };
    if (id == "builtin.kvstore") return [] { return std::make_unique<KvStoreEnv>(); };
    if (id == "builtin.scripted_web") return [] { return std::make_unique<ScriptedWebEnv>(); };
    return std::nullopt;
}

std::optional<StepPolicy> BuiltinResolver::resolve_step_policy(const std::string& policy_id) {
    if (policy_id == "always_increment") return always_increment();
    if (policy_id == "greedy_first_action") return greedy_first_action();
    return std::nullopt;
}

}  // namespace tea::builtins
