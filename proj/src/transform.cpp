#include "tea/transform.hpp"

#include <algorithm>
#include <set>

namespace tea {

const char* to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::A2T: return "A2T";
        case TransformKind::T2A: return "T2A";
        case TransformKind::E2T: return "E2T";
        case TransformKind::T2E: return "T2E";
        case TransformKind::A2E: return "A2E";
        case TransformKind::E2A: return "E2A";
    }
    return "A2T";
}

bool transform_kind_from_string(const std::string& text, TransformKind& out) {
    static const struct {
        const char* name;
        TransformKind kind;
    } table[] = {{"A2T", TransformKind::A2T}, {"T2A", TransformKind::T2A},
                 {"E2T", TransformKind::E2T}, {"T2E", TransformKind::T2E},
                 {"A2E", TransformKind::A2E}, {"E2A", TransformKind::E2A}};
    for (const auto& row : table) {
        if (text == row.name) {
            out = row.kind;
            return true;
        }
    }
    return false;
}

ComponentKind transform_source_kind(TransformKind kind) {
    switch (kind) {
        case TransformKind::A2T:
        case TransformKind::A2E: return ComponentKind::agent;
        case TransformKind::T2A:
        case TransformKind::T2E: return ComponentKind::tool;
        case TransformKind::E2T:
        case TransformKind::E2A: return ComponentKind::environment;
    }
    return ComponentKind::agent;
}

ComponentKind transform_target_kind(TransformKind kind) {
    switch (kind) {
        case TransformKind::A2T:
        case TransformKind::E2T: return ComponentKind::tool;
        case TransformKind::T2E:
        case TransformKind::A2E: return ComponentKind::environment;
        case TransformKind::T2A:
        case TransformKind::E2A: return ComponentKind::agent;
    }
    return ComponentKind::tool;
}

Value Toolkit::to_value() const {
    Value tools_v = Value::array();
    for (const auto& t : tools) tools_v.push_back(t);
    Value v{{"source", source}, {"tools", tools_v}};
    if (shared_state_ref) v["shared_state_ref"] = *shared_state_ref;
    return v;
}

Result<Toolkit> Toolkit::from_value(const Value& v) {
    if (!v.is_object() || !v.contains("source") || !v.contains("tools") ||
        !v["tools"].is_array()) {
        return make_error(ErrorKind::ValidationFailed, "malformed toolkit");
    }
    Toolkit kit;
    kit.source = v["source"].get<std::string>();
    for (const auto& t : v["tools"]) kit.tools.push_back(t.get<std::string>());
    if (v.contains("shared_state_ref")) {
        kit.shared_state_ref = v["shared_state_ref"].get<std::string>();
    }
    return kit;
}

Value TransformRecord::to_value() const {
    Value outputs_v = Value::array();
    for (const auto& o : outputs) outputs_v.push_back(o);
    return Value{{"created_at", created_at},
                 {"input", input},
                 {"kind", to_string(kind)},
                 {"outputs", outputs_v}};
}

Result<TransformRecord> TransformRecord::from_value(const Value& v) {
    if (!v.is_object() || !v.contains("kind") || !v.contains("input") || !v.contains("outputs")) {
        return make_error(ErrorKind::ValidationFailed, "malformed transform record");
    }
    TransformRecord rec;
    if (!transform_kind_from_string(v["kind"].get<std::string>(), rec.kind)) {
        return make_error(ErrorKind::ValidationFailed, "unknown transform kind");
    }
    rec.input = v["input"].get<std::string>();
    for (const auto& o : v["outputs"]) rec.outputs.push_back(o.get<std::string>());
    rec.created_at = v.value("created_at", std::int64_t(0));
    return rec;
}

std::vector<ParamDecl> t2a_task_params(const ComponentName& tool) {
    return {{"args", SemanticType::mapping, true, "arguments forwarded to tool '" + tool + "'"}};
}

namespace {

std::vector<std::string> split_id(const std::string& id) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        auto pos = id.find(':', start);
        if (pos == std::string::npos) {
            parts.push_back(id.substr(start));
            break;
        }
        parts.push_back(id.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::string short_name(const ComponentName& name) {
    auto dot = name.rfind('.');
    return dot == std::string::npos ? name : name.substr(dot + 1);
}

// Environment derived from a toolkit: actions delegate to tools, state is
// the per-action counters plus the shared environment's state when present.
class ToolkitEnv final : public EnvInstance {
public:
    ToolkitEnv(ToolContextManager& tools, EnvironmentContextManager& envs,
               std::map<std::string, std::string> targets,
               std::optional<std::string> shared_ref)
        : tools_(tools), envs_(envs), targets_(std::move(targets)),
          shared_ref_(std::move(shared_ref)) {
        for (const auto& [action, tool] : targets_) counters_[action] = 0;
    }

    Value state() override {
        Value counters = Value::object();
        for (const auto& [action, count] : counters_) counters[action] = count;
        Value out{{"counters", counters}};
        if (shared_ref_) {
            auto shared = envs_.state(*shared_ref_);
            out["shared_state"] = shared.ok() ? shared.value() : Value(nullptr);
        }
        return out;
    }

    Result<Value> step(const std::string& action, const Value& args, InvokeContext& ctx) override {
        auto it = targets_.find(action);
        if (it == targets_.end()) {
            return make_error(ErrorKind::ActionNotFound, "toolkit has no action '" + action + "'");
        }
        ++counters_[action];
        auto resp = tools_.invoke(it->second, args, ctx);
        if (!resp.ok) return *resp.error;
        return resp.output;
    }

private:
    ToolContextManager& tools_;
    EnvironmentContextManager& envs_;
    std::map<std::string, std::string> targets_;
    std::optional<std::string> shared_ref_;
    std::map<std::string, std::int64_t> counters_;
};

// Environment wrapping an agent: a single `interact` action.
class AgentRoomEnv final : public EnvInstance {
public:
    AgentRoomEnv(AgentContextManager& agents, ComponentName agent)
        : agents_(agents), agent_(std::move(agent)) {}

    Value state() override {
        return Value{{"interactions", interactions_}, {"last_output", last_}};
    }

    Result<Value> step(const std::string& action, const Value& args, InvokeContext& ctx) override {
        if (action != "interact") {
            return make_error(ErrorKind::ActionNotFound,
                              "agent environment has no action '" + action + "'");
        }
        auto out = agents_.invoke(agent_, args, ctx);
        if (!out.ok()) return out;
        ++interactions_;
        last_ = out.value();
        return out;
    }

private:
    AgentContextManager& agents_;
    ComponentName agent_;
    std::int64_t interactions_ = 0;
    Value last_ = nullptr;
};

}  // namespace

Transformer::Transformer(ToolContextManager& tools, EnvironmentContextManager& envs,
                         AgentContextManager& agents, Clock& clock, BehaviorResolver* policies)
    : tools_(tools), envs_(envs), agents_(agents), clock_(clock), policies_(policies) {}

void Transformer::push_record(TransformKind kind, const ComponentName& input,
                              std::vector<ComponentName> outputs) {
    std::lock_guard<std::mutex> lock(records_mu_);
    records_.push_back(TransformRecord{kind, input, std::move(outputs), clock_.now_micros()});
}

std::vector<TransformRecord> Transformer::records() const {
    std::lock_guard<std::mutex> lock(records_mu_);
    return records_;
}

void Transformer::adopt_record(TransformRecord record) {
    std::lock_guard<std::mutex> lock(records_mu_);
    records_.push_back(std::move(record));
}

ToolBehavior Transformer::make_a2t_behavior(const ComponentName& agent) {
    AgentContextManager* agents = &agents_;
    return [agents, agent](const Value& args, InvokeContext& ctx) -> Result<Value> {
        return agents->invoke(agent, args, ctx);
    };
}

ToolBehavior Transformer::make_e2t_behavior(const ComponentName& env,
                                            const ComponentName& action) {
    EnvironmentContextManager* envs = &envs_;
    return [envs, env, action](const Value& args, InvokeContext& ctx) -> Result<Value> {
        return envs->act(env, action, args, ctx);
    };
}

AgentPolicy Transformer::make_t2a_policy(const ComponentName& tool) {
    ToolContextManager* tools = &tools_;
    return [tools, tool](const Value& task, InvokeContext& ctx) -> Result<Value> {
        if (!task.is_object() || !task.contains("args") || !task["args"].is_object()) {
            return make_error(ErrorKind::ValidationFailed,
                              "task must carry an 'args' mapping for tool '" + tool + "'");
        }
        auto resp = tools->invoke(tool, task["args"], ctx);
        if (!resp.ok) return *resp.error;
        return resp.output;
    };
}

AgentPolicy Transformer::make_e2a_policy(const ComponentName& env, StepPolicy step) {
    EnvironmentContextManager* envs = &envs_;
    return [envs, env, step = std::move(step)](const Value&, InvokeContext& ctx) -> Result<Value> {
        auto state = envs->state(env);
        if (!state.ok()) return state.error();
        auto decls = envs->actions_of(env);
        if (!decls.ok()) return decls.error();
        std::vector<std::string> names;
        for (const auto& d : decls.value()) names.push_back(d.name);
        auto choice = step(state.value(), names);
        if (!choice.ok()) return choice.error();
        auto result = envs->act(env, choice.value().first, choice.value().second, ctx);
        if (!result.ok()) return result.error();
        auto after = envs->state(env);
        if (!after.ok()) return after.error();
        return Value{{"action", choice.value().first},
                     {"result", result.value()},
                     {"state", after.value()}};
    };
}

EnvFactory Transformer::make_t2e_factory(const ComponentConfig& cfg) {
    std::map<std::string, std::string> targets;
    const Value targets_v = cfg.extensions.value("action_targets", Value::object());
    for (auto it = targets_v.begin(); it != targets_v.end(); ++it) {
        targets[it.key()] = it.value().get<std::string>();
    }
    std::optional<std::string> shared_ref;
    if (cfg.extensions.contains("shared_state_ref")) {
        shared_ref = cfg.extensions["shared_state_ref"].get<std::string>();
    }
    ToolContextManager* tools = &tools_;
    EnvironmentContextManager* envs = &envs_;
    return [tools, envs, targets = std::move(targets), shared_ref]() {
        return std::make_unique<ToolkitEnv>(*tools, *envs, targets, shared_ref);
    };
}

EnvFactory Transformer::make_a2e_factory(const ComponentName& agent) {
    AgentContextManager* agents = &agents_;
    return [agents, agent]() { return std::make_unique<AgentRoomEnv>(*agents, agent); };
}

Result<ComponentConfig> Transformer::a2t(const ComponentName& agent) {
    auto source = agents_.active_config(agent);
    if (!source.ok()) return source.error();

    ToolSpec spec;
    spec.descriptor.name = "agent." + agent;
    spec.descriptor.description =
        "tool interface for agent '" + agent + "': " + source.value().descriptor.description;
    spec.descriptor.metadata = {{"behavior_id", "transform:a2t:" + agent},
                                {"derived_from", agent},
                                {"transform", "A2T"}};
    spec.open_args = true;
    spec.behavior = make_a2t_behavior(agent);
    spec.source = "delegate -> agent '" + agent + "'";
    auto cfg = tools_.register_tool(spec);
    if (!cfg.ok()) return cfg;
    push_record(TransformKind::A2T, agent, {spec.descriptor.name});
    return cfg;
}

Result<Toolkit> Transformer::e2t(const ComponentName& env) {
    auto source = envs_.active_config(env);
    if (!source.ok()) return source.error();
    auto actions = EnvironmentContextManager::actions_from_config(source.value());
    if (!actions.ok()) return actions.error();

    Toolkit kit;
    kit.source = env;
    kit.shared_state_ref = env;
    std::vector<ComponentName> registered;
    for (const auto& action : actions.value()) {
        ToolSpec spec;
        spec.descriptor.name = "env." + env + "." + action.name;
        spec.descriptor.description = "action '" + action.name + "' of environment '" + env +
                                      "': " + (action.doc.empty() ? "action" : action.doc);
        spec.descriptor.metadata = {{"behavior_id", "transform:e2t:" + env + ":" + action.name},
                                    {"derived_from", env},
                                    {"transform", "E2T"}};
        spec.params = action.params;
        spec.open_args = action.open_args;
        spec.behavior = make_e2t_behavior(env, action.name);
        spec.source = "delegate -> environment '" + env + "' action '" + action.name + "'";
        auto cfg = tools_.register_tool(spec);
        if (!cfg.ok()) {
            for (const auto& name : registered) (void)tools_.unregister(name);
            return cfg.error();
        }
        registered.push_back(spec.descriptor.name);
    }
    kit.tools = registered;
    push_record(TransformKind::E2T, env, registered);
    return kit;
}

Result<ComponentConfig> Transformer::t2e(const Toolkit& kit, const ComponentName& name) {
    if (kit.tools.empty()) {
        return make_error(ErrorKind::ValidationFailed, "toolkit has no tools");
    }
    if (kit.shared_state_ref && *kit.shared_state_ref == name) {
        return make_error(ErrorKind::ValidationFailed,
                          "environment may not share state with itself");
    }
    std::vector<ActionDecl> actions;
    Value targets = Value::object();
    std::set<std::string> seen;
    for (const auto& tool : kit.tools) {
        auto cfg = tools_.active_config(tool);
        if (!cfg.ok()) return cfg.error();
        std::string action = short_name(tool);
        if (!seen.insert(action).second) {
            return make_error(ErrorKind::ValidationFailed,
                              "toolkit tools collide on action name '" + action + "'");
        }
        ActionDecl decl;
        decl.name = action;
        auto params = params_from_value(cfg.value().extensions.value("params", Value::array()));
        if (params.ok()) decl.params = std::move(params.value());
        decl.open_args = cfg.value().extensions.value("open_args", false);
        decl.doc = "delegates to tool '" + tool + "'";
        actions.push_back(std::move(decl));
        targets[action] = tool;
    }

    EnvBlueprint bp;
    bp.descriptor.name = name;
    bp.descriptor.description = "environment over toolkit from '" + kit.source + "' (" +
                                std::to_string(kit.tools.size()) + " actions)";
    bp.descriptor.metadata = {{"behavior_id", "transform:t2e"},
                              {"derived_from", kit.source},
                              {"transform", "T2E"}};
    bp.actions = std::move(actions);
    bp.extra_extensions["action_targets"] = targets;
    if (kit.shared_state_ref) bp.extra_extensions["shared_state_ref"] = *kit.shared_state_ref;
    bp.source = "delegate -> toolkit from '" + kit.source + "'";
    {
        std::map<std::string, std::string> target_map;
        for (auto it = targets.begin(); it != targets.end(); ++it) {
            target_map[it.key()] = it.value().get<std::string>();
        }
        ToolContextManager* tools = &tools_;
        EnvironmentContextManager* envs = &envs_;
        auto shared_ref = kit.shared_state_ref;
        bp.make = [tools, envs, target_map, shared_ref]() {
            return std::make_unique<ToolkitEnv>(*tools, *envs, target_map, shared_ref);
        };
    }
    auto cfg = envs_.register_environment(bp);
    if (!cfg.ok()) return cfg;
    push_record(TransformKind::T2E, kit.source, {name});
    return cfg;
}

Result<ComponentConfig> Transformer::t2a(const ComponentName& tool) {
    auto source = tools_.active_config(tool);
    if (!source.ok()) return source.error();

    AgentSpec spec;
    spec.descriptor.name = "tool." + tool;
    spec.descriptor.description =
        "agent actuating tool '" + tool + "': " + source.value().descriptor.description;
    spec.descriptor.metadata = {{"behavior_id", "transform:t2a:" + tool},
                                {"derived_from", tool},
                                {"transform", "T2A"}};
    spec.policy = make_t2a_policy(tool);
    spec.reentrant = true;
    spec.task_params = t2a_task_params(tool);
    spec.source = "delegate -> tool '" + tool + "'";
    auto cfg = agents_.register_agent(spec);
    if (!cfg.ok()) return cfg;
    push_record(TransformKind::T2A, tool, {spec.descriptor.name});
    return cfg;
}

Result<ComponentConfig> Transformer::a2e(const ComponentName& agent) {
    auto source = agents_.active_config(agent);
    if (!source.ok()) return source.error();

    EnvBlueprint bp;
    bp.descriptor.name = "agent." + agent + ".env";
    bp.descriptor.description =
        "interactive environment around agent '" + agent + "': " +
        source.value().descriptor.description;
    bp.descriptor.metadata = {{"behavior_id", "transform:a2e:" + agent},
                              {"derived_from", agent},
                              {"transform", "A2E"}};
    ActionDecl interact;
    interact.name = "interact";
    interact.open_args = true;
    interact.doc = "forward a task to agent '" + agent + "'";
    bp.actions = {interact};
    bp.make = make_a2e_factory(agent);
    bp.source = "delegate -> agent '" + agent + "'";
    auto cfg = envs_.register_environment(bp);
    if (!cfg.ok()) return cfg;
    push_record(TransformKind::A2E, agent, {bp.descriptor.name});
    return cfg;
}

Result<ComponentConfig> Transformer::e2a(const ComponentName& env, const std::string& policy_id) {
    auto source = envs_.active_config(env);
    if (!source.ok()) return source.error();
    std::optional<StepPolicy> step =
        policies_ ? policies_->resolve_step_policy(policy_id) : std::nullopt;
    if (!step) {
        return make_error(ErrorKind::ValidationFailed,
                          "unknown step policy '" + policy_id + "'");
    }

    AgentSpec spec;
    spec.descriptor.name = "env." + env + ".agent";
    spec.descriptor.description = "agent stepping environment '" + env + "' under policy '" +
                                  policy_id + "'";
    spec.descriptor.metadata = {{"behavior_id", "transform:e2a:" + env + ":" + policy_id},
                                {"derived_from", env},
                                {"policy_id", policy_id},
                                {"transform", "E2A"}};
    spec.policy = make_e2a_policy(env, std::move(*step));
    spec.reentrant = false;  // one policy step at a time per agent
    spec.open_task = true;
    spec.source = "delegate -> environment '" + env + "' via policy '" + policy_id + "'";
    auto cfg = agents_.register_agent(spec);
    if (!cfg.ok()) return cfg;
    push_record(TransformKind::E2A, env, {spec.descriptor.name});
    return cfg;
}

namespace {

Value open_schema() {
    return synthesize_representations("x", "x", {}, true).argument_schema;
}

}  // namespace

CheckResult Transformer::check(const TransformRecord& record) const {
    CheckResult result;
    auto fail = [&](std::string msg) {
        result.ok = false;
        result.failures.push_back(std::move(msg));
    };

    auto cfg_of = [&](ComponentKind kind, const ComponentName& name) -> Result<ComponentConfig> {
        switch (kind) {
            case ComponentKind::tool: return tools_.active_config(name);
            case ComponentKind::environment: return envs_.active_config(name);
            case ComponentKind::agent: return agents_.active_config(name);
            default:
                return make_error(ErrorKind::ValidationFailed, "kind has no registry");
        }
    };

    const ComponentKind target_kind = transform_target_kind(record.kind);
    const ComponentKind source_kind = transform_source_kind(record.kind);

    std::optional<ComponentConfig> input;
    if (record.kind != TransformKind::T2E) {
        auto got = cfg_of(source_kind, record.input);
        if (!got.ok()) {
            fail("input '" + record.input + "' is not registered as " + to_string(source_kind));
        } else {
            input = std::move(got.value());
        }
    }

    std::vector<ComponentConfig> outputs;
    for (const auto& name : record.outputs) {
        auto got = cfg_of(target_kind, name);
        if (!got.ok()) {
            fail("output '" + name + "' is not registered as " + to_string(target_kind));
            continue;
        }
        outputs.push_back(std::move(got.value()));
    }

    // Schema derivability under the transformation's map.
    for (const auto& out : outputs) {
        const std::string& name = out.descriptor.name;
        switch (record.kind) {
            case TransformKind::A2T:
            case TransformKind::E2A: {
                if (out.representations.argument_schema != open_schema()) {
                    fail("output '" + name + "' does not expose the open task schema");
                }
                break;
            }
            case TransformKind::T2A: {
                auto expected = synthesize_representations(name, "x", t2a_task_params(record.input),
                                                           false)
                                    .argument_schema;
                if (out.representations.argument_schema != expected) {
                    fail("output '" + name + "' does not forward to tool '" + record.input + "'");
                }
                break;
            }
            case TransformKind::E2T: {
                if (!input) break;
                auto actions = EnvironmentContextManager::actions_from_config(*input);
                if (!actions.ok()) break;
                const std::string prefix = "env." + record.input + ".";
                if (name.rfind(prefix, 0) != 0) {
                    fail("output '" + name + "' does not follow the env naming map");
                    break;
                }
                const std::string action = name.substr(prefix.size());
                const ActionDecl* decl = nullptr;
                for (const auto& a : actions.value()) {
                    if (a.name == action) {
                        decl = &a;
                        break;
                    }
                }
                if (!decl) {
                    fail("environment '" + record.input + "' has no action '" + action + "'");
                    break;
                }
                auto expected =
                    synthesize_representations(name, "x", decl->params, decl->open_args)
                        .argument_schema;
                if (out.representations.argument_schema != expected) {
                    fail("output '" + name + "' schema is not derivable from action '" + action +
                         "'");
                }
                break;
            }
            case TransformKind::T2E: {
                auto actions = EnvironmentContextManager::actions_from_config(out);
                const Value targets = out.extensions.value("action_targets", Value::object());
                if (!actions.ok() || targets.empty()) {
                    fail("output '" + name + "' carries no toolkit action targets");
                    break;
                }
                for (const auto& decl : actions.value()) {
                    if (!targets.contains(decl.name)) {
                        fail("action '" + decl.name + "' of '" + name + "' has no tool target");
                        continue;
                    }
                    const std::string tool = targets[decl.name].get<std::string>();
                    auto tool_cfg = tools_.active_config(tool);
                    if (!tool_cfg.ok()) {
                        fail("action '" + decl.name + "' of '" + name + "' targets unregistered tool '" +
                             tool + "'");
                        continue;
                    }
                    if (decl.representations.argument_schema !=
                        tool_cfg.value().representations.argument_schema) {
                        fail("action '" + decl.name + "' of '" + name +
                             "' schema diverged from tool '" + tool + "'");
                    }
                }
                break;
            }
            case TransformKind::A2E: {
                auto actions = EnvironmentContextManager::actions_from_config(out);
                if (!actions.ok() || actions.value().size() != 1 ||
                    actions.value()[0].name != "interact" ||
                    actions.value()[0].representations.argument_schema !=
                        synthesize_representations("interact", "x", {}, true).argument_schema) {
                    fail("output '" + name + "' does not expose the single open interact action");
                }
                break;
            }
        }
    }
    return result;
}

CheckResult Transformer::check_composition(const TransformRecord& first,
                                           const TransformRecord& second) const {
    CheckResult result = check(first);
    CheckResult second_check = check(second);
    result.ok = result.ok && second_check.ok;
    result.failures.insert(result.failures.end(), second_check.failures.begin(),
                           second_check.failures.end());
    if (transform_target_kind(first.kind) != transform_source_kind(second.kind)) {
        result.ok = false;
        result.failures.push_back(std::string("domains do not chain: ") + to_string(first.kind) +
                                  " produces " + to_string(transform_target_kind(first.kind)) +
                                  " but " + to_string(second.kind) + " consumes " +
                                  to_string(transform_source_kind(second.kind)));
    }
    return result;
}

std::optional<ToolBehavior> Transformer::resolve_tool(const ComponentConfig& cfg) {
    auto parts = split_id(behavior_id_of(cfg));
    if (parts.size() >= 2 && parts[0] == "transform") {
        if (parts[1] == "a2t" && parts.size() == 3) return make_a2t_behavior(parts[2]);
        if (parts[1] == "e2t" && parts.size() == 4) return make_e2t_behavior(parts[2], parts[3]);
    }
    return std::nullopt;
}

std::optional<AgentPolicyInfo> Transformer::resolve_agent(const ComponentConfig& cfg) {
    auto parts = split_id(behavior_id_of(cfg));
    if (parts.size() >= 2 && parts[0] == "transform") {
        if (parts[1] == "t2a" && parts.size() == 3) {
            return AgentPolicyInfo{make_t2a_policy(parts[2]), true};
        }
        if (parts[1] == "e2a" && parts.size() == 4 && policies_) {
            if (auto step = policies_->resolve_step_policy(parts[3])) {
                return AgentPolicyInfo{make_e2a_policy(parts[2], std::move(*step)), false};
            }
        }
    }
    return std::nullopt;
}

std::optional<EnvFactory> Transformer::resolve_env(const ComponentConfig& cfg) {
    auto parts = split_id(behavior_id_of(cfg));
    if (parts.size() >= 2 && parts[0] == "transform") {
        if (parts[1] == "t2e") return make_t2e_factory(cfg);
        if (parts[1] == "a2e" && parts.size() == 3) return make_a2e_factory(parts[2]);
    }
    return std::nullopt;
}

std::optional<StepPolicy> Transformer::resolve_step_policy(const std::string&) {
    return std::nullopt;  // policies come from the fallback resolver
}

}  // namespace tea
