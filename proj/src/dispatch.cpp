#include "tea/dispatch.hpp"

namespace tea {

Value RequestEnvelope::to_value() const {
    return Value{{"id", id}, {"op", op}, {"params", params}};
}

Value ResponseEnvelope::to_value() const {
    Value v{{"id", id}, {"ok", ok}};
    if (ok) {
        v["result"] = result;
    } else if (error) {
        v["error"] = Value{{"kind", to_string(error->kind)}, {"detail", error->detail}};
    }
    return v;
}

namespace {

Result<std::string> need_text(const Value& params, const char* field) {
    if (!params.contains(field) || !params[field].is_string()) {
        return make_error(ErrorKind::ProtocolError,
                          std::string("param '") + field + "' must be text");
    }
    return params[field].get<std::string>();
}

std::string opt_text(const Value& params, const char* field, const std::string& fallback = "") {
    if (params.contains(field) && params[field].is_string()) {
        return params[field].get<std::string>();
    }
    return fallback;
}

Result<ComponentKind> need_kind(const Value& params) {
    auto text = need_text(params, "kind");
    if (!text.ok()) return text.error();
    ComponentKind kind;
    if (!component_kind_from_string(text.value(), kind)) {
        return make_error(ErrorKind::ProtocolError, "unknown kind '" + text.value() + "'");
    }
    return kind;
}

Result<VersionString> need_version(const Value& params, const char* field = "version") {
    auto text = need_text(params, field);
    if (!text.ok()) return text.error();
    return VersionString::parse(text.value());
}

Result<BumpLevel> opt_level(const Value& params) {
    BumpLevel level = BumpLevel::patch;
    if (params.contains("level")) {
        if (!params["level"].is_string() ||
            !bump_level_from_string(params["level"].get<std::string>(), level)) {
            return make_error(ErrorKind::ProtocolError, "unknown bump level");
        }
    }
    return level;
}

Result<Descriptor> descriptor_from(const Value& spec) {
    auto name = need_text(spec, "name");
    if (!name.ok()) return name.error();
    Descriptor d;
    d.name = name.value();
    d.description = opt_text(spec, "description");
    d.evolvable = spec.value("evolvable", false);
    if (spec.contains("metadata")) {
        if (!spec["metadata"].is_object()) {
            return make_error(ErrorKind::ProtocolError, "metadata must be a mapping");
        }
        for (auto it = spec["metadata"].begin(); it != spec["metadata"].end(); ++it) {
            if (!it.value().is_string()) {
                return make_error(ErrorKind::ProtocolError, "metadata values must be text");
            }
            d.metadata[it.key()] = it.value().get<std::string>();
        }
    }
    return d;
}

Result<ToolSpec> tool_spec_from(const Value& params) {
    if (!params.contains("spec") || !params["spec"].is_object()) {
        return make_error(ErrorKind::ProtocolError, "param 'spec' must be a mapping");
    }
    const Value& spec_v = params["spec"];
    auto descriptor = descriptor_from(spec_v);
    if (!descriptor.ok()) return descriptor.error();
    ToolSpec spec;
    spec.descriptor = std::move(descriptor.value());
    if (spec_v.contains("params")) {
        auto parsed = params_from_value(spec_v["params"]);
        if (!parsed.ok()) return parsed.error();
        spec.params = std::move(parsed.value());
    }
    spec.open_args = spec_v.value("open_args", false);
    spec.source = opt_text(spec_v, "source");
    return spec;
}

Result<AgentSpec> agent_spec_from(const Value& params) {
    if (!params.contains("spec") || !params["spec"].is_object()) {
        return make_error(ErrorKind::ProtocolError, "param 'spec' must be a mapping");
    }
    const Value& spec_v = params["spec"];
    auto descriptor = descriptor_from(spec_v);
    if (!descriptor.ok()) return descriptor.error();
    AgentSpec spec;
    spec.descriptor = std::move(descriptor.value());
    spec.reentrant = spec_v.value("reentrant", false);
    spec.open_task = spec_v.value("open_task", false);
    spec.source = opt_text(spec_v, "source");
    if (spec_v.contains("task_params")) {
        auto parsed = params_from_value(spec_v["task_params"]);
        if (!parsed.ok()) return parsed.error();
        spec.task_params = std::move(parsed.value());
    }
    return spec;
}

// Wire environments are either builtin blueprints resolved by behavior_id
// or action declarations without a live factory (dormant until resolvable).
Result<EnvBlueprint> env_blueprint_from(const Value& params) {
    if (!params.contains("spec") || !params["spec"].is_object()) {
        return make_error(ErrorKind::ProtocolError, "param 'spec' must be a mapping");
    }
    const Value& spec_v = params["spec"];
    auto descriptor = descriptor_from(spec_v);
    if (!descriptor.ok()) return descriptor.error();

    EnvBlueprint bp;
    auto behavior_it = descriptor.value().metadata.find("behavior_id");
    if (behavior_it != descriptor.value().metadata.end()) {
        if (auto builtin = builtins::env_blueprint_for(behavior_it->second,
                                                       descriptor.value().name)) {
            bp = std::move(*builtin);
        }
    }
    Descriptor d = std::move(descriptor.value());
    if (d.description.empty()) d.description = bp.descriptor.description;
    for (const auto& [k, v] : bp.descriptor.metadata) d.metadata.emplace(k, v);
    bp.descriptor = std::move(d);
    if (spec_v.contains("actions")) {
        bp.actions.clear();
        for (const auto& action_v : spec_v["actions"]) {
            auto decl = ActionDecl::from_value(action_v);
            if (!decl.ok()) return decl.error();
            bp.actions.push_back(std::move(decl.value()));
        }
    }
    if (spec_v.contains("source")) bp.source = spec_v["source"].get<std::string>();
    return bp;
}

Result<const SessionHandle*> session_from(TeaRuntime& rt, const Value& params,
                                          SessionHandle& storage) {
    if (!params.contains("session_id")) return static_cast<const SessionHandle*>(nullptr);
    if (!params["session_id"].is_string()) {
        return make_error(ErrorKind::ProtocolError, "param 'session_id' must be text");
    }
    auto handle = rt.sessions().get(params["session_id"].get<std::string>());
    if (!handle.ok()) return handle.error();
    storage = handle.value();
    return static_cast<const SessionHandle*>(&storage);
}

Value hits_to_value(const std::vector<RetrievalHit>& hits) {
    Value out = Value::array();
    for (const auto& hit : hits) {
        out.push_back(Value{{"name", hit.name}, {"score", hit.score}});
    }
    return out;
}

Value names_to_value(const std::vector<ComponentName>& names) {
    Value out = Value::array();
    for (const auto& n : names) out.push_back(n);
    return out;
}

Value configs_to_value(const std::vector<ComponentConfig>& configs) {
    Value out = Value::array();
    for (const auto& c : configs) out.push_back(c.to_value());
    return out;
}

Result<Value> unwrap_response(ToolResponse resp) {
    if (!resp.ok) return *resp.error;
    return resp.to_value();
}

// Registry ops shared verbatim by the three protocols and prompts.
void install_common(ComponentKind kind, const std::string& prefix,
                    std::map<std::string, std::function<Result<Value>(TeaRuntime&, const Value&)>>&
                        table) {
    auto registry = [kind](TeaRuntime& rt) { return rt.registry_for(kind); };

    table[prefix + ".list"] = [registry](TeaRuntime& rt, const Value&) -> Result<Value> {
        auto reg = registry(rt);
        if (!reg.ok()) return reg.error();
        return names_to_value(reg.value()->list());
    };
    table[prefix + ".info"] = [registry](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto reg = registry(rt);
        if (!reg.ok()) return reg.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto cfg = reg.value()->active_config(name.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    };
    table[prefix + ".contract"] = [registry](TeaRuntime& rt, const Value&) -> Result<Value> {
        auto reg = registry(rt);
        if (!reg.ok()) return reg.error();
        return reg.value()->contract().to_value();
    };
    table[prefix + ".copy"] = [registry](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto reg = registry(rt);
        if (!reg.ok()) return reg.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto new_name = need_text(params, "new_name");
        if (!new_name.ok()) return new_name.error();
        auto cfg = reg.value()->copy_component(name.value(), new_name.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    };
    table[prefix + ".unregister"] = [registry](TeaRuntime& rt,
                                               const Value& params) -> Result<Value> {
        auto reg = registry(rt);
        if (!reg.ok()) return reg.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        if (auto st = reg.value()->unregister(name.value()); !st.ok()) return st.error();
        return Value{{"unregistered", name.value()}};
    };
    table[prefix + ".restore"] = [registry](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto reg = registry(rt);
        if (!reg.ok()) return reg.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto version = need_version(params);
        if (!version.ok()) return version.error();
        auto cfg = reg.value()->restore(name.value(), version.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    };
    table[prefix + ".retrieve"] = [kind](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto query = need_text(params, "query");
        if (!query.ok()) return query.error();
        std::size_t k = params.value("k", 5);
        if (k < 1) return make_error(ErrorKind::ProtocolError, "k must be at least 1");
        return hits_to_value(rt.index().retrieve(kind, query.value(), k));
    };
    table[prefix + ".vars"] = [registry](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto reg = registry(rt);
        if (!reg.ok()) return reg.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto vars = reg.value()->extract_vars(name.value());
        if (!vars.ok()) return vars.error();
        Value out = Value::array();
        for (const auto& var : vars.value()) out.push_back(var.to_value());
        return out;
    };
    table[prefix + ".setvars"] = [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        if (!params.contains("vars") || !params["vars"].is_array()) {
            return make_error(ErrorKind::ProtocolError, "param 'vars' must be a sequence");
        }
        std::vector<Variable> vars;
        for (const auto& var_v : params["vars"]) {
            auto var = Variable::from_value(var_v);
            if (!var.ok()) return var.error();
            vars.push_back(std::move(var.value()));
        }
        auto configs = rt.evolution().set_vars(vars);
        if (!configs.ok()) return configs.error();
        return configs_to_value(configs.value());
    };
    table[prefix + ".save"] = [kind](TeaRuntime& rt, const Value& params) -> Result<Value> {
        std::string path = opt_text(params, "path");
        if (auto st = rt.save_kind(kind, path); !st.ok()) return st.error();
        return Value{{"saved", path.empty() ? rt.manifest_path(kind) : path}};
    };
    table[prefix + ".load"] = [kind](TeaRuntime& rt, const Value& params) -> Result<Value> {
        std::string path = opt_text(params, "path");
        if (auto st = rt.load_kind(kind, path); !st.ok()) return st.error();
        return Value{{"loaded", path.empty() ? rt.manifest_path(kind) : path}};
    };
}

}  // namespace

Dispatcher::Dispatcher(TeaRuntime& runtime) : runtime_(runtime) {
    install_common(ComponentKind::tool, "tool", table_);
    install_common(ComponentKind::environment, "env", table_);
    install_common(ComponentKind::agent, "agent", table_);
    install_common(ComponentKind::prompt, "prompt", table_);

    install("tool.register", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto spec = tool_spec_from(params);
        if (!spec.ok()) return spec.error();
        auto cfg = rt.tools().register_tool(spec.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("tool.update", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        Value patched = params;  // updates never rename; spec.name is implied
        if (patched.contains("spec") && patched["spec"].is_object()) {
            patched["spec"]["name"] = name.value();
        }
        auto spec = tool_spec_from(patched);
        if (!spec.ok()) return spec.error();
        auto level = opt_level(params);
        if (!level.ok()) return level.error();
        auto cfg = rt.tools().update_tool(name.value(), spec.value(), level.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("tool.invoke", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        SessionHandle storage;
        auto session = session_from(rt, params, storage);
        if (!session.ok()) return session.error();
        return unwrap_response(
            rt.invoke_tool(name.value(), params.value("args", Value::object()), session.value()));
    });

    install("env.register", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto bp = env_blueprint_from(params);
        if (!bp.ok()) return bp.error();
        auto cfg = rt.envs().register_environment(bp.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("env.update", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        Value patched = params;
        if (patched.contains("spec") && patched["spec"].is_object()) {
            patched["spec"]["name"] = name.value();
        }
        auto bp = env_blueprint_from(patched);
        if (!bp.ok()) return bp.error();
        auto level = opt_level(params);
        if (!level.ok()) return level.error();
        auto cfg = rt.envs().update_environment(name.value(), bp.value(), level.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("env.state", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        return rt.env_state(name.value());
    });
    install("env.act", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto action = need_text(params, "action");
        if (!action.ok()) return action.error();
        SessionHandle storage;
        auto session = session_from(rt, params, storage);
        if (!session.ok()) return session.error();
        return rt.invoke_action(name.value(), action.value(),
                                params.value("args", Value::object()), session.value());
    });

    install("agent.register", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto spec = agent_spec_from(params);
        if (!spec.ok()) return spec.error();
        auto cfg = rt.agents().register_agent(spec.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("agent.update", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        Value patched = params;
        if (patched.contains("spec") && patched["spec"].is_object()) {
            patched["spec"]["name"] = name.value();
        }
        auto spec = agent_spec_from(patched);
        if (!spec.ok()) return spec.error();
        auto level = opt_level(params);
        if (!level.ok()) return level.error();
        auto cfg = rt.agents().update_agent(name.value(), spec.value(), level.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("agent.invoke", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        SessionHandle storage;
        auto session = session_from(rt, params, storage);
        if (!session.ok()) return session.error();
        return rt.invoke_agent(name.value(), params.value("task", Value::object()),
                               session.value());
    });
    install("agent.relate", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto edge = RelationEdge::from_value(params);
        if (!edge.ok()) return edge.error();
        if (auto st = rt.agents().add_relation(edge.value()); !st.ok()) return st.error();
        return edge.value().to_value();
    });
    install("agent.relations", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        std::optional<RelationKind> kind;
        if (params.contains("relation")) {
            RelationKind parsed;
            if (!params["relation"].is_string() ||
                !relation_kind_from_string(params["relation"].get<std::string>(), parsed)) {
                return make_error(ErrorKind::ProtocolError, "unknown relation kind");
            }
            kind = parsed;
        }
        Value out = Value::array();
        for (const auto& edge : rt.agents().relations(name.value(), kind)) {
            out.push_back(edge.to_value());
        }
        return out;
    });

    install("transform.a2t", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto agent = need_text(params, "agent");
        if (!agent.ok()) return agent.error();
        auto cfg = rt.transforms().a2t(agent.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("transform.t2a", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto tool = need_text(params, "tool");
        if (!tool.ok()) return tool.error();
        auto cfg = rt.transforms().t2a(tool.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("transform.e2t", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto env = need_text(params, "env");
        if (!env.ok()) return env.error();
        auto kit = rt.transforms().e2t(env.value());
        if (!kit.ok()) return kit.error();
        return kit.value().to_value();
    });
    install("transform.t2e", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        if (!params.contains("kit")) {
            return make_error(ErrorKind::ProtocolError, "param 'kit' is required");
        }
        auto kit = Toolkit::from_value(params["kit"]);
        if (!kit.ok()) return kit.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto cfg = rt.transforms().t2e(kit.value(), name.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("transform.a2e", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto agent = need_text(params, "agent");
        if (!agent.ok()) return agent.error();
        auto cfg = rt.transforms().a2e(agent.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("transform.e2a", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto env = need_text(params, "env");
        if (!env.ok()) return env.error();
        auto policy = need_text(params, "policy_id");
        if (!policy.ok()) return policy.error();
        auto cfg = rt.transforms().e2a(env.value(), policy.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("transform.check", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        CheckResult result;
        if (params.contains("first") && params.contains("second")) {
            auto first = TransformRecord::from_value(params["first"]);
            if (!first.ok()) return first.error();
            auto second = TransformRecord::from_value(params["second"]);
            if (!second.ok()) return second.error();
            result = rt.transforms().check_composition(first.value(), second.value());
        } else if (params.contains("record")) {
            auto record = TransformRecord::from_value(params["record"]);
            if (!record.ok()) return record.error();
            result = rt.transforms().check(record.value());
        } else {
            return make_error(ErrorKind::ProtocolError,
                              "expected 'record' or 'first'+'second'");
        }
        Value failures = Value::array();
        for (const auto& f : result.failures) failures.push_back(f);
        return Value{{"failures", failures}, {"ok", result.ok}};
    });
    install("transform.records", [](TeaRuntime& rt, const Value&) -> Result<Value> {
        Value out = Value::array();
        for (const auto& rec : rt.transforms().records()) out.push_back(rec.to_value());
        return out;
    });

    install("retrieve", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto kind = need_kind(params);
        if (!kind.ok()) return kind.error();
        auto query = need_text(params, "query");
        if (!query.ok()) return query.error();
        std::size_t k = params.value("k", 5);
        if (k < 1) return make_error(ErrorKind::ProtocolError, "k must be at least 1");
        return hits_to_value(rt.index().retrieve(kind.value(), query.value(), k));
    });
    install("route", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto kind = need_kind(params);
        if (!kind.ok()) return kind.error();
        auto query = need_text(params, "query");
        if (!query.ok()) return query.error();
        int branching = params.value("branching", 4);
        auto tree = rt.index().build_routing_tree(kind.value(), branching);
        auto routed = rt.index().route(tree, query.value());
        if (!routed.ok()) return routed.error();
        return Value{{"candidates_examined", routed.value().candidates_examined},
                     {"chosen", routed.value().chosen.name},
                     {"tree_depth", tree.depth},
                     {"tree_size", tree.leaf_count}};
    });

    install("session.open", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto agent = need_text(params, "agent_name");
        if (!agent.ok()) return agent.error();
        auto task = need_text(params, "task_id");
        if (!task.ok()) return task.error();
        auto handle = rt.session_open(agent.value(), task.value());
        return Value{{"agent_name", handle.agent_name},
                     {"session_id", handle.session_id},
                     {"task_id", handle.task_id}};
    });
    install("session.close", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto sid = need_text(params, "session_id");
        if (!sid.ok()) return sid.error();
        if (auto st = rt.session_close(sid.value()); !st.ok()) return st.error();
        return Value{{"closed", sid.value()}};
    });
    install("memory.record", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto sid = need_text(params, "session_id");
        if (!sid.ok()) return sid.error();
        auto handle = rt.sessions().get(sid.value());
        if (!handle.ok()) return handle.error();
        auto kind = need_text(params, "event_kind");
        if (!kind.ok()) return kind.error();
        auto event = rt.memory().record(handle.value(), kind.value(),
                                        params.value("payload", Value::object()));
        if (!event.ok()) return event.error();
        return event.value().to_value();
    });
    install("memory.events", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto sid = need_text(params, "session_id");
        if (!sid.ok()) return sid.error();
        Value out = Value::array();
        for (const auto& event : rt.memory().events(sid.value())) {
            out.push_back(event.to_value());
        }
        return out;
    });
    install("trace.query", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        std::vector<TraceRecord> records;
        if (params.contains("record_id")) {
            auto rec = rt.tracer().by_record_id(params["record_id"].get<std::string>());
            if (!rec.ok()) return rec.error();
            records.push_back(std::move(rec.value()));
        } else if (params.contains("session_id") && params.contains("index")) {
            auto rec = rt.tracer().by_index(params["session_id"].get<std::string>(),
                                            params["index"].get<int>());
            if (!rec.ok()) return rec.error();
            records.push_back(std::move(rec.value()));
        } else if (params.contains("session_id")) {
            records = rt.tracer().by_session(params["session_id"].get<std::string>());
        } else if (params.contains("task_id")) {
            records = rt.tracer().by_task(params["task_id"].get<std::string>());
        } else {
            return make_error(ErrorKind::ProtocolError,
                              "expected session_id, task_id, record_id, or session_id+index");
        }
        Value out = Value::array();
        for (const auto& rec : records) out.push_back(rec.to_value());
        return out;
    });
    install("model.invoke", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        if (!params.contains("chain") || !params["chain"].is_array()) {
            return make_error(ErrorKind::ProtocolError, "param 'chain' must be a sequence");
        }
        std::vector<std::string> chain;
        for (const auto& id : params["chain"]) {
            if (!id.is_string()) {
                return make_error(ErrorKind::ProtocolError, "chain entries must be text");
            }
            chain.push_back(id.get<std::string>());
        }
        return rt.models().invoke(params.value("request", Value::object()), chain);
    });

    install("prompt.register", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        if (!params.contains("spec") || !params["spec"].is_object()) {
            return make_error(ErrorKind::ProtocolError, "param 'spec' must be a mapping");
        }
        const Value& spec_v = params["spec"];
        auto name = need_text(spec_v, "name");
        if (!name.ok()) return name.error();
        PromptSpec spec;
        spec.name = name.value();
        spec.description = opt_text(spec_v, "description");
        spec.system_template = opt_text(spec_v, "system_template");
        spec.message_template = opt_text(spec_v, "message_template");
        spec.evolvable = spec_v.value("evolvable", true);
        if (spec_v.contains("modules")) {
            for (auto it = spec_v["modules"].begin(); it != spec_v["modules"].end(); ++it) {
                spec.modules[it.key()] = it.value().get<std::string>();
            }
        }
        if (spec_v.contains("trainable_slots")) {
            for (const auto& s : spec_v["trainable_slots"]) {
                spec.trainable_slots.push_back(s.get<std::string>());
            }
        }
        auto cfg = rt.prompts().register_prompt(spec);
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("prompt.update", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto level = opt_level(params);
        if (!level.ok()) return level.error();
        auto cfg = rt.prompts().update_prompt(name.value(),
                                              params.value("changes", Value::object()),
                                              level.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });
    install("prompt.render", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto rendered = rt.prompts().render(name.value(),
                                            params.value("variables", Value::object()));
        if (!rendered.ok()) return rendered.error();
        return rendered.value().to_value();
    });

    install("evolve.run", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto kind = need_kind(params);
        if (!kind.ok()) return kind.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto critic_id = need_text(params, "critic_id");
        if (!critic_id.ok()) return critic_id.error();
        auto critic = rt.critic(critic_id.value());
        if (!critic.ok()) return critic.error();
        int max_iter = params.value("max_iter", 3);
        auto outcome = rt.evolution().evolve(kind.value(), name.value(), *critic.value(),
                                             params.value("feedback", Value::object()), max_iter,
                                             opt_text(params, "slot"));
        if (!outcome.ok()) return outcome.error();
        return outcome.value().to_value();
    });
    install("evolve.vars", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto kind = need_kind(params);
        if (!kind.ok()) return kind.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto vars = rt.evolution().vars(kind.value(), name.value());
        if (!vars.ok()) return vars.error();
        Value out = Value::array();
        for (const auto& var : vars.value()) out.push_back(var.to_value());
        return out;
    });
    install("evolve.setvars", [this](TeaRuntime& rt, const Value& params) -> Result<Value> {
        return table_.at("tool.setvars")(rt, params);  // same engine surface
    });
    install("evolve.rollback", [](TeaRuntime& rt, const Value& params) -> Result<Value> {
        auto kind = need_kind(params);
        if (!kind.ok()) return kind.error();
        auto name = need_text(params, "name");
        if (!name.ok()) return name.error();
        auto version = need_version(params);
        if (!version.ok()) return version.error();
        auto cfg = rt.evolution().rollback(kind.value(), name.value(), version.value());
        if (!cfg.ok()) return cfg.error();
        return cfg.value().to_value();
    });

    install("sys.ops", [this](TeaRuntime&, const Value&) -> Result<Value> {
        Value out = Value::array();
        for (const auto& op : ops()) out.push_back(op);
        return out;
    });
}

void Dispatcher::install(std::string op, Handler handler) {
    table_[std::move(op)] = std::move(handler);
}

std::vector<std::string> Dispatcher::ops() const {
    std::vector<std::string> out;
    for (const auto& [op, handler] : table_) out.push_back(op);
    return out;
}

ResponseEnvelope Dispatcher::dispatch(const RequestEnvelope& request) {
    ResponseEnvelope resp;
    resp.id = request.id;
    if (request.id.empty()) {
        resp.error = make_error(ErrorKind::ProtocolError, "request id must be non-empty");
        return resp;
    }
    auto it = table_.find(request.op);
    if (it == table_.end()) {
        resp.error = make_error(ErrorKind::ProtocolError, "unknown op '" + request.op + "'");
        return resp;
    }
    Result<Value> out = Value();
    try {
        out = it->second(runtime_, request.params);
    } catch (const std::exception& e) {
        out = make_error(ErrorKind::ProtocolError, std::string("malformed params: ") + e.what());
    } catch (...) {
        out = make_error(ErrorKind::ProtocolError, "malformed params");
    }
    if (out.ok()) {
        resp.ok = true;
        resp.result = std::move(out.value());
    } else {
        resp.error = out.error();
    }
    return resp;
}

ResponseEnvelope Dispatcher::dispatch_line(const std::string& line) {
    auto parsed = parse_value(line);
    if (!parsed.ok()) {
        ResponseEnvelope resp;
        resp.id = "";
        resp.error = make_error(ErrorKind::ProtocolError, "malformed request line");
        return resp;
    }
    const Value& v = parsed.value();
    RequestEnvelope req;
    if (v.is_object()) {
        if (v.contains("id") && v["id"].is_string()) req.id = v["id"].get<std::string>();
        if (v.contains("op") && v["op"].is_string()) req.op = v["op"].get<std::string>();
        if (v.contains("params") && v["params"].is_object()) req.params = v["params"];
    }
    return dispatch(req);
}

}  // namespace tea
