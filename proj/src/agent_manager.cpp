#include "tea/agent_manager.hpp"

#include <mutex>

namespace tea {

const char* to_string(RelationKind kind) {
    switch (kind) {
        case RelationKind::hierarchical: return "hierarchical";
        case RelationKind::cooperative: return "cooperative";
        case RelationKind::competitive: return "competitive";
    }
    return "cooperative";
}

bool relation_kind_from_string(const std::string& text, RelationKind& out) {
    if (text == "hierarchical") {
        out = RelationKind::hierarchical;
    } else if (text == "cooperative") {
        out = RelationKind::cooperative;
    } else if (text == "competitive") {
        out = RelationKind::competitive;
    } else {
        return false;
    }
    return true;
}

Value RelationEdge::to_value() const {
    return Value{{"from", from}, {"kind", to_string(kind)}, {"to", to}};
}

Result<RelationEdge> RelationEdge::from_value(const Value& v) {
    if (!v.is_object() || !v.contains("from") || !v.contains("to") || !v.contains("kind")) {
        return make_error(ErrorKind::ValidationFailed, "malformed relation edge");
    }
    RelationEdge edge;
    edge.from = v["from"].get<std::string>();
    edge.to = v["to"].get<std::string>();
    if (!relation_kind_from_string(v["kind"].get<std::string>(), edge.kind)) {
        return make_error(ErrorKind::ValidationFailed, "unknown relation kind");
    }
    return edge;
}

AgentContextManager::AgentContextManager(VersionManager& versions, VectorIndex* index,
                                         Tracer* tracer, Clock& clock, BehaviorResolver* resolver)
    : ComponentRegistry(ComponentKind::agent, versions, index, clock),
      tracer_(tracer),
      resolver_(resolver) {}

Result<ComponentConfig> AgentContextManager::build_config(const AgentSpec& spec) const {
    std::vector<ParamDecl> params = spec.task_params;
    if (params.empty() && !spec.open_task) {
        params = {{"task", SemanticType::mapping, true, "task payload"}};
    }
    if (auto st = check_param_decls(params); !st.ok()) return st.error();
    ComponentConfig cfg;
    cfg.descriptor = spec.descriptor;
    cfg.kind = ComponentKind::agent;
    cfg.source = spec.source;
    cfg.extensions["params"] = params_to_value(params);
    cfg.extensions["open_args"] = spec.open_task;
    cfg.extensions["reentrant"] = spec.reentrant;
    cfg.representations = synthesize_representations(
        spec.descriptor.name, spec.descriptor.description, params, spec.open_task);
    return cfg;
}

Result<ComponentConfig> AgentContextManager::register_agent(const AgentSpec& spec) {
    auto cfg = build_config(spec);
    if (!cfg.ok()) return cfg.error();
    std::unique_lock lock(mu_);
    pending_ = AgentPolicyInfo{spec.policy, spec.reentrant};
    auto out = commit_new_locked(std::move(cfg.value()), "registered");
    pending_.reset();
    return out;
}

Result<ComponentConfig> AgentContextManager::update_agent(const ComponentName& name,
                                                          const AgentSpec& spec,
                                                          BumpLevel level) {
    auto cfg = build_config(spec);
    if (!cfg.ok()) return cfg.error();
    std::unique_lock lock(mu_);
    if (!active_.count(name)) {
        return make_error(ErrorKind::NotFound, "agent '" + name + "' is not registered");
    }
    cfg.value().descriptor.name = name;
    cfg.value().representations = resynthesize(cfg.value());
    pending_ = AgentPolicyInfo{spec.policy, spec.reentrant};
    auto out = commit_next_locked(std::move(cfg.value()), level,
                                  "update (" + std::string(to_string(level)) + ")");
    pending_.reset();
    return out;
}

void AgentContextManager::activate_instance(const ComponentConfig& cfg) {
    const auto& name = cfg.descriptor.name;
    AgentPolicyInfo info;
    if (pending_ && pending_->policy) {
        info = *pending_;
    } else if (resolver_) {
        if (auto resolved = resolver_->resolve_agent(cfg)) {
            info = std::move(*resolved);
        }
    }
    if (!info.policy) {
        policies_.erase(name);  // dormant
        return;
    }
    auto live = std::make_shared<LiveAgent>();
    live->policy = std::move(info.policy);
    live->reentrant = info.reentrant || cfg.extensions.value("reentrant", false);
    policies_[name] = std::move(live);
}

void AgentContextManager::activate_copy(const ComponentName& source, const ComponentConfig& cfg) {
    auto it = policies_.find(source);
    if (it != policies_.end()) {
        auto live = std::make_shared<LiveAgent>();
        live->policy = it->second->policy;
        live->reentrant = it->second->reentrant;
        policies_[cfg.descriptor.name] = std::move(live);
        return;
    }
    activate_instance(cfg);
}

void AgentContextManager::deactivate_instance(const ComponentName& name) {
    policies_.erase(name);
}

void AgentContextManager::on_unregister(const ComponentName& name) {
    for (auto it = edges_.begin(); it != edges_.end();) {
        if (it->from == name || it->to == name) {
            it = edges_.erase(it);
        } else {
            ++it;
        }
    }
}

bool AgentContextManager::is_dormant(const ComponentName& name) const {
    std::shared_lock lock(mu_);
    return active_.count(name) > 0 && policies_.count(name) == 0;
}

std::string AgentContextManager::schema_summary(const ComponentConfig& cfg) const {
    if (cfg.extensions.value("open_args", false)) return "task: open mapping";
    return ComponentRegistry::schema_summary(cfg);
}

Result<Value> AgentContextManager::invoke(const ComponentName& name, const Value& task,
                                          InvokeContext& ctx) {
    std::shared_ptr<LiveAgent> live;
    Result<Value> outcome = Value();
    bool resolved = false;
    {
        std::shared_lock lock(mu_);
        if (!active_.count(name)) {
            outcome = make_error(ErrorKind::NotFound, "agent '" + name + "' is not registered");
            resolved = true;
        } else {
            auto it = policies_.find(name);
            if (it == policies_.end()) {
                outcome = make_error(ErrorKind::LifecycleViolation,
                                     "agent '" + name + "' is dormant (policy unresolved)");
                resolved = true;
            } else {
                live = it->second;
            }
        }
    }

    if (!resolved) {
        std::unique_lock<std::mutex> serial;
        if (!live->reentrant) serial = std::unique_lock<std::mutex>(live->serial_mu);
        try {
            outcome = live->policy(task, ctx);
        } catch (const std::exception& e) {
            outcome = make_error(ErrorKind::BackendFailure,
                                 std::string("agent policy threw: ") + e.what());
        } catch (...) {
            outcome = make_error(ErrorKind::BackendFailure, "agent policy threw");
        }
    }

    if (ctx.session && tracer_) {
        Value traced_outcome =
            outcome.ok() ? Value{{"ok", true}, {"output", outcome.value()}}
                         : Value{{"ok", false},
                                 {"error", Value{{"kind", to_string(outcome.error().kind)},
                                                 {"detail", outcome.error().detail}}}};
        auto traced = tracer_->record(*ctx.session,
                                      Value{{"component", name}, {"op", "agent.invoke"}},
                                      TraceInvocation{"agent", name, task, std::move(traced_outcome)});
        (void)traced;
    }
    return outcome;
}

Status AgentContextManager::add_relation(const RelationEdge& edge) {
    std::unique_lock lock(mu_);
    if (!active_.count(edge.from)) {
        return make_error(ErrorKind::NotFound, "agent '" + edge.from + "' is not registered");
    }
    if (!active_.count(edge.to)) {
        return make_error(ErrorKind::NotFound, "agent '" + edge.to + "' is not registered");
    }
    if (edges_.count(edge)) return ok_status();  // idempotent
    if (edge.kind == RelationKind::hierarchical) {
        if (edge.from == edge.to) {
            return make_error(ErrorKind::ValidationFailed,
                              "hierarchical self-edge would form a cycle");
        }
        for (const auto& e : edges_) {
            if (e.kind == RelationKind::hierarchical && e.to == edge.to && e.from != edge.from) {
                return make_error(ErrorKind::ValidationFailed,
                                  "agent '" + edge.to + "' already has a hierarchical parent");
            }
        }
        // Walking parents from `from`: reaching `to` means `from` descends
        // from `to`, so the new edge would close a cycle.
        ComponentName cursor = edge.from;
        while (true) {
            const RelationEdge* parent = nullptr;
            for (const auto& e : edges_) {
                if (e.kind == RelationKind::hierarchical && e.to == cursor) {
                    parent = &e;
                    break;
                }
            }
            if (!parent) break;
            if (parent->from == edge.to) {
                return make_error(ErrorKind::ValidationFailed,
                                  "hierarchical edge would form a cycle");
            }
            cursor = parent->from;
        }
    }
    edges_.insert(edge);
    return ok_status();
}

std::vector<RelationEdge> AgentContextManager::relations(
    const ComponentName& name, std::optional<RelationKind> kind) const {
    std::shared_lock lock(mu_);
    std::vector<RelationEdge> out;
    for (const auto& e : edges_) {
        if (e.from != name && e.to != name) continue;
        if (kind && e.kind != *kind) continue;
        out.push_back(e);
    }
    return out;  // set order is (from, to, kind)
}

std::vector<RelationEdge> AgentContextManager::all_relations() const {
    std::shared_lock lock(mu_);
    return {edges_.begin(), edges_.end()};
}

Status AgentContextManager::adopt_relation(const RelationEdge& edge) {
    std::unique_lock lock(mu_);
    edges_.insert(edge);
    return ok_status();
}

}  // namespace tea
