#include "tea/tool_manager.hpp"

#include <mutex>

namespace tea {

Value ToolResponse::to_value() const {
    Value v{{"elapsed_us", elapsed_us},
            {"ok", ok},
            {"tool_version", tool_version.render()}};
    if (ok) {
        v["output"] = output;
    } else if (error) {
        v["error"] = Value{{"kind", to_string(error->kind)}, {"detail", error->detail}};
    }
    return v;
}

ToolContextManager::ToolContextManager(VersionManager& versions, VectorIndex* index,
                                       Tracer* tracer, Clock& clock, BehaviorResolver* resolver)
    : ComponentRegistry(ComponentKind::tool, versions, index, clock),
      tracer_(tracer),
      resolver_(resolver) {}

Result<ComponentConfig> ToolContextManager::build_config(const ToolSpec& spec) {
    if (auto st = check_param_decls(spec.params); !st.ok()) return st.error();
    ComponentConfig cfg;
    cfg.descriptor = spec.descriptor;
    cfg.kind = ComponentKind::tool;
    cfg.source = spec.source;
    cfg.extensions["params"] = params_to_value(spec.params);
    cfg.extensions["open_args"] = spec.open_args;
    cfg.representations = synthesize_representations(
        spec.descriptor.name, spec.descriptor.description, spec.params, spec.open_args);
    return cfg;
}

Result<Representations> ToolContextManager::synthesize(const ToolSpec& spec) {
    if (auto st = check_param_decls(spec.params); !st.ok()) return st.error();
    return synthesize_representations(spec.descriptor.name, spec.descriptor.description,
                                      spec.params, spec.open_args);
}

Result<ComponentConfig> ToolContextManager::register_tool(const ToolSpec& spec) {
    auto cfg = build_config(spec);
    if (!cfg.ok()) return cfg.error();
    std::unique_lock lock(mu_);
    pending_ = spec.behavior;
    auto out = commit_new_locked(std::move(cfg.value()), "registered");
    pending_ = nullptr;
    return out;
}

Result<ComponentConfig> ToolContextManager::update_tool(const ComponentName& name,
                                                        const ToolSpec& spec, BumpLevel level) {
    auto cfg = build_config(spec);
    if (!cfg.ok()) return cfg.error();
    std::unique_lock lock(mu_);
    if (!active_.count(name)) {
        return make_error(ErrorKind::NotFound, "tool '" + name + "' is not registered");
    }
    // Updates never rename: the name is the identity.
    cfg.value().descriptor.name = name;
    cfg.value().representations = resynthesize(cfg.value());
    pending_ = spec.behavior;
    auto out = commit_next_locked(std::move(cfg.value()), level,
                                  "update (" + std::string(to_string(level)) + ")");
    pending_ = nullptr;
    return out;
}

void ToolContextManager::activate_instance(const ComponentConfig& cfg) {
    const auto& name = cfg.descriptor.name;
    if (pending_) {
        behaviors_[name] = pending_;
        return;
    }
    if (resolver_) {
        if (auto resolved = resolver_->resolve_tool(cfg)) {
            behaviors_[name] = std::move(*resolved);
            return;
        }
    }
    behaviors_.erase(name);  // dormant
}

void ToolContextManager::activate_copy(const ComponentName& source, const ComponentConfig& cfg) {
    auto it = behaviors_.find(source);
    if (it != behaviors_.end()) {
        behaviors_[cfg.descriptor.name] = it->second;
        return;
    }
    activate_instance(cfg);
}

void ToolContextManager::deactivate_instance(const ComponentName& name) {
    behaviors_.erase(name);
}

bool ToolContextManager::is_dormant(const ComponentName& name) const {
    std::shared_lock lock(mu_);
    return active_.count(name) > 0 && behaviors_.count(name) == 0;
}

ToolResponse ToolContextManager::invoke(const ComponentName& name, const Value& args,
                                        InvokeContext& ctx) {
    ToolResponse resp;
    std::int64_t t0 = clock_.now_micros();

    std::optional<ComponentConfig> cfg;
    ToolBehavior behavior;
    {
        std::shared_lock lock(mu_);
        auto it = active_.find(name);
        if (it != active_.end()) {
            cfg = it->second;
            auto bit = behaviors_.find(name);
            if (bit != behaviors_.end()) behavior = bit->second;
        }
    }

    if (!cfg) {
        resp.error = make_error(ErrorKind::NotFound, "tool '" + name + "' is not registered");
    } else {
        resp.tool_version = cfg->version;
        auto params = params_from_value(cfg->extensions.value("params", Value::array()));
        bool open = cfg->extensions.value("open_args", false);
        auto reasons = check_args(params.ok() ? params.value() : std::vector<ParamDecl>{}, open,
                                  args);
        if (!reasons.empty()) {
            Validation v{false, reasons};
            resp.error = make_error(ErrorKind::ValidationFailed, v.joined());
        } else if (!behavior) {
            resp.error = make_error(ErrorKind::LifecycleViolation,
                                    "tool '" + name + "' is dormant (behavior unresolved)");
        } else {
            // The invocation runs on the version captured above; a
            // concurrent update does not retarget it.
            try {
                auto out = behavior(args, ctx);
                if (out.ok()) {
                    resp.ok = true;
                    resp.output = std::move(out.value());
                } else {
                    resp.error = out.error();
                }
            } catch (const std::exception& e) {
                resp.error = make_error(ErrorKind::BackendFailure,
                                        std::string("tool behavior threw: ") + e.what());
            } catch (...) {
                resp.error = make_error(ErrorKind::BackendFailure, "tool behavior threw");
            }
        }
    }

    resp.elapsed_us = clock_.now_micros() - t0;

    if (ctx.session && tracer_) {
        Value outcome = resp.ok
                            ? Value{{"ok", true}, {"output", resp.output}}
                            : Value{{"ok", false},
                                    {"error", Value{{"kind", to_string(resp.error->kind)},
                                                    {"detail", resp.error->detail}}}};
        auto traced = tracer_->record(
            *ctx.session, Value{{"component", name}, {"op", "tool.invoke"}},
            TraceInvocation{"tool", name, args, std::move(outcome)});
        (void)traced;  // a session sealed mid-flight loses attribution only
    }
    return resp;
}

}  // namespace tea
