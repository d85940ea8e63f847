#include "tea/env_manager.hpp"

#include <mutex>
#include <set>
#include <sstream>

namespace tea {

Value ActionDecl::to_value() const {
    return Value{{"doc", doc},
                 {"name", name},
                 {"open_args", open_args},
                 {"params", params_to_value(params)},
                 {"representations", representations.to_value()}};
}

Result<ActionDecl> ActionDecl::from_value(const Value& v) {
    if (!v.is_object() || !v.contains("name") || !v["name"].is_string()) {
        return make_error(ErrorKind::ValidationFailed, "malformed action declaration");
    }
    ActionDecl decl;
    decl.name = v["name"].get<std::string>();
    decl.doc = v.value("doc", std::string());
    decl.open_args = v.value("open_args", false);
    auto params = params_from_value(v.value("params", Value::array()));
    if (!params.ok()) return params.error();
    decl.params = std::move(params.value());
    if (v.contains("representations")) {
        auto reprs = Representations::from_value(v["representations"]);
        if (!reprs.ok()) return reprs.error();
        decl.representations = std::move(reprs.value());
    }
    return decl;
}

EnvironmentContextManager::EnvironmentContextManager(VersionManager& versions, VectorIndex* index,
                                                     Tracer* tracer, Clock& clock,
                                                     BehaviorResolver* resolver)
    : ComponentRegistry(ComponentKind::environment, versions, index, clock),
      tracer_(tracer),
      resolver_(resolver) {}

std::string EnvironmentContextManager::generate_rules(const Descriptor& descriptor,
                                                      const std::vector<ActionDecl>& actions) {
    std::ostringstream out;
    out << "Environment: " << descriptor.name << " - " << descriptor.description << "\n";
    if (actions.empty()) {
        out << "Actions: (none)\n";
    } else {
        out << "Actions:\n";
        for (const auto& a : actions) {
            out << "  - " << a.name << ":";
            if (!a.doc.empty()) out << " " << a.doc;
            out << "\n";
            for (const auto& p : a.params) {
                out << "      " << p.name << " (" << to_string(p.type) << ", "
                    << (p.required ? "required" : "optional") << ")";
                if (!p.doc.empty()) out << ": " << p.doc;
                out << "\n";
            }
        }
    }
    out << "State: read-only snapshot available through the state query.\n";
    return out.str();
}

Result<std::vector<ActionDecl>> EnvironmentContextManager::actions_from_config(
    const ComponentConfig& cfg) {
    std::vector<ActionDecl> out;
    const Value& arr = cfg.extensions.value("actions", Value::array());
    if (!arr.is_array()) {
        return make_error(ErrorKind::ValidationFailed, "environment actions must be a sequence");
    }
    for (const auto& item : arr) {
        auto decl = ActionDecl::from_value(item);
        if (!decl.ok()) return decl.error();
        out.push_back(std::move(decl.value()));
    }
    return out;
}

Result<ComponentConfig> EnvironmentContextManager::build_config(
    const EnvBlueprint& blueprint) const {
    std::set<std::string> seen;
    for (const auto& a : blueprint.actions) {
        if (!valid_name(a.name)) {
            return make_error(ErrorKind::ValidationFailed, "invalid action name '" + a.name + "'");
        }
        if (!seen.insert(a.name).second) {
            return make_error(ErrorKind::ValidationFailed,
                              "duplicate action name '" + a.name + "'");
        }
        if (auto st = check_param_decls(a.params); !st.ok()) {
            return make_error(ErrorKind::ValidationFailed,
                              "action '" + a.name + "': " + st.error().detail);
        }
    }
    ComponentConfig cfg;
    cfg.descriptor = blueprint.descriptor;
    cfg.kind = ComponentKind::environment;
    cfg.source = blueprint.source;
    std::vector<ActionDecl> actions = blueprint.actions;
    Value actions_v = Value::array();
    for (auto& a : actions) {
        std::string doc = a.doc.empty() ? ("action " + a.name) : a.doc;
        a.representations = synthesize_representations(a.name, doc, a.params, a.open_args);
        actions_v.push_back(a.to_value());
    }
    for (auto it = blueprint.extra_extensions.begin(); it != blueprint.extra_extensions.end();
         ++it) {
        cfg.extensions[it.key()] = it.value();
    }
    cfg.extensions["actions"] = actions_v;
    cfg.extensions["rules"] = generate_rules(blueprint.descriptor, actions);
    cfg.representations = synthesize_representations(blueprint.descriptor.name,
                                                     blueprint.descriptor.description, {}, false);
    return cfg;
}

Result<ComponentConfig> EnvironmentContextManager::register_environment(
    const EnvBlueprint& blueprint) {
    auto cfg = build_config(blueprint);
    if (!cfg.ok()) return cfg.error();
    std::unique_lock lock(mu_);
    pending_ = blueprint.make;
    auto out = commit_new_locked(std::move(cfg.value()), "registered");
    pending_ = nullptr;
    return out;
}

Result<ComponentConfig> EnvironmentContextManager::update_environment(const ComponentName& name,
                                                                      const EnvBlueprint& blueprint,
                                                                      BumpLevel level) {
    auto cfg = build_config(blueprint);
    if (!cfg.ok()) return cfg.error();
    std::unique_lock lock(mu_);
    if (!active_.count(name)) {
        return make_error(ErrorKind::NotFound, "environment '" + name + "' is not registered");
    }
    cfg.value().descriptor.name = name;
    cfg.value().extensions["rules"] =
        generate_rules(cfg.value().descriptor, blueprint.actions);
    cfg.value().representations = resynthesize(cfg.value());
    pending_ = blueprint.make;
    auto out = commit_next_locked(std::move(cfg.value()), level,
                                  "update (" + std::string(to_string(level)) + ")");
    pending_ = nullptr;
    return out;
}

void EnvironmentContextManager::activate_instance(const ComponentConfig& cfg) {
    const auto& name = cfg.descriptor.name;
    EnvFactory factory = pending_;
    if (!factory) {
        auto it = factories_.find(name);
        if (it != factories_.end()) factory = it->second;
    }
    if (!factory && resolver_) {
        if (auto resolved = resolver_->resolve_env(cfg)) factory = std::move(*resolved);
    }
    if (!factory) {
        instances_.erase(name);
        factories_.erase(name);
        return;  // dormant
    }
    auto live = std::make_shared<LiveEnv>();
    try {
        live->instance = factory();
    } catch (...) {
        live->instance = nullptr;
    }
    if (!live->instance) {
        instances_.erase(name);
        factories_.erase(name);
        return;
    }
    factories_[name] = factory;
    instances_[name] = std::move(live);
}

void EnvironmentContextManager::activate_copy(const ComponentName& source,
                                              const ComponentConfig& cfg) {
    auto it = factories_.find(source);
    if (it != factories_.end()) {
        // A copy duplicates configuration, not state: fresh instance.
        pending_ = it->second;
        activate_instance(cfg);
        pending_ = nullptr;
        return;
    }
    activate_instance(cfg);
}

void EnvironmentContextManager::deactivate_instance(const ComponentName& name) {
    instances_.erase(name);
    factories_.erase(name);
}

bool EnvironmentContextManager::is_dormant(const ComponentName& name) const {
    std::shared_lock lock(mu_);
    return active_.count(name) > 0 && instances_.count(name) == 0;
}

std::string EnvironmentContextManager::contract_text(const ComponentConfig& cfg) const {
    return cfg.extensions.value("rules", cfg.representations.text_description);
}

std::string EnvironmentContextManager::schema_summary(const ComponentConfig& cfg) const {
    auto actions = actions_from_config(cfg);
    if (!actions.ok() || actions.value().empty()) return "actions: none";
    std::string out = "actions: ";
    bool first = true;
    for (const auto& a : actions.value()) {
        if (!first) out += ", ";
        out += a.name;
        first = false;
    }
    return out;
}

Result<std::vector<ActionDecl>> EnvironmentContextManager::actions_of(
    const ComponentName& name) const {
    auto cfg = active_config(name);
    if (!cfg.ok()) return cfg.error();
    return actions_from_config(cfg.value());
}

Result<Value> EnvironmentContextManager::state(const ComponentName& name) const {
    std::shared_ptr<LiveEnv> live;
    {
        std::shared_lock lock(mu_);
        if (!active_.count(name)) {
            return make_error(ErrorKind::NotFound, "environment '" + name + "' is not registered");
        }
        auto it = instances_.find(name);
        if (it == instances_.end()) {
            return make_error(ErrorKind::LifecycleViolation,
                              "environment '" + name + "' is dormant (no live instance)");
        }
        live = it->second;
    }
    std::shared_lock state_lock(live->state_mu);
    return live->instance->state();
}

Result<Value> EnvironmentContextManager::act(const ComponentName& name,
                                             const ComponentName& action, const Value& args,
                                             InvokeContext& ctx) {
    std::shared_ptr<LiveEnv> live;
    Result<Value> outcome = Value();
    bool resolved = false;
    {
        std::shared_lock lock(mu_);
        auto it = active_.find(name);
        if (it == active_.end()) {
            outcome = make_error(ErrorKind::NotFound,
                                 "environment '" + name + "' is not registered");
            resolved = true;
        } else {
            auto actions = actions_from_config(it->second);
            const ActionDecl* decl = nullptr;
            if (actions.ok()) {
                for (const auto& a : actions.value()) {
                    if (a.name == action) {
                        decl = &a;
                        break;
                    }
                }
            }
            if (!decl) {
                outcome = make_error(ErrorKind::ActionNotFound, "environment '" + name +
                                                                    "' has no action '" + action +
                                                                    "'");
                resolved = true;
            } else {
                auto reasons = check_args(decl->params, decl->open_args, args);
                if (!reasons.empty()) {
                    Validation v{false, reasons};
                    outcome = make_error(ErrorKind::ValidationFailed, v.joined());
                    resolved = true;
                } else {
                    auto lit = instances_.find(name);
                    if (lit == instances_.end()) {
                        outcome = make_error(ErrorKind::LifecycleViolation,
                                             "environment '" + name + "' is dormant");
                        resolved = true;
                    } else {
                        live = lit->second;
                    }
                }
            }
        }
    }

    if (!resolved) {
        std::unique_lock state_lock(live->state_mu);
        try {
            outcome = live->instance->step(action, args, ctx);
        } catch (const std::exception& e) {
            outcome = make_error(ErrorKind::BackendFailure,
                                 std::string("environment action threw: ") + e.what());
        } catch (...) {
            outcome = make_error(ErrorKind::BackendFailure, "environment action threw");
        }
    }

    if (ctx.session && tracer_) {
        Value traced_outcome =
            outcome.ok() ? Value{{"ok", true}, {"output", outcome.value()}}
                         : Value{{"ok", false},
                                 {"error", Value{{"kind", to_string(outcome.error().kind)},
                                                 {"detail", outcome.error().detail}}}};
        auto traced = tracer_->record(
            *ctx.session, Value{{"action", action}, {"component", name}, {"op", "env.act"}},
            TraceInvocation{"environment", name, Value{{"action", action}, {"args", args}},
                            std::move(traced_outcome)});
        (void)traced;
    }
    return outcome;
}

}  // namespace tea
