#include "tea/runtime.hpp"

#include <cstdlib>
#include <filesystem>

#include "tea/persist.hpp"

namespace tea {

namespace fs = std::filesystem;

std::optional<ToolBehavior> CompositeResolver::resolve_tool(const ComponentConfig& cfg) {
    for (auto* r : chain_) {
        if (auto got = r->resolve_tool(cfg)) return got;
    }
    return std::nullopt;
}

std::optional<AgentPolicyInfo> CompositeResolver::resolve_agent(const ComponentConfig& cfg) {
    for (auto* r : chain_) {
        if (auto got = r->resolve_agent(cfg)) return got;
    }
    return std::nullopt;
}

std::optional<EnvFactory> CompositeResolver::resolve_env(const ComponentConfig& cfg) {
    for (auto* r : chain_) {
        if (auto got = r->resolve_env(cfg)) return got;
    }
    return std::nullopt;
}

std::optional<StepPolicy> CompositeResolver::resolve_step_policy(const std::string& policy_id) {
    for (auto* r : chain_) {
        if (auto got = r->resolve_step_policy(policy_id)) return got;
    }
    return std::nullopt;
}

namespace {

std::string default_data_dir(const std::string& configured) {
    if (!configured.empty()) return configured;
    if (const char* env = std::getenv("TEA_DATA_DIR"); env && *env) return env;
    return "tea-data";
}

std::shared_ptr<Clock> default_clock(std::shared_ptr<Clock> configured) {
    return configured ? configured : std::make_shared<SystemClock>();
}

IdGen default_ids(IdGen configured) { return configured ? configured : random_hex_ids(); }

// Demo critics addressable over the wire: one that always improves the
// content by appending, and one that never clears the baseline.
std::shared_ptr<Critic> append_critic() {
    return std::make_shared<ScriptedCritic>(
        "builtin.append",
        [](const Variable& var, const Value&) -> Result<std::string> {
            return var.content + " +";
        },
        [](const std::string& content, const Value&) -> Result<double> {
            return double(content.size());
        });
}

std::shared_ptr<Critic> stubborn_critic() {
    return std::make_shared<ScriptedCritic>(
        "builtin.stubborn",
        [](const Variable& var, const Value&) -> Result<std::string> { return var.content; },
        [](const std::string&, const Value&) -> Result<double> { return 0.0; });
}

}  // namespace

TeaRuntime::TeaRuntime(RuntimeOptions opts)
    : data_dir_(default_data_dir(opts.data_dir)),
      clock_(default_clock(std::move(opts.clock))),
      sessions_(default_ids(opts.ids)),
      versions_(*clock_),
      index_(std::make_shared<HashedEmbedder>(opts.embed_dim)),
      memory_(*clock_, sessions_),
      tracer_(*clock_, sessions_, default_ids(opts.ids)),
      tools_(versions_, &index_, &tracer_, *clock_, &resolver_),
      envs_(versions_, &index_, &tracer_, *clock_, &resolver_),
      agents_(versions_, &index_, &tracer_, *clock_, &resolver_),
      prompts_(versions_, &index_, *clock_),
      evolution_(*clock_) {
    transformer_ = std::make_unique<Transformer>(tools_, envs_, agents_, *clock_, &resolver_);
    resolver_.add(&builtin_resolver_);
    resolver_.add(transformer_.get());
    evolution_.attach(ComponentKind::tool, &tools_);
    evolution_.attach(ComponentKind::environment, &envs_);
    evolution_.attach(ComponentKind::agent, &agents_);
    evolution_.attach(ComponentKind::prompt, &prompts_);
    (void)register_critic(append_critic());
    (void)register_critic(stubborn_critic());
}

Result<ComponentRegistry*> TeaRuntime::registry_for(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::tool: return static_cast<ComponentRegistry*>(&tools_);
        case ComponentKind::environment: return static_cast<ComponentRegistry*>(&envs_);
        case ComponentKind::agent: return static_cast<ComponentRegistry*>(&agents_);
        case ComponentKind::prompt: return static_cast<ComponentRegistry*>(&prompts_);
        case ComponentKind::memory: break;
    }
    return make_error(ErrorKind::NotFound, "kind 'memory' has no registry");
}

ToolResponse TeaRuntime::invoke_tool(const ComponentName& name, const Value& args,
                                     const SessionHandle* session) {
    if (session && !sessions_.is_open(session->session_id)) {
        ToolResponse resp;
        resp.error = make_error(ErrorKind::LifecycleViolation,
                                "session '" + session->session_id + "' is not open");
        return resp;
    }
    InvokeContext ctx{this, session ? std::optional<SessionHandle>(*session) : std::nullopt};
    return tools_.invoke(name, args, ctx);
}

Result<Value> TeaRuntime::invoke_action(const ComponentName& env, const ComponentName& action,
                                        const Value& args, const SessionHandle* session) {
    if (session && !sessions_.is_open(session->session_id)) {
        return make_error(ErrorKind::LifecycleViolation,
                          "session '" + session->session_id + "' is not open");
    }
    InvokeContext ctx{this, session ? std::optional<SessionHandle>(*session) : std::nullopt};
    return envs_.act(env, action, args, ctx);
}

Result<Value> TeaRuntime::invoke_agent(const ComponentName& name, const Value& task,
                                       const SessionHandle* session) {
    if (session && !sessions_.is_open(session->session_id)) {
        return make_error(ErrorKind::LifecycleViolation,
                          "session '" + session->session_id + "' is not open");
    }
    InvokeContext ctx{this, session ? std::optional<SessionHandle>(*session) : std::nullopt};
    return agents_.invoke(name, task, ctx);
}

Status TeaRuntime::register_critic(std::shared_ptr<Critic> critic) {
    if (!critic || critic->id().empty()) {
        return make_error(ErrorKind::ValidationFailed, "critic must carry a non-empty id");
    }
    std::lock_guard<std::mutex> lock(critics_mu_);
    auto [it, inserted] = critics_.emplace(critic->id(), critic);
    if (!inserted) {
        return make_error(ErrorKind::NameConflict,
                          "critic '" + critic->id() + "' is already registered");
    }
    return ok_status();
}

Result<Critic*> TeaRuntime::critic(const std::string& id) const {
    std::lock_guard<std::mutex> lock(critics_mu_);
    auto it = critics_.find(id);
    if (it == critics_.end()) {
        return make_error(ErrorKind::NotFound, "critic '" + id + "' is not registered");
    }
    return it->second.get();
}

const char* TeaRuntime::manifest_name(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::tool: return "tools.manifest";
        case ComponentKind::environment: return "environments.manifest";
        case ComponentKind::agent: return "agents.manifest";
        case ComponentKind::prompt: return "prompts.manifest";
        case ComponentKind::memory: break;
    }
    return "memory.manifest";
}

std::string TeaRuntime::manifest_path(ComponentKind kind) const {
    return (fs::path(data_dir_) / manifest_name(kind)).string();
}

std::string TeaRuntime::component_manifest(ComponentKind kind) const {
    const ComponentRegistry* registry = nullptr;
    switch (kind) {
        case ComponentKind::tool: registry = &tools_; break;
        case ComponentKind::environment: registry = &envs_; break;
        case ComponentKind::agent: registry = &agents_; break;
        case ComponentKind::prompt: registry = &prompts_; break;
        case ComponentKind::memory: return "";
    }
    auto active = registry->active_versions();
    Value components = Value::object();
    for (const auto& [name, records] : versions_.snapshot(kind)) {
        Value records_v = Value::array();
        for (const auto& rec : records) records_v.push_back(rec.to_value());
        Value entry{{"records", records_v}};
        auto it = active.find(name);
        if (it != active.end()) entry["active"] = it->second.render();
        components[name] = entry;
    }
    return canonical_dump(Value{{"components", components}, {"kind", to_string(kind)}});
}

std::map<std::string, std::string> TeaRuntime::export_manifests() const {
    std::map<std::string, std::string> out;
    for (ComponentKind kind : {ComponentKind::tool, ComponentKind::environment,
                               ComponentKind::agent, ComponentKind::prompt}) {
        out[manifest_name(kind)] = component_manifest(kind);
    }
    {
        Value edges = Value::array();
        for (const auto& e : agents_.all_relations()) edges.push_back(e.to_value());
        out["relations.manifest"] = canonical_dump(Value{{"edges", edges}});
    }
    {
        Value records = Value::array();
        for (const auto& r : transformer_->records()) records.push_back(r.to_value());
        out["transforms.manifest"] = canonical_dump(Value{{"records", records}});
    }
    {
        Value runs = Value::array();
        for (const auto& r : evolution_.runs()) runs.push_back(r.to_value());
        out["evolution.manifest"] = canonical_dump(Value{{"runs", runs}});
    }
    return out;
}

Status TeaRuntime::save_all() const {
    if (auto st = ensure_dir(data_dir_); !st.ok()) return st;
    for (const auto& [name, bytes] : export_manifests()) {
        std::string path = (fs::path(data_dir_) / name).string();
        FileLock lock(path);
        if (auto st = atomic_write_file(path, bytes); !st.ok()) return st;
    }
    auto traces_dir = fs::path(data_dir_) / "traces";
    for (const auto& sid : tracer_.session_ids()) {
        if (auto st = tracer_.save_session(sid, (traces_dir / (sid + ".log")).string());
            !st.ok()) {
            return st;
        }
    }
    return ok_status();
}

Status TeaRuntime::save_kind(ComponentKind kind, const std::string& path) const {
    std::string real_path = path.empty() ? manifest_path(kind) : path;
    if (path.empty()) {
        if (auto st = ensure_dir(data_dir_); !st.ok()) return st;
    }
    FileLock lock(real_path);
    return atomic_write_file(real_path, component_manifest(kind));
}

Status TeaRuntime::load_component_manifest(ComponentKind kind, const std::string& bytes) {
    auto parsed = parse_value(bytes);
    if (!parsed.ok()) {
        return make_error(ErrorKind::PersistenceError,
                          std::string("corrupt manifest for kind ") + to_string(kind));
    }
    const Value& components = parsed.value().value("components", Value::object());
    Result<ComponentRegistry*> registry = registry_for(kind);
    if (!registry.ok()) return registry.error();
    for (auto it = components.begin(); it != components.end(); ++it) {
        const Value& entry = it.value();
        for (const auto& rec_v : entry.value("records", Value::array())) {
            auto rec = VersionRecord::from_value(rec_v);
            if (!rec.ok()) return rec.error();
            if (auto st = versions_.insert_record(std::move(rec.value())); !st.ok()) return st;
        }
        if (entry.contains("active")) {
            auto ver = VersionString::parse(entry["active"].get<std::string>());
            if (!ver.ok()) return ver.error();
            auto cfg = versions_.lookup(it.key(), kind, ver.value());
            if (!cfg.ok()) return cfg.error();
            if (auto st = registry.value()->adopt_active(cfg.value()); !st.ok()) return st;
        }
    }
    return ok_status();
}

Status TeaRuntime::load_kind(ComponentKind kind, const std::string& path) {
    std::string real_path = path.empty() ? manifest_path(kind) : path;
    auto bytes = read_file(real_path);
    if (!bytes.ok()) return bytes.error();
    return load_component_manifest(kind, bytes.value());
}

Status TeaRuntime::load_all() {
    for (ComponentKind kind : {ComponentKind::tool, ComponentKind::environment,
                               ComponentKind::agent, ComponentKind::prompt}) {
        std::string path = manifest_path(kind);
        if (!file_exists(path)) continue;
        if (auto st = load_kind(kind); !st.ok()) return st;
    }
    std::string relations_path = (fs::path(data_dir_) / "relations.manifest").string();
    if (file_exists(relations_path)) {
        auto bytes = read_file(relations_path);
        if (!bytes.ok()) return bytes.error();
        auto parsed = parse_value(bytes.value());
        if (!parsed.ok()) {
            return make_error(ErrorKind::PersistenceError, "corrupt relations manifest");
        }
        for (const auto& edge_v : parsed.value().value("edges", Value::array())) {
            auto edge = RelationEdge::from_value(edge_v);
            if (!edge.ok()) return edge.error();
            if (auto st = agents_.adopt_relation(edge.value()); !st.ok()) return st;
        }
    }
    std::string transforms_path = (fs::path(data_dir_) / "transforms.manifest").string();
    if (file_exists(transforms_path)) {
        auto bytes = read_file(transforms_path);
        if (!bytes.ok()) return bytes.error();
        auto parsed = parse_value(bytes.value());
        if (!parsed.ok()) {
            return make_error(ErrorKind::PersistenceError, "corrupt transforms manifest");
        }
        for (const auto& rec_v : parsed.value().value("records", Value::array())) {
            auto rec = TransformRecord::from_value(rec_v);
            if (!rec.ok()) return rec.error();
            transformer_->adopt_record(std::move(rec.value()));
        }
    }
    std::string evolution_path = (fs::path(data_dir_) / "evolution.manifest").string();
    if (file_exists(evolution_path)) {
        auto bytes = read_file(evolution_path);
        if (!bytes.ok()) return bytes.error();
        auto parsed = parse_value(bytes.value());
        if (!parsed.ok()) {
            return make_error(ErrorKind::PersistenceError, "corrupt evolution manifest");
        }
        for (const auto& run_v : parsed.value().value("runs", Value::array())) {
            auto run = EvolutionRun::from_value(run_v);
            if (!run.ok()) return run.error();
            evolution_.adopt_run(std::move(run.value()));
        }
    }
    auto traces_dir = fs::path(data_dir_) / "traces";
    std::error_code ec;
    if (fs::is_directory(traces_dir, ec)) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(traces_dir, ec)) {
            if (entry.path().extension() == ".log") files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            if (auto st = tracer_.load(file); !st.ok()) return st;
        }
    }
    return ok_status();
}

}  // namespace tea
