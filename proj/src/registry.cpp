#include "tea/registry.hpp"

#include <mutex>

namespace tea {

Value Variable::to_value() const {
    return Value{{"content", content},
                 {"kind", to_string(kind)},
                 {"name", name},
                 {"slot", slot},
                 {"version", version.render()}};
}

Result<Variable> Variable::from_value(const Value& v) {
    if (!v.is_object()) return make_error(ErrorKind::ValidationFailed, "variable must be a mapping");
    for (const char* field : {"content", "kind", "name", "slot", "version"}) {
        if (!v.contains(field) || !v[field].is_string()) {
            return make_error(ErrorKind::ValidationFailed,
                              std::string("variable missing text field '") + field + "'");
        }
    }
    Variable var;
    var.content = v["content"].get<std::string>();
    if (!component_kind_from_string(v["kind"].get<std::string>(), var.kind)) {
        return make_error(ErrorKind::ValidationFailed, "unknown variable kind");
    }
    var.name = v["name"].get<std::string>();
    var.slot = v["slot"].get<std::string>();
    auto ver = VersionString::parse(v["version"].get<std::string>());
    if (!ver.ok()) return ver.error();
    var.version = ver.value();
    return var;
}

ComponentRegistry::ComponentRegistry(ComponentKind kind, VersionManager& versions,
                                     VectorIndex* index, Clock& clock)
    : kind_(kind), versions_(versions), index_(index), clock_(clock) {}

std::vector<ComponentName> ComponentRegistry::list() const {
    std::shared_lock lock(mu_);
    std::vector<ComponentName> out;
    for (const auto& [name, cfg] : active_) out.push_back(name);
    return out;
}

bool ComponentRegistry::is_active(const ComponentName& name) const {
    std::shared_lock lock(mu_);
    return active_.count(name) > 0;
}

Result<ComponentConfig> ComponentRegistry::active_config(const ComponentName& name) const {
    std::shared_lock lock(mu_);
    auto it = active_.find(name);
    if (it == active_.end()) {
        return make_error(ErrorKind::NotFound,
                          std::string(to_string(kind_)) + " '" + name + "' is not registered");
    }
    return it->second;
}

std::map<ComponentName, VersionString> ComponentRegistry::active_versions() const {
    std::shared_lock lock(mu_);
    std::map<ComponentName, VersionString> out;
    for (const auto& [name, cfg] : active_) out[name] = cfg.version;
    return out;
}

std::size_t ComponentRegistry::size() const {
    std::shared_lock lock(mu_);
    return active_.size();
}

ContractDocument ComponentRegistry::contract() const {
    std::shared_lock lock(mu_);
    ContractDocument doc;
    doc.kind = kind_;
    for (const auto& [name, cfg] : active_) {
        doc.entries.push_back({name, cfg.version, contract_text(cfg), schema_summary(cfg)});
    }
    doc.generated_at = clock_.now_micros();
    return doc;
}

Result<ComponentConfig> ComponentRegistry::commit_new_locked(ComponentConfig cfg,
                                                             const std::string& why) {
    auto valid = validate_descriptor(cfg.descriptor);
    if (!valid.ok) {
        return make_error(ErrorKind::ValidationFailed, valid.joined());
    }
    cfg.kind = kind_;
    cfg.version = initial_version();
    const auto& name = cfg.descriptor.name;
    if (active_.count(name)) {
        return make_error(ErrorKind::NameConflict,
                          std::string(to_string(kind_)) + " '" + name + "' is already registered");
    }
    auto rec = versions_.record(cfg, why);
    if (!rec.ok()) return rec.error();
    activate_instance(cfg);
    active_[name] = cfg;
    index_upsert_locked(cfg);
    return cfg;
}

Result<ComponentConfig> ComponentRegistry::commit_next_locked(ComponentConfig cfg, BumpLevel level,
                                                              const std::string& why) {
    const auto& name = cfg.descriptor.name;
    auto base = versions_.max_version(name, kind_);
    if (!base.ok()) return base.error();
    cfg.kind = kind_;
    cfg.version = bump(base.value(), level);
    auto rec = versions_.record(cfg, why);
    if (!rec.ok()) return rec.error();
    activate_instance(cfg);
    active_[name] = cfg;
    index_upsert_locked(cfg);
    return cfg;
}

Result<ComponentConfig> ComponentRegistry::copy_component(const ComponentName& name,
                                                          const ComponentName& new_name) {
    std::unique_lock lock(mu_);
    auto it = active_.find(name);
    if (it == active_.end()) {
        return make_error(ErrorKind::NotFound,
                          std::string(to_string(kind_)) + " '" + name + "' is not registered");
    }
    auto violations = name_violations(new_name);
    if (!violations.empty()) {
        Validation v{false, violations};
        return make_error(ErrorKind::ValidationFailed, v.joined());
    }
    if (active_.count(new_name) || versions_.has_history(new_name, kind_)) {
        return make_error(ErrorKind::NameConflict, std::string(to_string(kind_)) + " '" +
                                                       new_name + "' already exists");
    }
    ComponentConfig cfg = it->second;
    cfg.descriptor.name = new_name;
    cfg.version = initial_version();
    cfg.representations = resynthesize(cfg);
    auto rec = versions_.record(cfg, "copied from '" + name + "'");
    if (!rec.ok()) return rec.error();
    activate_copy(name, cfg);
    active_[new_name] = cfg;
    index_upsert_locked(cfg);
    return cfg;
}

Status ComponentRegistry::unregister(const ComponentName& name) {
    std::unique_lock lock(mu_);
    auto it = active_.find(name);
    if (it == active_.end()) {
        return make_error(ErrorKind::NotFound,
                          std::string(to_string(kind_)) + " '" + name + "' is not registered");
    }
    deactivate_instance(name);
    active_.erase(it);
    versions_.erase(name, kind_);
    index_remove_locked(name);
    on_unregister(name);
    return ok_status();
}

Result<ComponentConfig> ComponentRegistry::restore(const ComponentName& name,
                                                   const VersionString& version) {
    std::unique_lock lock(mu_);
    auto stored = versions_.lookup(name, kind_, version);
    if (!stored.ok()) return stored.error();
    ComponentConfig cfg = std::move(stored.value());
    return commit_next_locked(std::move(cfg), BumpLevel::patch,
                              "restored from " + version.render());
}

Result<VersionRecord> ComponentRegistry::set_lifecycle(const ComponentName& name,
                                                       const VersionString& version,
                                                       LifecycleState state) {
    std::unique_lock lock(mu_);
    auto rec = versions_.set_lifecycle(name, kind_, version, state);
    if (!rec.ok()) return rec;
    auto latest = versions_.latest(name, kind_);
    auto it = active_.find(name);
    if (!latest.ok()) {
        // No resolvable version remains; retire from the active registry
        // but keep history.
        if (it != active_.end()) {
            deactivate_instance(name);
            active_.erase(it);
            index_remove_locked(name);
        }
    } else if (it != active_.end() && it->second.version != latest.value().version) {
        it->second = latest.value().config;
        activate_instance(it->second);
        index_upsert_locked(it->second);
    }
    return rec;
}

Result<std::vector<Variable>> ComponentRegistry::extract_vars(const ComponentName& name) const {
    std::shared_lock lock(mu_);
    auto it = active_.find(name);
    if (it == active_.end()) {
        return make_error(ErrorKind::NotFound,
                          std::string(to_string(kind_)) + " '" + name + "' is not registered");
    }
    const ComponentConfig& cfg = it->second;
    if (!cfg.descriptor.evolvable) {
        return make_error(ErrorKind::LifecycleViolation,
                          std::string(to_string(kind_)) + " '" + name + "' is not evolvable");
    }
    std::vector<Variable> out;
    for (const auto& slot : evolvable_slots(cfg)) {
        auto content = slot_content(cfg, slot);
        if (!content.ok()) return content.error();
        out.push_back(Variable{kind_, name, cfg.version, slot, std::move(content.value())});
    }
    return out;
}

Result<ComponentConfig> ComponentRegistry::commit_var(const Variable& var) {
    std::unique_lock lock(mu_);
    auto it = active_.find(var.name);
    if (it == active_.end()) {
        return make_error(ErrorKind::NotFound,
                          std::string(to_string(kind_)) + " '" + var.name + "' is not registered");
    }
    if (!it->second.descriptor.evolvable) {
        return make_error(ErrorKind::LifecycleViolation,
                          std::string(to_string(kind_)) + " '" + var.name + "' is not evolvable");
    }
    ComponentConfig cfg = it->second;
    if (auto st = apply_slot(cfg, var.slot, var.content); !st.ok()) return st.error();
    return commit_next_locked(std::move(cfg), BumpLevel::minor,
                              "evolution commit (" + var.slot + ")");
}

Status ComponentRegistry::adopt_active(const ComponentConfig& cfg) {
    std::unique_lock lock(mu_);
    activate_instance(cfg);
    active_[cfg.descriptor.name] = cfg;
    index_upsert_locked(cfg);
    return ok_status();
}

void ComponentRegistry::activate_copy(const ComponentName&, const ComponentConfig& cfg) {
    activate_instance(cfg);
}

void ComponentRegistry::on_unregister(const ComponentName&) {}

std::string ComponentRegistry::index_text(const ComponentConfig& cfg) const {
    return cfg.descriptor.description;
}

std::string ComponentRegistry::contract_text(const ComponentConfig& cfg) const {
    return cfg.representations.text_description;
}

std::string ComponentRegistry::schema_summary(const ComponentConfig& cfg) const {
    if (!cfg.extensions.contains("params")) return "";
    auto params = params_from_value(cfg.extensions["params"]);
    if (!params.ok() || params.value().empty()) return "params: none";
    std::string out = "params: ";
    bool first = true;
    for (const auto& p : params.value()) {
        if (!first) out += ", ";
        out += p.name + ":" + to_string(p.type);
        first = false;
    }
    return out;
}

Representations ComponentRegistry::resynthesize(const ComponentConfig& cfg) const {
    std::vector<ParamDecl> params;
    if (cfg.extensions.contains("params")) {
        auto parsed = params_from_value(cfg.extensions["params"]);
        if (parsed.ok()) params = std::move(parsed.value());
    }
    bool open = cfg.extensions.value("open_args", false);
    return synthesize_representations(cfg.descriptor.name, cfg.descriptor.description, params,
                                      open);
}

std::vector<std::string> ComponentRegistry::evolvable_slots(const ComponentConfig&) const {
    return {"source"};
}

Result<std::string> ComponentRegistry::slot_content(const ComponentConfig& cfg,
                                                    const std::string& slot) const {
    if (slot == "source") return cfg.source;
    return make_error(ErrorKind::ValidationFailed,
                      "unknown variable slot '" + slot + "' for kind " + to_string(kind_));
}

Status ComponentRegistry::apply_slot(ComponentConfig& cfg, const std::string& slot,
                                     const std::string& content) const {
    if (slot == "source") {
        cfg.source = content;
        return ok_status();
    }
    return make_error(ErrorKind::ValidationFailed,
                      "unknown variable slot '" + slot + "' for kind " + to_string(kind_));
}

void ComponentRegistry::index_upsert_locked(const ComponentConfig& cfg) {
    if (!index_) return;
    std::string category;
    auto it = cfg.descriptor.metadata.find("category");
    if (it != cfg.descriptor.metadata.end()) category = it->second;
    index_->upsert({kind_, cfg.descriptor.name}, index_text(cfg), category);
}

void ComponentRegistry::index_remove_locked(const ComponentName& name) {
    if (index_) index_->remove({kind_, name});
}

}  // namespace tea
