#include "tea/version_manager.hpp"

#include <algorithm>
#include <mutex>

namespace tea {

const char* to_string(LifecycleState state) {
    switch (state) {
        case LifecycleState::active: return "active";
        case LifecycleState::deprecated: return "deprecated";
        case LifecycleState::archived: return "archived";
    }
    return "active";
}

bool lifecycle_state_from_string(const std::string& text, LifecycleState& out) {
    if (text == "active") {
        out = LifecycleState::active;
    } else if (text == "deprecated") {
        out = LifecycleState::deprecated;
    } else if (text == "archived") {
        out = LifecycleState::archived;
    } else {
        return false;
    }
    return true;
}

bool lifecycle_transition_legal(LifecycleState from, LifecycleState to) {
    if (from == LifecycleState::active) {
        return to == LifecycleState::deprecated || to == LifecycleState::archived;
    }
    if (from == LifecycleState::deprecated) {
        return to == LifecycleState::archived;
    }
    return false;  // archived is terminal
}

Value VersionRecord::to_value() const {
    return Value{{"config", config.to_value()},
                 {"created_at", created_at},
                 {"description", description},
                 {"kind", to_string(kind)},
                 {"name", name},
                 {"state", to_string(state)},
                 {"version", version.render()}};
}

Result<VersionRecord> VersionRecord::from_value(const Value& v) {
    if (!v.is_object()) return make_error(ErrorKind::ValidationFailed, "record must be a mapping");
    for (const char* field : {"config", "created_at", "kind", "name", "state", "version"}) {
        if (!v.contains(field)) {
            return make_error(ErrorKind::ValidationFailed,
                              std::string("record missing field '") + field + "'");
        }
    }
    VersionRecord rec;
    auto cfg = ComponentConfig::from_value(v["config"]);
    if (!cfg.ok()) return cfg.error();
    rec.config = std::move(cfg.value());
    if (!v["created_at"].is_number_integer()) {
        return make_error(ErrorKind::ValidationFailed, "created_at must be an integer");
    }
    rec.created_at = v["created_at"].get<std::int64_t>();
    rec.description = v.value("description", std::string());
    if (!v["kind"].is_string() ||
        !component_kind_from_string(v["kind"].get<std::string>(), rec.kind)) {
        return make_error(ErrorKind::ValidationFailed, "unknown record kind");
    }
    if (!v["name"].is_string()) {
        return make_error(ErrorKind::ValidationFailed, "record name must be text");
    }
    rec.name = v["name"].get<std::string>();
    if (!v["state"].is_string() ||
        !lifecycle_state_from_string(v["state"].get<std::string>(), rec.state)) {
        return make_error(ErrorKind::ValidationFailed, "unknown lifecycle state");
    }
    auto ver = VersionString::parse(v["version"].get<std::string>());
    if (!ver.ok()) return ver.error();
    rec.version = ver.value();
    return rec;
}

Result<VersionRecord> VersionManager::record(const ComponentConfig& cfg,
                                             const std::string& description) {
    std::unique_lock lock(mu_);
    auto& hist = store_[{cfg.kind, cfg.descriptor.name}];
    for (const auto& rec : hist) {
        if (rec.version == cfg.version) {
            return make_error(ErrorKind::NameConflict,
                              std::string(to_string(cfg.kind)) + " '" + cfg.descriptor.name +
                                  "' already has version " + cfg.version.render());
        }
    }
    VersionRecord rec;
    rec.name = cfg.descriptor.name;
    rec.kind = cfg.kind;
    rec.version = cfg.version;
    rec.state = LifecycleState::active;
    rec.description = description;
    rec.created_at = clock_.now_micros();
    rec.config = cfg;
    hist.push_back(rec);
    return rec;
}

std::vector<VersionRecord> VersionManager::history(const ComponentName& name,
                                                   ComponentKind kind) const {
    std::shared_lock lock(mu_);
    auto it = store_.find({kind, name});
    if (it == store_.end()) return {};
    std::vector<VersionRecord> out = it->second;
    std::sort(out.begin(), out.end(),
              [](const VersionRecord& a, const VersionRecord& b) { return a.version < b.version; });
    return out;
}

Result<VersionRecord> VersionManager::latest(const ComponentName& name, ComponentKind kind) const {
    std::shared_lock lock(mu_);
    auto it = store_.find({kind, name});
    if (it == store_.end()) {
        return make_error(ErrorKind::NotFound,
                          std::string(to_string(kind)) + " '" + name + "' has no versions");
    }
    const VersionRecord* best = nullptr;
    for (const auto& rec : it->second) {
        if (rec.state == LifecycleState::archived) continue;
        if (!best || rec.version > best->version) best = &rec;
    }
    if (!best) {
        return make_error(ErrorKind::NotFound, std::string(to_string(kind)) + " '" + name +
                                                   "' has no non-archived version");
    }
    return *best;
}

Result<VersionRecord> VersionManager::set_lifecycle(const ComponentName& name, ComponentKind kind,
                                                    const VersionString& version,
                                                    LifecycleState new_state) {
    std::unique_lock lock(mu_);
    auto it = store_.find({kind, name});
    if (it != store_.end()) {
        for (auto& rec : it->second) {
            if (rec.version != version) continue;
            if (!lifecycle_transition_legal(rec.state, new_state)) {
                return make_error(ErrorKind::LifecycleViolation,
                                  std::string("illegal lifecycle transition ") +
                                      to_string(rec.state) + " -> " + to_string(new_state));
            }
            rec.state = new_state;
            return rec;
        }
    }
    return make_error(ErrorKind::VersionNotFound, std::string(to_string(kind)) + " '" + name +
                                                      "' has no version " + version.render());
}

Result<ComponentConfig> VersionManager::lookup(const ComponentName& name, ComponentKind kind,
                                               const VersionString& version) const {
    std::shared_lock lock(mu_);
    auto it = store_.find({kind, name});
    if (it != store_.end()) {
        for (const auto& rec : it->second) {
            if (rec.version == version) return rec.config;
        }
    }
    return make_error(ErrorKind::VersionNotFound, std::string(to_string(kind)) + " '" + name +
                                                      "' has no version " + version.render());
}

Result<VersionString> VersionManager::max_version(const ComponentName& name,
                                                  ComponentKind kind) const {
    std::shared_lock lock(mu_);
    auto it = store_.find({kind, name});
    if (it == store_.end() || it->second.empty()) {
        return make_error(ErrorKind::NotFound,
                          std::string(to_string(kind)) + " '" + name + "' has no versions");
    }
    VersionString best = it->second.front().version;
    for (const auto& rec : it->second) {
        if (rec.version > best) best = rec.version;
    }
    return best;
}

bool VersionManager::has_history(const ComponentName& name, ComponentKind kind) const {
    std::shared_lock lock(mu_);
    return store_.count({kind, name}) > 0;
}

void VersionManager::erase(const ComponentName& name, ComponentKind kind) {
    std::unique_lock lock(mu_);
    store_.erase({kind, name});
}

Status VersionManager::insert_record(VersionRecord rec) {
    std::unique_lock lock(mu_);
    auto& hist = store_[{rec.kind, rec.name}];
    for (const auto& existing : hist) {
        if (existing.version == rec.version) {
            return make_error(ErrorKind::NameConflict,
                              "duplicate version record " + rec.version.render());
        }
    }
    hist.push_back(std::move(rec));
    return ok_status();
}

std::map<ComponentName, std::vector<VersionRecord>> VersionManager::snapshot(
    ComponentKind kind) const {
    std::shared_lock lock(mu_);
    std::map<ComponentName, std::vector<VersionRecord>> out;
    for (const auto& [key, hist] : store_) {
        if (key.first == kind) out[key.second] = hist;
    }
    return out;
}

}  // namespace tea
