#pragma once

#include <cstdint>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tea/clock.hpp"
#include "tea/types.hpp"

namespace tea {

// Lifecycle moves one way: active -> deprecated -> archived (active may skip
// straight to archived). Deprecated versions still resolve through latest();
// archived ones do not.
enum class LifecycleState { active, deprecated, archived };

const char* to_string(LifecycleState state);
bool lifecycle_state_from_string(const std::string& text, LifecycleState& out);
bool lifecycle_transition_legal(LifecycleState from, LifecycleState to);

struct VersionRecord {
    ComponentName name;
    ComponentKind kind = ComponentKind::tool;
    VersionString version;
    LifecycleState state = LifecycleState::active;
    std::string description;
    std::int64_t created_at = 0;
    ComponentConfig config;

    Value to_value() const;
    static Result<VersionRecord> from_value(const Value& v);
};

// Unified version history for every component kind. All operations are
// atomic with respect to one another; (name, kind, version) is unique.
class VersionManager {
public:
    explicit VersionManager(Clock& clock) : clock_(clock) {}

    Result<VersionRecord> record(const ComponentConfig& cfg, const std::string& description);

    // Ascending by version; empty for unknown names.
    std::vector<VersionRecord> history(const ComponentName& name, ComponentKind kind) const;

    // Maximal-version record whose state is not archived.
    Result<VersionRecord> latest(const ComponentName& name, ComponentKind kind) const;

    Result<VersionRecord> set_lifecycle(const ComponentName& name, ComponentKind kind,
                                        const VersionString& version, LifecycleState new_state);

    Result<ComponentConfig> lookup(const ComponentName& name, ComponentKind kind,
                                   const VersionString& version) const;

    // Highest version ever recorded (archived included); bump base for
    // updates and restores.
    Result<VersionString> max_version(const ComponentName& name, ComponentKind kind) const;

    bool has_history(const ComponentName& name, ComponentKind kind) const;
    void erase(const ComponentName& name, ComponentKind kind);

    // Manifest support: records adopted verbatim (timestamps preserved).
    Status insert_record(VersionRecord rec);
    std::map<ComponentName, std::vector<VersionRecord>> snapshot(ComponentKind kind) const;

private:
    using Key = std::pair<ComponentKind, ComponentName>;

    Clock& clock_;
    mutable std::shared_mutex mu_;
    std::map<Key, std::vector<VersionRecord>> store_;  // insertion order per key
};

}  // namespace tea
