#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tea/clock.hpp"
#include "tea/retrieval.hpp"
#include "tea/types.hpp"
#include "tea/variable.hpp"
#include "tea/version_manager.hpp"

namespace tea {

// Shared mechanics of the tool/environment/agent/prompt registries: an
// active map coupled to the unified version manager, retrieval-index
// bookkeeping fired inside each mutation, lifecycle resync, copy/restore
// semantics, contract generation, and the evolution variable surface.
//
// Invariant maintained across every mutation: for each active name, the
// active version equals the version manager's latest() for that name.
class ComponentRegistry {
public:
    ComponentRegistry(ComponentKind kind, VersionManager& versions, VectorIndex* index,
                      Clock& clock);
    virtual ~ComponentRegistry() = default;

    ComponentKind kind() const { return kind_; }

    std::vector<ComponentName> list() const;
    bool is_active(const ComponentName& name) const;
    Result<ComponentConfig> active_config(const ComponentName& name) const;
    std::map<ComponentName, VersionString> active_versions() const;
    std::size_t size() const;

    ContractDocument contract() const;

    Result<ComponentConfig> copy_component(const ComponentName& name,
                                           const ComponentName& new_name);
    Status unregister(const ComponentName& name);
    Result<ComponentConfig> restore(const ComponentName& name, const VersionString& version);

    // Updates the record's state, then resyncs the active entry so it keeps
    // pointing at latest(); archiving the last resolvable version retires
    // the name from the active registry (history preserved).
    Result<VersionRecord> set_lifecycle(const ComponentName& name, const VersionString& version,
                                        LifecycleState state);

    // Evolution surface. Components registered with evolvable=false reject
    // both calls with LifecycleViolation.
    Result<std::vector<Variable>> extract_vars(const ComponentName& name) const;
    Result<ComponentConfig> commit_var(const Variable& var);

    // Manifest load: adopt a config as active without recording history.
    Status adopt_active(const ComponentConfig& cfg);

protected:
    // Register path: descriptor validated, version forced to 1.0.0, history
    // must not survive from an earlier life of the name.
    Result<ComponentConfig> commit_new_locked(ComponentConfig cfg, const std::string& why);

    // Update/evolve path: version bumped from the history maximum.
    Result<ComponentConfig> commit_next_locked(ComponentConfig cfg, BumpLevel level,
                                               const std::string& why);

    // Instance hooks run under the registry's unique lock and never fail:
    // an unresolvable behavior leaves the component dormant.
    virtual void activate_instance(const ComponentConfig& cfg) = 0;
    virtual void deactivate_instance(const ComponentName& name) = 0;
    virtual void activate_copy(const ComponentName& source, const ComponentConfig& cfg);
    virtual void on_unregister(const ComponentName& name);

    virtual std::string index_text(const ComponentConfig& cfg) const;
    virtual std::string contract_text(const ComponentConfig& cfg) const;
    virtual std::string schema_summary(const ComponentConfig& cfg) const;
    virtual Representations resynthesize(const ComponentConfig& cfg) const;

    virtual std::vector<std::string> evolvable_slots(const ComponentConfig& cfg) const;
    virtual Result<std::string> slot_content(const ComponentConfig& cfg,
                                             const std::string& slot) const;
    virtual Status apply_slot(ComponentConfig& cfg, const std::string& slot,
                              const std::string& content) const;

    void index_upsert_locked(const ComponentConfig& cfg);
    void index_remove_locked(const ComponentName& name);

    ComponentKind kind_;
    VersionManager& versions_;
    VectorIndex* index_;
    Clock& clock_;
    mutable std::shared_mutex mu_;
    std::map<ComponentName, ComponentConfig> active_;
};

}  // namespace tea
