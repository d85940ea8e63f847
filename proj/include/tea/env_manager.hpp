#pragma once

#include <map>
#include <memory>

#include "tea/behavior.hpp"
#include "tea/registry.hpp"
#include "tea/tracer.hpp"

namespace tea {

// One entry of an environment's action space.
struct ActionDecl {
    ComponentName name;
    std::vector<ParamDecl> params;
    bool open_args = false;
    std::string doc;
    Representations representations;

    Value to_value() const;
    static Result<ActionDecl> from_value(const Value& v);
};

// Registration payload: declared actions plus a factory for the live
// stateful instance. Without a factory (or resolvable behavior_id) the
// environment registers dormant.
struct EnvBlueprint {
    Descriptor descriptor;
    std::vector<ActionDecl> actions;
    EnvFactory make;
    std::string source;
    Value extra_extensions = Value::object();  // merged into config extensions
};

// Environment registry: stateful singletons per registered name with
// discoverable action spaces, state queries, and generated interaction
// rules. State reads run concurrently; actions serialize per instance.
class EnvironmentContextManager : public ComponentRegistry {
public:
    EnvironmentContextManager(VersionManager& versions, VectorIndex* index, Tracer* tracer,
                              Clock& clock, BehaviorResolver* resolver);

    Result<ComponentConfig> register_environment(const EnvBlueprint& blueprint);
    Result<ComponentConfig> update_environment(const ComponentName& name,
                                               const EnvBlueprint& blueprint,
                                               BumpLevel level = BumpLevel::patch);

    Result<Value> state(const ComponentName& name) const;
    Result<Value> act(const ComponentName& name, const ComponentName& action, const Value& args,
                      InvokeContext& ctx);

    Result<std::vector<ActionDecl>> actions_of(const ComponentName& name) const;
    bool is_dormant(const ComponentName& name) const;

    // Deterministic rules text: environment description, every action with
    // its parameter docs, and a state-query note.
    static std::string generate_rules(const Descriptor& descriptor,
                                      const std::vector<ActionDecl>& actions);

    static Result<std::vector<ActionDecl>> actions_from_config(const ComponentConfig& cfg);

protected:
    void activate_instance(const ComponentConfig& cfg) override;
    void activate_copy(const ComponentName& source, const ComponentConfig& cfg) override;
    void deactivate_instance(const ComponentName& name) override;
    std::string contract_text(const ComponentConfig& cfg) const override;
    std::string schema_summary(const ComponentConfig& cfg) const override;

private:
    struct LiveEnv {
        mutable std::shared_mutex state_mu;
        std::unique_ptr<EnvInstance> instance;
    };

    Result<ComponentConfig> build_config(const EnvBlueprint& blueprint) const;

    Tracer* tracer_;
    BehaviorResolver* resolver_;
    EnvFactory pending_;
    std::map<ComponentName, EnvFactory> factories_;
    std::map<ComponentName, std::shared_ptr<LiveEnv>> instances_;
};

}  // namespace tea
