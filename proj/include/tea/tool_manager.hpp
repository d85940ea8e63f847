#pragma once

#include <map>
#include <optional>

#include "tea/behavior.hpp"
#include "tea/registry.hpp"
#include "tea/tracer.hpp"

namespace tea {

struct ToolSpec {
    Descriptor descriptor;
    std::vector<ParamDecl> params;
    bool open_args = false;
    ToolBehavior behavior;  // optional; metadata behavior_id resolves it otherwise
    std::string source;
};

struct ToolResponse {
    bool ok = false;
    Value output;
    std::optional<Error> error;
    std::int64_t elapsed_us = 0;
    VersionString tool_version;

    Value to_value() const;
};

// Tool registry with representation synthesis, strict invocation, and the
// shared lifecycle mechanics. Source payloads are opaque text and are never
// executed; behavior comes from the spec's callable or the factory resolver.
class ToolContextManager : public ComponentRegistry {
public:
    ToolContextManager(VersionManager& versions, VectorIndex* index, Tracer* tracer, Clock& clock,
                       BehaviorResolver* resolver);

    Result<ComponentConfig> register_tool(const ToolSpec& spec);
    Result<ComponentConfig> update_tool(const ComponentName& name, const ToolSpec& spec,
                                        BumpLevel level = BumpLevel::patch);

    // Total: every failure comes back inside the response, classified.
    ToolResponse invoke(const ComponentName& name, const Value& args, InvokeContext& ctx);

    static Result<Representations> synthesize(const ToolSpec& spec);

    bool is_dormant(const ComponentName& name) const;

protected:
    void activate_instance(const ComponentConfig& cfg) override;
    void activate_copy(const ComponentName& source, const ComponentConfig& cfg) override;
    void deactivate_instance(const ComponentName& name) override;

private:
    static Result<ComponentConfig> build_config(const ToolSpec& spec);

    Tracer* tracer_;
    BehaviorResolver* resolver_;
    ToolBehavior pending_;  // set under mu_ during register/update
    std::map<ComponentName, ToolBehavior> behaviors_;
};

}  // namespace tea
