#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>

#include "tea/behavior.hpp"
#include "tea/registry.hpp"
#include "tea/tracer.hpp"

namespace tea {

enum class RelationKind { hierarchical, cooperative, competitive };

const char* to_string(RelationKind kind);
bool relation_kind_from_string(const std::string& text, RelationKind& out);

struct RelationEdge {
    ComponentName from;
    ComponentName to;
    RelationKind kind = RelationKind::cooperative;

    auto operator<=>(const RelationEdge&) const = default;

    Value to_value() const;
    static Result<RelationEdge> from_value(const Value& v);
};

struct AgentSpec {
    Descriptor descriptor;
    AgentPolicy policy;            // optional; metadata behavior_id resolves otherwise
    bool reentrant = false;        // non-reentrant agents serialize their invocations
    std::string source;
    std::vector<ParamDecl> task_params;  // representation shape; default: one mapping "task"
    bool open_task = false;
};

// Agent registry plus the relationship store. Hierarchical edges always
// form a forest (no cycles, at most one parent per node); cooperative and
// competitive edges are descriptive metadata with no kernel semantics.
class AgentContextManager : public ComponentRegistry {
public:
    AgentContextManager(VersionManager& versions, VectorIndex* index, Tracer* tracer, Clock& clock,
                        BehaviorResolver* resolver);

    Result<ComponentConfig> register_agent(const AgentSpec& spec);
    Result<ComponentConfig> update_agent(const ComponentName& name, const AgentSpec& spec,
                                         BumpLevel level = BumpLevel::patch);

    Result<Value> invoke(const ComponentName& name, const Value& task, InvokeContext& ctx);

    // Idempotent for identical edges; both endpoints must be registered.
    Status add_relation(const RelationEdge& edge);
    std::vector<RelationEdge> relations(const ComponentName& name,
                                        std::optional<RelationKind> kind = std::nullopt) const;
    std::vector<RelationEdge> all_relations() const;
    Status adopt_relation(const RelationEdge& edge);  // manifest load

    bool is_dormant(const ComponentName& name) const;

protected:
    void activate_instance(const ComponentConfig& cfg) override;
    void activate_copy(const ComponentName& source, const ComponentConfig& cfg) override;
    void deactivate_instance(const ComponentName& name) override;
    void on_unregister(const ComponentName& name) override;
    std::string schema_summary(const ComponentConfig& cfg) const override;

private:
    struct LiveAgent {
        std::mutex serial_mu;
        AgentPolicy policy;
        bool reentrant = false;
    };

    Result<ComponentConfig> build_config(const AgentSpec& spec) const;

    Tracer* tracer_;
    BehaviorResolver* resolver_;
    std::optional<AgentPolicyInfo> pending_;
    std::map<ComponentName, std::shared_ptr<LiveAgent>> policies_;
    std::set<RelationEdge> edges_;  // guarded by the registry lock
};

}  // namespace tea
