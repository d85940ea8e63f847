#pragma once

#include <mutex>
#include <optional>

#include "tea/agent_manager.hpp"
#include "tea/env_manager.hpp"
#include "tea/tool_manager.hpp"

namespace tea {

enum class TransformKind { A2T, T2A, E2T, T2E, A2E, E2A };

const char* to_string(TransformKind kind);
bool transform_kind_from_string(const std::string& text, TransformKind& out);
ComponentKind transform_source_kind(TransformKind kind);
ComponentKind transform_target_kind(TransformKind kind);

// A set of tools sharing contextual state, typically lifted from one
// environment's action space.
struct Toolkit {
    ComponentName source;
    std::vector<ComponentName> tools;
    std::optional<ComponentName> shared_state_ref;

    Value to_value() const;
    static Result<Toolkit> from_value(const Value& v);
};

struct TransformRecord {
    TransformKind kind = TransformKind::A2T;
    ComponentName input;
    std::vector<ComponentName> outputs;
    std::int64_t created_at = 0;

    Value to_value() const;
    static Result<TransformRecord> from_value(const Value& v);
};

struct CheckResult {
    bool ok = true;
    std::vector<std::string> failures;
};

// The six typed transformations. Derived components are real registry
// entries versioned independently, carrying derived_from/transform metadata
// and a behavior that delegates to the live source at invocation time.
// Unregistering a source does not cascade; the derived component then fails
// with NotFound when invoked.
class Transformer : public BehaviorResolver {
public:
    Transformer(ToolContextManager& tools, EnvironmentContextManager& envs,
                AgentContextManager& agents, Clock& clock, BehaviorResolver* policies);

    // agent -> tool `agent.<name>`: invoking the tool with task T returns
    // exactly invoke_agent(name, T).
    Result<ComponentConfig> a2t(const ComponentName& agent);

    // environment -> toolkit: one tool `env.<env>.<action>` per action, all
    // delegating to the same live instance.
    Result<Toolkit> e2t(const ComponentName& env);

    // toolkit -> environment: tool short names become actions; the state
    // query reports per-action invocation counters plus the shared state.
    Result<ComponentConfig> t2e(const Toolkit& kit, const ComponentName& name);

    // tool -> agent `tool.<name>`: task {args: A} maps to invoke(tool, A).
    Result<ComponentConfig> t2a(const ComponentName& tool);

    // agent -> environment `agent.<name>.env` with a single `interact`
    // action; state reports the interaction count and last output.
    Result<ComponentConfig> a2e(const ComponentName& agent);

    // environment -> agent `env.<name>.agent`: one invocation runs one
    // policy step (read state, choose action, execute, report).
    Result<ComponentConfig> e2a(const ComponentName& env, const std::string& policy_id);

    // Interface consistency: outputs registered in the target registry with
    // schemas derivable from the input under the transformation's map.
    CheckResult check(const TransformRecord& record) const;

    // Composition is accepted iff the codomain kind of the first record
    // matches the domain kind of the second and both records check.
    CheckResult check_composition(const TransformRecord& first,
                                  const TransformRecord& second) const;

    std::vector<TransformRecord> records() const;
    void adopt_record(TransformRecord record);

    // BehaviorResolver: rebuilds delegation behaviors from "transform:*"
    // behavior ids after a manifest load; other ids fall through.
    std::optional<ToolBehavior> resolve_tool(const ComponentConfig& cfg) override;
    std::optional<AgentPolicyInfo> resolve_agent(const ComponentConfig& cfg) override;
    std::optional<EnvFactory> resolve_env(const ComponentConfig& cfg) override;
    std::optional<StepPolicy> resolve_step_policy(const std::string& policy_id) override;

private:
    ToolBehavior make_a2t_behavior(const ComponentName& agent);
    ToolBehavior make_e2t_behavior(const ComponentName& env, const ComponentName& action);
    AgentPolicy make_t2a_policy(const ComponentName& tool);
    AgentPolicy make_e2a_policy(const ComponentName& env, StepPolicy step);
    EnvFactory make_t2e_factory(const ComponentConfig& cfg);
    EnvFactory make_a2e_factory(const ComponentName& agent);

    void push_record(TransformKind kind, const ComponentName& input,
                     std::vector<ComponentName> outputs);

    ToolContextManager& tools_;
    EnvironmentContextManager& envs_;
    AgentContextManager& agents_;
    Clock& clock_;
    BehaviorResolver* policies_;

    mutable std::mutex records_mu_;
    std::vector<TransformRecord> records_;
};

// Schema maps shared between the operators and check(): the parameter shape
// a derived component must expose for a given source.
std::vector<ParamDecl> t2a_task_params(const ComponentName& tool);

}  // namespace tea
