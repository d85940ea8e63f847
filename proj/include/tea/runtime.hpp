#pragma once

#include <memory>

#include "tea/agent_manager.hpp"
#include "tea/builtins.hpp"
#include "tea/codec.hpp"
#include "tea/env_manager.hpp"
#include "tea/evolution.hpp"
#include "tea/memory_manager.hpp"
#include "tea/model_manager.hpp"
#include "tea/prompt_manager.hpp"
#include "tea/tool_manager.hpp"
#include "tea/transform.hpp"

namespace tea {

// Tries each resolver in order; first hit wins.
class CompositeResolver : public BehaviorResolver {
public:
    void add(BehaviorResolver* resolver) { chain_.push_back(resolver); }

    std::optional<ToolBehavior> resolve_tool(const ComponentConfig& cfg) override;
    std::optional<AgentPolicyInfo> resolve_agent(const ComponentConfig& cfg) override;
    std::optional<EnvFactory> resolve_env(const ComponentConfig& cfg) override;
    std::optional<StepPolicy> resolve_step_policy(const std::string& policy_id) override;

private:
    std::vector<BehaviorResolver*> chain_;
};

struct RuntimeOptions {
    std::string data_dir;           // empty: $TEA_DATA_DIR, else "tea-data"
    std::shared_ptr<Clock> clock;   // default: SystemClock
    IdGen ids;                      // default: 128-bit random hex
    int embed_dim = 64;
};

// Composition root: one process hosts the three protocol registries, the
// basic managers, the transformer, and the evolution engine, all sharing
// one version store and retrieval index.
class TeaRuntime {
public:
    explicit TeaRuntime(RuntimeOptions opts = {});

    Clock& clock() { return *clock_; }
    SessionRegistry& sessions() { return sessions_; }
    VersionManager& versions() { return versions_; }
    VectorIndex& index() { return index_; }
    MemoryManager& memory() { return memory_; }
    Tracer& tracer() { return tracer_; }
    ToolContextManager& tools() { return tools_; }
    EnvironmentContextManager& envs() { return envs_; }
    AgentContextManager& agents() { return agents_; }
    PromptManager& prompts() { return prompts_; }
    ModelManager& models() { return models_; }
    Transformer& transforms() { return *transformer_; }
    EvolutionEngine& evolution() { return evolution_; }
    BehaviorResolver& resolver() { return resolver_; }
    const std::string& data_dir() const { return data_dir_; }

    Result<ComponentRegistry*> registry_for(ComponentKind kind);

    // Session-aware invocation facade: validates the session up front,
    // wires the delegation context, and lets the managers emit traces.
    ToolResponse invoke_tool(const ComponentName& name, const Value& args,
                             const SessionHandle* session = nullptr);
    Result<Value> invoke_action(const ComponentName& env, const ComponentName& action,
                                const Value& args, const SessionHandle* session = nullptr);
    Result<Value> invoke_agent(const ComponentName& name, const Value& task,
                               const SessionHandle* session = nullptr);
    Result<Value> env_state(const ComponentName& name) { return envs_.state(name); }

    SessionHandle session_open(const std::string& agent_name, const std::string& task_id) {
        return sessions_.open(agent_name, task_id);
    }
    Status session_close(const std::string& session_id) { return sessions_.close(session_id); }

    // Critics addressable over the wire.
    Status register_critic(std::shared_ptr<Critic> critic);
    Result<Critic*> critic(const std::string& id) const;

    // Canonical manifests: filename -> bytes. Deterministic given state.
    std::map<std::string, std::string> export_manifests() const;
    Status save_all() const;
    Status load_all();
    Status save_kind(ComponentKind kind, const std::string& path = "") const;
    Status load_kind(ComponentKind kind, const std::string& path = "");
    static const char* manifest_name(ComponentKind kind);
    std::string manifest_path(ComponentKind kind) const;

private:
    std::string component_manifest(ComponentKind kind) const;
    Status load_component_manifest(ComponentKind kind, const std::string& bytes);

    std::string data_dir_;
    std::shared_ptr<Clock> clock_;
    CompositeResolver resolver_;
    builtins::BuiltinResolver builtin_resolver_;
    SessionRegistry sessions_;
    VersionManager versions_;
    VectorIndex index_;
    MemoryManager memory_;
    Tracer tracer_;
    ToolContextManager tools_;
    EnvironmentContextManager envs_;
    AgentContextManager agents_;
    PromptManager prompts_;
    ModelManager models_;
    std::unique_ptr<Transformer> transformer_;
    EvolutionEngine evolution_;
    mutable std::mutex critics_mu_;
    std::map<std::string, std::shared_ptr<Critic>> critics_;
};

}  // namespace tea
