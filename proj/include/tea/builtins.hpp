#pragma once

#include "tea/agent_manager.hpp"
#include "tea/behavior.hpp"
#include "tea/env_manager.hpp"
#include "tea/tool_manager.hpp"

namespace tea::builtins {

// Deterministic fixtures shipped with the kernel. Tool behaviors and agent
// policies resolve by the behavior_id stored in descriptor metadata, so
// configs persisted to manifests come back live after a load.

ToolBehavior add_behavior();
ToolBehavior echo_behavior();
ToolBehavior concat_behavior();
ToolBehavior fail_behavior();

ToolSpec add_tool_spec();
ToolSpec echo_tool_spec();
ToolSpec concat_tool_spec();

// counter: increment/reset over a single integer.
EnvBlueprint counter_env(const std::string& name = "counter");
// kvstore: put/get/del over a text map.
EnvBlueprint kvstore_env(const std::string& name = "kvstore");
// scripted_web: fixed page graph with navigate/click/read.
EnvBlueprint scripted_web_env(const std::string& name = "scripted_web");

AgentSpec echo_agent_spec(const std::string& name = "echo");

// Blueprint lookup for wire-side environment registration: the action set
// travels with the factory.
std::optional<EnvBlueprint> env_blueprint_for(const std::string& behavior_id,
                                              const std::string& name);

StepPolicy always_increment();
StepPolicy greedy_first_action();

// Resolves every "builtin.*" behavior id above.
class BuiltinResolver : public BehaviorResolver {
public:
    std::optional<ToolBehavior> resolve_tool(const ComponentConfig& cfg) override;
    std::optional<AgentPolicyInfo> resolve_agent(const ComponentConfig& cfg) override;
    std::optional<EnvFactory> resolve_env(const ComponentConfig& cfg) override;
    std::optional<StepPolicy> resolve_step_policy(const std::string& policy_id) override;
};

}  // namespace tea::builtins
