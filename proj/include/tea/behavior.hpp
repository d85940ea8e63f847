#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tea/error.hpp"
#include "tea/sessions.hpp"
#include "tea/types.hpp"
#include "tea/value.hpp"

namespace tea {

class TeaRuntime;

// Handed to every behavior invocation. `runtime` grants delegation into the
// protocol managers (how derived components and agent policies reach tools,
// environments, and memory); `session` attributes traces and memory events.
struct InvokeContext {
    TeaRuntime* runtime = nullptr;
    std::optional<SessionHandle> session;
};

// phi: structured arguments -> structured result.
using ToolBehavior = std::function<Result<Value>(const Value& args, InvokeContext& ctx)>;

// Agent policy: (task, context) -> structured result.
using AgentPolicy = std::function<Result<Value>(const Value& task, InvokeContext& ctx)>;

struct AgentPolicyInfo {
    AgentPolicy policy;
    bool reentrant = false;
};

// Live stateful environment. state() must not mutate; step() may.
class EnvInstance {
public:
    virtual ~EnvInstance() = default;
    virtual Value state() = 0;
    virtual Result<Value> step(const std::string& action, const Value& args,
                               InvokeContext& ctx) = 0;
};

using EnvFactory = std::function<std::unique_ptr<EnvInstance>()>;

// One decision step for an environment lifted into an agent: given the
// current state and the declared action names, choose (action, args).
using StepPolicy =
    std::function<Result<std::pair<std::string, Value>>(const Value& state,
                                                        const std::vector<std::string>& actions)>;

// Resolves persisted configs back to live behavior. Components whose
// behavior cannot be resolved stay registered but dormant: they version,
// copy, and persist normally but reject invocation.
class BehaviorResolver {
public:
    virtual ~BehaviorResolver() = default;
    virtual std::optional<ToolBehavior> resolve_tool(const ComponentConfig& cfg) = 0;
    virtual std::optional<AgentPolicyInfo> resolve_agent(const ComponentConfig& cfg) = 0;
    virtual std::optional<EnvFactory> resolve_env(const ComponentConfig& cfg) = 0;
    virtual std::optional<StepPolicy> resolve_step_policy(const std::string& policy_id) = 0;
};

inline std::string behavior_id_of(const ComponentConfig& cfg) {
    auto it = cfg.descriptor.metadata.find("behavior_id");
    return it == cfg.descriptor.metadata.end() ? std::string() : it->second;
}

}  // namespace tea
