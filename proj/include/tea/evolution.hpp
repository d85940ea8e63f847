#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "tea/clock.hpp"
#include "tea/registry.hpp"
#include "tea/variable.hpp"

namespace tea {

// Proposes candidate content for a variable and scores candidates against
// the evaluation context. Textgrad-style and reflection-style loops differ
// only in how a critic produces proposals; the gate below is shared.
class Critic {
public:
    virtual ~Critic() = default;
    virtual std::string id() const = 0;
    virtual Result<std::string> propose(const Variable& var, const Value& feedback) = 0;
    virtual Result<double> score(const std::string& content, const Value& context) = 0;
};

class ScriptedCritic final : public Critic {
public:
    using ProposeFn = std::function<Result<std::string>(const Variable&, const Value&)>;
    using ScoreFn = std::function<Result<double>(const std::string&, const Value&)>;

    ScriptedCritic(std::string id, ProposeFn propose, ScoreFn score)
        : id_(std::move(id)), propose_(std::move(propose)), score_(std::move(score)) {}

    std::string id() const override { return id_; }
    Result<std::string> propose(const Variable& var, const Value& feedback) override {
        return propose_(var, feedback);
    }
    Result<double> score(const std::string& content, const Value& context) override {
        return score_(content, context);
    }

private:
    std::string id_;
    ProposeFn propose_;
    ScoreFn score_;
};

struct LineageEntry {
    int iteration = 0;
    double score = 0.0;
    bool accepted = false;
};

struct EvolutionOutcome {
    bool accepted = false;
    int iterations = 0;
    double initial_score = 0.0;
    double final_score = 0.0;  // score of the content left active
    std::optional<VersionString> committed_version;
    std::vector<LineageEntry> lineage;

    Value to_value() const;
    static Result<EvolutionOutcome> from_value(const Value& v);
};

struct EvolutionRun {
    ComponentKind kind = ComponentKind::tool;
    ComponentName name;
    std::string slot;
    std::string critic_id;
    std::int64_t at = 0;
    EvolutionOutcome outcome;

    Value to_value() const;
    static Result<EvolutionRun> from_value(const Value& v);
};

// Critic-driven propose/score loop over one component variable. The gate is
// strict scalar improvement: the first candidate scoring above the baseline
// commits as a minor version; otherwise the registries stay untouched.
class EvolutionEngine {
public:
    explicit EvolutionEngine(Clock& clock) : clock_(clock) {}

    void attach(ComponentKind kind, ComponentRegistry* registry);

    Result<std::vector<Variable>> vars(ComponentKind kind, const ComponentName& name) const;
    Result<std::vector<ComponentConfig>> set_vars(const std::vector<Variable>& variables);

    Result<EvolutionOutcome> evolve(ComponentKind kind, const ComponentName& name, Critic& critic,
                                    const Value& feedback, int max_iter,
                                    const std::string& slot = "");

    Result<ComponentConfig> rollback(ComponentKind kind, const ComponentName& name,
                                     const VersionString& version);

    std::vector<EvolutionRun> runs() const;
    void adopt_run(EvolutionRun run);

private:
    Result<ComponentRegistry*> registry_for(ComponentKind kind) const;

    Clock& clock_;
    std::map<ComponentKind, ComponentRegistry*> registries_;
    mutable std::mutex runs_mu_;
    std::vector<EvolutionRun> runs_;
    std::mutex gate_mu_;
    std::set<std::pair<ComponentKind, ComponentName>> in_flight_;
};

}  // namespace tea
