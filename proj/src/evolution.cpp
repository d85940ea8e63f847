#include "tea/evolution.hpp"

namespace tea {

Value EvolutionOutcome::to_value() const {
    Value lineage_v = Value::array();
    for (const auto& entry : lineage) {
        lineage_v.push_back(Value{{"accepted", entry.accepted},
                                  {"iteration", entry.iteration},
                                  {"score", entry.score}});
    }
    Value v{{"accepted", accepted},
            {"final_score", final_score},
            {"initial_score", initial_score},
            {"iterations", iterations},
            {"lineage", lineage_v}};
    if (committed_version) v["committed_version"] = committed_version->render();
    return v;
}

Result<EvolutionOutcome> EvolutionOutcome::from_value(const Value& v) {
    if (!v.is_object()) return make_error(ErrorKind::ValidationFailed, "malformed outcome");
    EvolutionOutcome out;
    out.accepted = v.value("accepted", false);
    out.final_score = v.value("final_score", 0.0);
    out.initial_score = v.value("initial_score", 0.0);
    out.iterations = v.value("iterations", 0);
    if (v.contains("committed_version")) {
        auto ver = VersionString::parse(v["committed_version"].get<std::string>());
        if (!ver.ok()) return ver.error();
        out.committed_version = ver.value();
    }
    for (const auto& entry : v.value("lineage", Value::array())) {
        out.lineage.push_back(LineageEntry{entry.value("iteration", 0), entry.value("score", 0.0),
                                           entry.value("accepted", false)});
    }
    return out;
}

Value EvolutionRun::to_value() const {
    return Value{{"at", at},
                 {"critic", critic_id},
                 {"kind", to_string(kind)},
                 {"name", name},
                 {"outcome", outcome.to_value()},
                 {"slot", slot}};
}

Result<EvolutionRun> EvolutionRun::from_value(const Value& v) {
    if (!v.is_object()) return make_error(ErrorKind::ValidationFailed, "malformed evolution run");
    EvolutionRun run;
    run.at = v.value("at", std::int64_t(0));
    run.critic_id = v.value("critic", std::string());
    if (!v.contains("kind") ||
        !component_kind_from_string(v["kind"].get<std::string>(), run.kind)) {
        return make_error(ErrorKind::ValidationFailed, "unknown run kind");
    }
    run.name = v.value("name", std::string());
    run.slot = v.value("slot", std::string());
    auto outcome = EvolutionOutcome::from_value(v.value("outcome", Value::object()));
    if (!outcome.ok()) return outcome.error();
    run.outcome = std::move(outcome.value());
    return run;
}

void EvolutionEngine::attach(ComponentKind kind, ComponentRegistry* registry) {
    registries_[kind] = registry;
}

Result<ComponentRegistry*> EvolutionEngine::registry_for(ComponentKind kind) const {
    auto it = registries_.find(kind);
    if (it == registries_.end() || !it->second) {
        return make_error(ErrorKind::NotFound, std::string("no registry manages kind '") +
                                                   to_string(kind) + "'");
    }
    return it->second;
}

Result<std::vector<Variable>> EvolutionEngine::vars(ComponentKind kind,
                                                    const ComponentName& name) const {
    auto registry = registry_for(kind);
    if (!registry.ok()) return registry.error();
    return registry.value()->extract_vars(name);
}

Result<std::vector<ComponentConfig>> EvolutionEngine::set_vars(
    const std::vector<Variable>& variables) {
    std::vector<ComponentConfig> out;
    for (const auto& var : variables) {
        auto registry = registry_for(var.kind);
        if (!registry.ok()) return registry.error();
        auto committed = registry.value()->commit_var(var);
        if (!committed.ok()) return committed.error();
        out.push_back(std::move(committed.value()));
    }
    return out;
}

Result<EvolutionOutcome> EvolutionEngine::evolve(ComponentKind kind, const ComponentName& name,
                                                 Critic& critic, const Value& feedback,
                                                 int max_iter, const std::string& slot) {
    if (max_iter < 1) {
        return make_error(ErrorKind::ValidationFailed, "max_iter must be at least 1");
    }
    auto registry = registry_for(kind);
    if (!registry.ok()) return registry.error();

    // One evolution run per component at a time.
    {
        std::lock_guard<std::mutex> gate(gate_mu_);
        if (!in_flight_.insert({kind, name}).second) {
            return make_error(ErrorKind::EvolutionRejected,
                              std::string("evolution already in progress for ") + to_string(kind) +
                                  " '" + name + "'");
        }
    }
    struct GateRelease {
        EvolutionEngine* engine;
        std::pair<ComponentKind, ComponentName> key;
        ~GateRelease() {
            std::lock_guard<std::mutex> gate(engine->gate_mu_);
            engine->in_flight_.erase(key);
        }
    } release{this, {kind, name}};

    auto extracted = registry.value()->extract_vars(name);
    if (!extracted.ok()) return extracted.error();
    Variable var;
    if (slot.empty()) {
        if (extracted.value().empty()) {
            return make_error(ErrorKind::ValidationFailed,
                              std::string(to_string(kind)) + " '" + name +
                                  "' exposes no evolvable slots");
        }
        var = extracted.value().front();
    } else {
        bool found = false;
        for (const auto& candidate : extracted.value()) {
            if (candidate.slot == slot) {
                var = candidate;
                found = true;
                break;
            }
        }
        if (!found) {
            return make_error(ErrorKind::ValidationFailed,
                              "no evolvable slot '" + slot + "' on '" + name + "'");
        }
    }

    Value context{{"feedback", feedback},
                  {"kind", to_string(kind)},
                  {"name", name},
                  {"slot", var.slot}};

    auto baseline = critic.score(var.content, context);
    if (!baseline.ok()) {
        return make_error(ErrorKind::BackendFailure,
                          "critic baseline scoring failed: " + baseline.error().detail);
    }

    EvolutionOutcome outcome;
    outcome.initial_score = baseline.value();
    outcome.final_score = baseline.value();

    for (int iteration = 1; iteration <= max_iter; ++iteration) {
        context["iteration"] = iteration;
        auto candidate = critic.propose(var, context);
        if (!candidate.ok()) {
            return make_error(ErrorKind::BackendFailure,
                              "critic proposal failed: " + candidate.error().detail);
        }
        auto scored = critic.score(candidate.value(), context);
        if (!scored.ok()) {
            return make_error(ErrorKind::BackendFailure,
                              "critic scoring failed: " + scored.error().detail);
        }
        outcome.iterations = iteration;
        bool improves = scored.value() > outcome.initial_score;  // strict gate
        outcome.lineage.push_back(LineageEntry{iteration, scored.value(), improves});
        if (improves) {
            Variable commit = var;
            commit.content = candidate.value();
            auto committed = registry.value()->commit_var(commit);
            if (!committed.ok()) return committed.error();
            outcome.accepted = true;
            outcome.final_score = scored.value();
            outcome.committed_version = committed.value().version;
            break;
        }
    }

    EvolutionRun run{kind, name, var.slot, critic.id(), clock_.now_micros(), outcome};
    {
        std::lock_guard<std::mutex> lock(runs_mu_);
        runs_.push_back(std::move(run));
    }
    return outcome;
}

Result<ComponentConfig> EvolutionEngine::rollback(ComponentKind kind, const ComponentName& name,
                                                  const VersionString& version) {
    auto registry = registry_for(kind);
    if (!registry.ok()) return registry.error();
    return registry.value()->restore(name, version);
}

std::vector<EvolutionRun> EvolutionEngine::runs() const {
    std::lock_guard<std::mutex> lock(runs_mu_);
    return runs_;
}

void EvolutionEngine::adopt_run(EvolutionRun run) {
    std::lock_guard<std::mutex> lock(runs_mu_);
    runs_.push_back(std::move(run));
}

}  // namespace tea
