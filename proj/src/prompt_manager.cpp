#include "tea/prompt_manager.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace tea {

namespace {

// Substitutes {name} placeholders; "{{" and "}}" escape literal braces.
// Unresolved names accumulate instead of failing fast so the error can
// list every missing variable.
std::string substitute(const std::string& tmpl, const Value& variables, const Value& modules,
                       std::set<std::string>& missing) {
    std::string out;
    out.reserve(tmpl.size());
    for (size_t i = 0; i < tmpl.size();) {
        char c = tmpl[i];
        if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
            out += '{';
            i += 2;
            continue;
        }
        if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
            out += '}';
            i += 2;
            continue;
        }
        if (c == '{') {
            auto end = tmpl.find('}', i + 1);
            if (end == std::string::npos) {
                out += tmpl.substr(i);
                break;
            }
            std::string name = tmpl.substr(i + 1, end - i - 1);
            if (variables.is_object() && variables.contains(name)) {
                const Value& v = variables[name];
                out += v.is_string() ? v.get<std::string>() : canonical_line(v);
            } else if (modules.contains(name)) {
                out += modules[name].get<std::string>();
            } else {
                missing.insert(name);
            }
            i = end + 1;
            continue;
        }
        out += c;
        ++i;
    }
    return out;
}

}  // namespace

PromptManager::PromptManager(VersionManager& versions, VectorIndex* index, Clock& clock)
    : ComponentRegistry(ComponentKind::prompt, versions, index, clock) {}

Result<ComponentConfig> PromptManager::build_config(const PromptSpec& spec) const {
    Value modules = Value::object();
    for (const auto& [k, v] : spec.modules) modules[k] = v;
    for (const auto& slot : spec.trainable_slots) {
        if (slot != "system_template" && slot != "message_template" && !spec.modules.count(slot)) {
            return make_error(ErrorKind::ValidationFailed,
                              "trainable slot '" + slot + "' is neither a module nor a template");
        }
    }
    Value slots = Value::array();
    for (const auto& s : spec.trainable_slots) slots.push_back(s);

    ComponentConfig cfg;
    cfg.descriptor.name = spec.name;
    cfg.descriptor.description = spec.description;
    cfg.descriptor.metadata = spec.metadata;
    cfg.descriptor.evolvable = spec.evolvable;
    cfg.kind = ComponentKind::prompt;
    cfg.extensions["message_template"] = spec.message_template;
    cfg.extensions["modules"] = modules;
    cfg.extensions["system_template"] = spec.system_template;
    cfg.extensions["trainable_slots"] = slots;
    cfg.representations =
        synthesize_representations(spec.name, spec.description,
                                   {{"variables", SemanticType::mapping, false,
                                     "render-time variable substitutions"}},
                                   false);
    return cfg;
}

Result<ComponentConfig> PromptManager::register_prompt(const PromptSpec& spec) {
    auto cfg = build_config(spec);
    if (!cfg.ok()) return cfg.error();
    std::unique_lock lock(mu_);
    return commit_new_locked(std::move(cfg.value()), "registered");
}

Result<ComponentConfig> PromptManager::update_prompt(const ComponentName& name,
                                                     const Value& changes, BumpLevel level) {
    if (!changes.is_object()) {
        return make_error(ErrorKind::ValidationFailed, "changes must be a mapping");
    }
    std::unique_lock lock(mu_);
    auto it = active_.find(name);
    if (it == active_.end()) {
        return make_error(ErrorKind::NotFound, "prompt '" + name + "' is not registered");
    }
    auto spec = spec_from_config(it->second);
    if (!spec.ok()) return spec.error();
    PromptSpec next = std::move(spec.value());
    if (changes.contains("description")) next.description = changes["description"].get<std::string>();
    if (changes.contains("system_template")) {
        next.system_template = changes["system_template"].get<std::string>();
    }
    if (changes.contains("message_template")) {
        next.message_template = changes["message_template"].get<std::string>();
    }
    if (changes.contains("modules")) {
        if (!changes["modules"].is_object()) {
            return make_error(ErrorKind::ValidationFailed, "modules must be a mapping");
        }
        for (auto mit = changes["modules"].begin(); mit != changes["modules"].end(); ++mit) {
            next.modules[mit.key()] = mit.value().get<std::string>();
        }
    }
    if (changes.contains("trainable_slots")) {
        next.trainable_slots.clear();
        for (const auto& s : changes["trainable_slots"]) {
            next.trainable_slots.push_back(s.get<std::string>());
        }
    }
    auto cfg = build_config(next);
    if (!cfg.ok()) return cfg.error();
    cfg.value().descriptor.name = name;
    return commit_next_locked(std::move(cfg.value()), level,
                              "update (" + std::string(to_string(level)) + ")");
}

Result<RenderedPrompt> PromptManager::render(const ComponentName& name,
                                             const Value& variables) const {
    auto cfg = active_config(name);
    if (!cfg.ok()) return cfg.error();
    return render_config(cfg.value(), variables);
}

Result<RenderedPrompt> PromptManager::render_config(const ComponentConfig& cfg,
                                                    const Value& variables) {
    const Value modules = cfg.extensions.value("modules", Value::object());
    std::set<std::string> missing;
    RenderedPrompt out;
    out.system = substitute(cfg.extensions.value("system_template", std::string()), variables,
                            modules, missing);
    out.message = substitute(cfg.extensions.value("message_template", std::string()), variables,
                             modules, missing);
    if (!missing.empty()) {
        std::string joined;
        for (const auto& m : missing) {
            if (!joined.empty()) joined += "; ";
            joined += m;
        }
        return make_error(ErrorKind::ValidationFailed, "missing render variables: " + joined);
    }
    return out;
}

Result<PromptSpec> PromptManager::spec_from_config(const ComponentConfig& cfg) {
    if (cfg.kind != ComponentKind::prompt) {
        return make_error(ErrorKind::ValidationFailed, "config is not a prompt");
    }
    PromptSpec spec;
    spec.name = cfg.descriptor.name;
    spec.description = cfg.descriptor.description;
    spec.metadata = cfg.descriptor.metadata;
    spec.evolvable = cfg.descriptor.evolvable;
    spec.system_template = cfg.extensions.value("system_template", std::string());
    spec.message_template = cfg.extensions.value("message_template", std::string());
    const Value modules = cfg.extensions.value("modules", Value::object());
    for (auto it = modules.begin(); it != modules.end(); ++it) {
        spec.modules[it.key()] = it.value().get<std::string>();
    }
    for (const auto& s : cfg.extensions.value("trainable_slots", Value::array())) {
        spec.trainable_slots.push_back(s.get<std::string>());
    }
    return spec;
}

void PromptManager::activate_instance(const ComponentConfig&) {}
void PromptManager::deactivate_instance(const ComponentName&) {}

std::vector<std::string> PromptManager::evolvable_slots(const ComponentConfig& cfg) const {
    std::vector<std::string> out;
    for (const auto& s : cfg.extensions.value("trainable_slots", Value::array())) {
        out.push_back(s.get<std::string>());
    }
    return out;
}

Result<std::string> PromptManager::slot_content(const ComponentConfig& cfg,
                                                const std::string& slot) const {
    if (slot == "system_template" || slot == "message_template") {
        return cfg.extensions.value(slot, std::string());
    }
    const Value modules = cfg.extensions.value("modules", Value::object());
    if (modules.contains(slot)) return modules[slot].get<std::string>();
    return make_error(ErrorKind::ValidationFailed,
                      "prompt '" + cfg.descriptor.name + "' has no slot '" + slot + "'");
}

Status PromptManager::apply_slot(ComponentConfig& cfg, const std::string& slot,
                                 const std::string& content) const {
    if (slot == "system_template" || slot == "message_template") {
        cfg.extensions[slot] = content;
        return ok_status();
    }
    if (cfg.extensions.value("modules", Value::object()).contains(slot)) {
        cfg.extensions["modules"][slot] = content;
        return ok_status();
    }
    return make_error(ErrorKind::ValidationFailed,
                      "prompt '" + cfg.descriptor.name + "' has no slot '" + slot + "'");
}

}  // namespace tea
