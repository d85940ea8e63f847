#pragma once

#include <map>

#include "tea/registry.hpp"

namespace tea {

struct PromptSpec {
    std::string name;
    std::string description;
    std::string system_template;
    std::string message_template;
    std::map<std::string, std::string> modules;      // named render slots
    std::vector<std::string> trainable_slots;        // subset of modules/templates
    bool evolvable = true;
    std::map<std::string, std::string> metadata;
};

struct RenderedPrompt {
    std::string system;
    std::string message;

    Value to_value() const { return Value{{"message", message}, {"system", system}}; }
};

// Prompt lifecycle on top of the shared registry: versioned templates with
// module slots, pure-substitution rendering, and trainable slots exposed to
// the evolution loop.
class PromptManager : public ComponentRegistry {
public:
    PromptManager(VersionManager& versions, VectorIndex* index, Clock& clock);

    Result<ComponentConfig> register_prompt(const PromptSpec& spec);

    // `changes` may carry any of: description, system_template,
    // message_template, modules, trainable_slots.
    Result<ComponentConfig> update_prompt(const ComponentName& name, const Value& changes,
                                          BumpLevel level = BumpLevel::patch);

    // Deterministic text substitution of {slot} placeholders: render-time
    // variables win, then modules; any unresolved placeholder fails with
    // the missing names listed.
    Result<RenderedPrompt> render(const ComponentName& name, const Value& variables) const;

    static Result<RenderedPrompt> render_config(const ComponentConfig& cfg,
                                                const Value& variables);
    static Result<PromptSpec> spec_from_config(const ComponentConfig& cfg);

protected:
    void activate_instance(const ComponentConfig& cfg) override;
    void deactivate_instance(const ComponentName& name) override;
    std::vector<std::string> evolvable_slots(const ComponentConfig& cfg) const override;
    Result<std::string> slot_content(const ComponentConfig& cfg,
                                     const std::string& slot) const override;
    Status apply_slot(ComponentConfig& cfg, const std::string& slot,
                      const std::string& content) const override;

private:
    Result<ComponentConfig> build_config(const PromptSpec& spec) const;
};

}  // namespace tea
