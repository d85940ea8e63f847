#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tea/error.hpp"
#include "tea/value.hpp"
#include "tea/version.hpp"

namespace tea {

// The five component families managed by the protocol. `memory` exists in
// the vocabulary for evolution variables but has no registry of its own.
enum class ComponentKind { tool, environment, agent, prompt, memory };

const char* to_string(ComponentKind kind);
bool component_kind_from_string(const std::string& text, ComponentKind& out);

using ComponentName = std::string;

// Name rule: lowercase alphanumerics plus `_`, `.`, `-`; first character
// alphabetic. Names appear in wire op paths and file names.
std::vector<std::string> name_violations(const std::string& name);
inline bool valid_name(const std::string& name) { return name_violations(name).empty(); }

struct Descriptor {
    ComponentName name;
    std::string description;
    std::map<std::string, std::string> metadata;
    bool evolvable = false;

    bool operator==(const Descriptor&) const = default;
};

struct Validation {
    bool ok = true;
    std::vector<std::string> reasons;

    std::string joined() const;
};

// Gate before every register: checks the name pattern and that the
// description is non-empty (it feeds embedding and contract generation).
Validation validate_descriptor(const Descriptor& d);

enum class SemanticType { integer, floating, text, boolean, sequence, mapping };

const char* to_string(SemanticType type);
bool semantic_type_from_string(const std::string& text, SemanticType& out);

struct ParamDecl {
    std::string name;
    SemanticType type = SemanticType::text;
    bool required = true;
    std::string doc;

    bool operator==(const ParamDecl&) const = default;
};

// Duplicate param names are the one structural error a declaration can have.
Status check_param_decls(const std::vector<ParamDecl>& params);

// Strict argument check against a declaration: required params present,
// types match exactly (no coercion), unknown params rejected unless the
// declaration is open. Returns one reason per offending param.
std::vector<std::string> check_args(const std::vector<ParamDecl>& params, bool open_args,
                                    const Value& args);

struct Representations {
    Value call_schema;
    std::string text_description;
    Value argument_schema;

    bool operator==(const Representations&) const = default;

    Value to_value() const;
    static Result<Representations> from_value(const Value& v);
};

// Deterministic synthesis of all three representation formats from one
// declaration: same input yields byte-identical output.
Representations synthesize_representations(const std::string& name, const std::string& description,
                                           const std::vector<ParamDecl>& params, bool open_args);

Value params_to_value(const std::vector<ParamDecl>& params);
Result<std::vector<ParamDecl>> params_from_value(const Value& v);

// Versioned record binding a descriptor, opaque source payload, and the
// synthesized representations. Kind-specific data (env actions and rules,
// prompt templates, transform lineage) lives under `extensions`.
struct ComponentConfig {
    Descriptor descriptor;
    VersionString version;
    std::string source;
    Representations representations;
    ComponentKind kind = ComponentKind::tool;
    Value extensions = Value::object();

    bool operator==(const ComponentConfig&) const = default;

    Value to_value() const;
    static Result<ComponentConfig> from_value(const Value& v);
};

struct ContractEntry {
    ComponentName name;
    VersionString version;
    std::string text_description;
    std::string schema_summary;
};

// Aggregate documentation of all active components of one kind: one entry
// per component, sorted by name.
struct ContractDocument {
    ComponentKind kind = ComponentKind::tool;
    std::vector<ContractEntry> entries;
    std::int64_t generated_at = 0;

    Value to_value() const;
    std::string to_text() const;
};

}  // namespace tea
