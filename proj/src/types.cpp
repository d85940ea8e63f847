#include "tea/types.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tea {

const char* to_string(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::tool: return "tool";
        case ComponentKind::environment: return "environment";
        case ComponentKind::agent: return "agent";
        case ComponentKind::prompt: return "prompt";
        case ComponentKind::memory: return "memory";
    }
    return "tool";
}

bool component_kind_from_string(const std::string& text, ComponentKind& out) {
    if (text == "tool") {
        out = ComponentKind::tool;
    } else if (text == "environment" || text == "env") {
        out = ComponentKind::environment;
    } else if (text == "agent") {
        out = ComponentKind::agent;
    } else if (text == "prompt") {
        out = ComponentKind::prompt;
    } else if (text == "memory") {
        out = ComponentKind::memory;
    } else {
        return false;
    }
    return true;
}

std::vector<std::string> name_violations(const std::string& name) {
    std::vector<std::string> reasons;
    if (name.empty()) {
        reasons.push_back("empty name");
        return reasons;
    }
    if (name.front() < 'a' || name.front() > 'z') {
        reasons.push_back("name must start with a lowercase letter");
    }
    auto legal = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    };
    if (!std::all_of(name.begin(), name.end(), legal)) {
        reasons.push_back("name may contain only lowercase alphanumerics, '_', '.', '-'");
    }
    return reasons;
}

std::string Validation::joined() const {
    std::string out;
    for (const auto& r : reasons) {
        if (!out.empty()) out += "; ";
        out += r;
    }
    return out;
}

Validation validate_descriptor(const Descriptor& d) {
    Validation v;
    v.reasons = name_violations(d.name);
    if (d.description.empty()) {
        v.reasons.push_back("empty description");
    }
    v.ok = v.reasons.empty();
    return v;
}

const char* to_string(SemanticType type) {
    switch (type) {
        case SemanticType::integer: return "integer";
        case SemanticType::floating: return "float";
        case SemanticType::text: return "text";
        case SemanticType::boolean: return "boolean";
        case SemanticType::sequence: return "sequence";
        case SemanticType::mapping: return "mapping";
    }
    return "text";
}

bool semantic_type_from_string(const std::string& text, SemanticType& out) {
    if (text == "integer") {
        out = SemanticType::integer;
    } else if (text == "float") {
        out = SemanticType::floating;
    } else if (text == "text") {
        out = SemanticType::text;
    } else if (text == "boolean") {
        out = SemanticType::boolean;
    } else if (text == "sequence") {
        out = SemanticType::sequence;
    } else if (text == "mapping") {
        out = SemanticType::mapping;
    } else {
        return false;
    }
    return true;
}

namespace {

// JSON-schema style type name used in call schemas.
const char* schema_type_name(SemanticType type) {
    switch (type) {
        case SemanticType::integer: return "integer";
        case SemanticType::floating: return "number";
        case SemanticType::text: return "string";
        case SemanticType::boolean: return "boolean";
        case SemanticType::sequence: return "array";
        case SemanticType::mapping: return "object";
    }
    return "string";
}

bool value_matches(SemanticType type, const Value& v) {
    switch (type) {
        case SemanticType::integer: return v.is_number_integer();
        case SemanticType::floating: return v.is_number();
        case SemanticType::text: return v.is_string();
        case SemanticType::boolean: return v.is_boolean();
        case SemanticType::sequence: return v.is_array();
        case SemanticType::mapping: return v.is_object();
    }
    return false;
}

}  // namespace

Status check_param_decls(const std::vector<ParamDecl>& params) {
    std::set<std::string> seen;
    for (const auto& p : params) {
        if (!seen.insert(p.name).second) {
            return make_error(ErrorKind::ValidationFailed, "duplicate param name '" + p.name + "'");
        }
    }
    return ok_status();
}

std::vector<std::string> check_args(const std::vector<ParamDecl>& params, bool open_args,
                                    const Value& args) {
    std::vector<std::string> reasons;
    if (!args.is_object()) {
        reasons.push_back("arguments must be a mapping");
        return reasons;
    }
    for (const auto& p : params) {
        auto it = args.find(p.name);
        if (it == args.end()) {
            if (p.required) reasons.push_back("missing " + p.name);
            continue;
        }
        if (!value_matches(p.type, *it)) {
            reasons.push_back(p.name + ": expected " + to_string(p.type));
        }
    }
    if (!open_args) {
        for (auto it = args.begin(); it != args.end(); ++it) {
            bool declared = std::any_of(params.begin(), params.end(),
                                        [&](const ParamDecl& p) { return p.name == it.key(); });
            if (!declared) reasons.push_back("unexpected " + it.key());
        }
    }
    return reasons;
}

Value Representations::to_value() const {
    return Value{{"argument_schema", argument_schema},
                 {"call_schema", call_schema},
                 {"text_description", text_description}};
}

Result<Representations> Representations::from_value(const Value& v) {
    if (!v.is_object() || !v.contains("argument_schema") || !v.contains("call_schema") ||
        !v.contains("text_description") || !v["text_description"].is_string()) {
        return make_error(ErrorKind::ValidationFailed, "malformed representations");
    }
    Representations r;
    r.argument_schema = v["argument_schema"];
    r.call_schema = v["call_schema"];
    r.text_description = v["text_description"].get<std::string>();
    return r;
}

Representations synthesize_representations(const std::string& name, const std::string& description,
                                           const std::vector<ParamDecl>& params, bool open_args) {
    Representations out;

    Value properties = Value::object();
    Value required = Value::array();
    for (const auto& p : params) {
        Value prop{{"type", schema_type_name(p.type)}};
        if (!p.doc.empty()) prop["description"] = p.doc;
        properties[p.name] = prop;
        if (p.required) required.push_back(p.name);
    }
    Value parameters{{"type", "object"}, {"properties", properties}, {"required", required}};
    if (open_args) parameters["additionalProperties"] = true;
    out.call_schema = Value{{"name", name}, {"description", description}, {"parameters", parameters}};

    out.argument_schema = Value{{"open", open_args}, {"params", params_to_value(params)}};

    std::ostringstream text;
    text << description << "\n";
    if (params.empty()) {
        text << "Parameters: none" << (open_args ? " (open arguments)" : "") << "\n";
    } else {
        text << "Parameters:\n";
        for (const auto& p : params) {
            text << "  - " << p.name << " (" << to_string(p.type) << ", "
                 << (p.required ? "required" : "optional") << ")";
            if (!p.doc.empty()) text << ": " << p.doc;
            text << "\n";
        }
    }
    out.text_description = text.str();
    return out;
}

Value params_to_value(const std::vector<ParamDecl>& params) {
    Value arr = Value::array();
    for (const auto& p : params) {
        arr.push_back(Value{{"doc", p.doc},
                            {"name", p.name},
                            {"required", p.required},
                            {"type", to_string(p.type)}});
    }
    return arr;
}

Result<std::vector<ParamDecl>> params_from_value(const Value& v) {
    if (!v.is_array()) {
        return make_error(ErrorKind::ValidationFailed, "params must be a sequence");
    }
    std::vector<ParamDecl> out;
    for (const auto& item : v) {
        if (!item.is_object() || !item.contains("name") || !item["name"].is_string() ||
            !item.contains("type") || !item["type"].is_string()) {
            return make_error(ErrorKind::ValidationFailed, "malformed param declaration");
        }
        ParamDecl p;
        p.name = item["name"].get<std::string>();
        if (!semantic_type_from_string(item["type"].get<std::string>(), p.type)) {
            return make_error(ErrorKind::ValidationFailed,
                              "unknown param type '" + item["type"].get<std::string>() + "'");
        }
        p.required = item.value("required", true);
        p.doc = item.value("doc", std::string());
        out.push_back(std::move(p));
    }
    return out;
}

Value ComponentConfig::to_value() const {
    Value metadata = Value::object();
    for (const auto& [k, val] : descriptor.metadata) metadata[k] = val;
    return Value{{"descriptor", Value{{"description", descriptor.description},
                                      {"evolvable", descriptor.evolvable},
                                      {"metadata", metadata},
                                      {"name", descriptor.name}}},
                 {"extensions", extensions},
                 {"kind", to_string(kind)},
                 {"representations", representations.to_value()},
                 {"source", source},
                 {"version", version.render()}};
}

Result<ComponentConfig> ComponentConfig::from_value(const Value& v) {
    if (!v.is_object()) return make_error(ErrorKind::ValidationFailed, "config must be a mapping");
    for (const char* field : {"descriptor", "kind", "representations", "source", "version"}) {
        if (!v.contains(field)) {
            return make_error(ErrorKind::ValidationFailed,
                              std::string("config missing field '") + field + "'");
        }
    }
    ComponentConfig cfg;
    const Value& d = v["descriptor"];
    if (!d.is_object() || !d.contains("name") || !d["name"].is_string() ||
        !d.contains("description") || !d["description"].is_string()) {
        return make_error(ErrorKind::ValidationFailed, "malformed descriptor");
    }
    cfg.descriptor.name = d["name"].get<std::string>();
    cfg.descriptor.description = d["description"].get<std::string>();
    cfg.descriptor.evolvable = d.value("evolvable", false);
    if (d.contains("metadata")) {
        if (!d["metadata"].is_object()) {
            return make_error(ErrorKind::ValidationFailed, "descriptor metadata must be a mapping");
        }
        for (auto it = d["metadata"].begin(); it != d["metadata"].end(); ++it) {
            if (!it.value().is_string()) {
                return make_error(ErrorKind::ValidationFailed, "metadata values must be text");
            }
            cfg.descriptor.metadata[it.key()] = it.value().get<std::string>();
        }
    }
    if (!v["kind"].is_string() ||
        !component_kind_from_string(v["kind"].get<std::string>(), cfg.kind)) {
        return make_error(ErrorKind::ValidationFailed, "unknown component kind");
    }
    auto reprs = Representations::from_value(v["representations"]);
    if (!reprs.ok()) return reprs.error();
    cfg.representations = std::move(reprs.value());
    if (!v["source"].is_string()) {
        return make_error(ErrorKind::ValidationFailed, "source must be text");
    }
    cfg.source = v["source"].get<std::string>();
    if (!v["version"].is_string()) {
        return make_error(ErrorKind::ValidationFailed, "version must be text");
    }
    auto ver = VersionString::parse(v["version"].get<std::string>());
    if (!ver.ok()) return ver.error();
    cfg.version = ver.value();
    cfg.extensions = v.value("extensions", Value::object());
    if (!cfg.extensions.is_object()) {
        return make_error(ErrorKind::ValidationFailed, "extensions must be a mapping");
    }
    return cfg;
}

Value ContractDocument::to_value() const {
    Value entries_v = Value::array();
    for (const auto& e : entries) {
        entries_v.push_back(Value{{"name", e.name},
                                  {"schema_summary", e.schema_summary},
                                  {"text_description", e.text_description},
                                  {"version", e.version.render()}});
    }
    return Value{{"entries", entries_v},
                 {"generated_at", generated_at},
                 {"kind", to_string(kind)}};
}

std::string ContractDocument::to_text() const {
    std::ostringstream out;
    out << "Contract: " << to_string(kind) << "s (" << entries.size() << " active)\n";
    for (const auto& e : entries) {
        out << "\n## " << e.name << " v" << e.version.render() << "\n"
            << e.text_description;
        if (!e.schema_summary.empty()) out << "[" << e.schema_summary << "]\n";
    }
    return out.str();
}

}  // namespace tea
