#pragma once

#include <string>

#include "tea/types.hpp"
#include "tea/version.hpp"

namespace tea {

// An evolvable text slot of a component: the source payload of a tool,
// environment, or agent, or a trainable slot of a prompt. `owner` provenance
// points back at the version the content was extracted from.
struct Variable {
    ComponentKind kind = ComponentKind::tool;
    ComponentName name;
    VersionString version;
    std::string slot;
    std::string content;

    bool operator==(const Variable&) const = default;

    Value to_value() const;
    static Result<Variable> from_value(const Value& v);
};

}  // namespace tea
