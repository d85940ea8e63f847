#pragma once

#include "tea/behavior.hpp"
#include "tea/types.hpp"

namespace tea {

struct Decoded {
    ComponentConfig config;
    bool dormant = false;  // behavior unresolvable: registered but uninvocable
};

// Canonical envelope text for a component: the config fields plus a
// schema_dump of the argument schema. decode(encode(x)) is field-equal.
std::string codec_encode(const ComponentConfig& cfg);

// Malformed text -> ProtocolError; a structurally valid envelope with bad
// fields -> ValidationFailed. The resolver decides dormancy.
Result<Decoded> codec_decode(const std::string& text, BehaviorResolver* resolver);

}  // namespace tea
