#pragma once

#include <json.hpp>

#include <string>

#include "tea/error.hpp"

namespace tea {

// Structured values are plain JSON trees: null, boolean, integer, float,
// text, sequence, or text-keyed mapping. nlohmann::json keeps object keys
// sorted, which makes the canonical encoding a straight dump().
using Value = nlohmann::json;

// Canonical text encoding: UTF-8, object keys sorted ascending, no
// insignificant whitespace, newline-terminated. Floats render with the
// shortest representation that round-trips.
inline std::string canonical_line(const Value& v) { return v.dump(); }

inline std::string canonical_dump(const Value& v) { return v.dump() + "\n"; }

inline Result<Value> parse_value(const std::string& text) {
    Value v = Value::parse(text, nullptr, false);
    if (v.is_discarded()) {
        return make_error(ErrorKind::ProtocolError, "malformed value text");
    }
    return v;
}

}  // namespace tea
