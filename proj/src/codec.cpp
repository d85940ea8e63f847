#include "tea/codec.hpp"

namespace tea {

std::string codec_encode(const ComponentConfig& cfg) {
    Value envelope = cfg.to_value();
    envelope["schema_dump"] = cfg.representations.argument_schema;
    return canonical_dump(envelope);
}

Result<Decoded> codec_decode(const std::string& text, BehaviorResolver* resolver) {
    auto parsed = parse_value(text);
    if (!parsed.ok()) {
        return make_error(ErrorKind::ProtocolError, "malformed component envelope");
    }
    auto cfg = ComponentConfig::from_value(parsed.value());
    if (!cfg.ok()) return cfg.error();
    if (parsed.value().contains("schema_dump") &&
        parsed.value()["schema_dump"] != cfg.value().representations.argument_schema) {
        return make_error(ErrorKind::ValidationFailed,
                          "schema_dump does not match the argument schema");
    }
    Decoded out{std::move(cfg.value()), false};
    switch (out.config.kind) {
        case ComponentKind::tool:
            out.dormant = !resolver || !resolver->resolve_tool(out.config);
            break;
        case ComponentKind::environment:
            out.dormant = !resolver || !resolver->resolve_env(out.config);
            break;
        case ComponentKind::agent:
            out.dormant = !resolver || !resolver->resolve_agent(out.config);
            break;
        case ComponentKind::prompt:
        case ComponentKind::memory:
            out.dormant = false;  // pure data, always live
            break;
    }
    return out;
}

}  // namespace tea
