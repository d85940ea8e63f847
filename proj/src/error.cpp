#include "tea/error.hpp"

namespace tea {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::NameConflict: return "NameConflict";
        case ErrorKind::VersionNotFound: return "VersionNotFound";
        case ErrorKind::ValidationFailed: return "ValidationFailed";
        case ErrorKind::ActionNotFound: return "ActionNotFound";
        case ErrorKind::BackendFailure: return "BackendFailure";
        case ErrorKind::ProtocolError: return "ProtocolError";
        case ErrorKind::LifecycleViolation: return "LifecycleViolation";
        case ErrorKind::EvolutionRejected: return "EvolutionRejected";
        case ErrorKind::PersistenceError: return "PersistenceError";
    }
    return "ProtocolError";
}

bool error_kind_from_string(const std::string& text, ErrorKind& out) {
    static const struct {
        const char* name;
        ErrorKind kind;
    } table[] = {
        {"NotFound", ErrorKind::NotFound},
        {"NameConflict", ErrorKind::NameConflict},
        {"VersionNotFound", ErrorKind::VersionNotFound},
        {"ValidationFailed", ErrorKind::ValidationFailed},
        {"ActionNotFound", ErrorKind::ActionNotFound},
        {"BackendFailure", ErrorKind::BackendFailure},
        {"ProtocolError", ErrorKind::ProtocolError},
        {"LifecycleViolation", ErrorKind::LifecycleViolation},
        {"EvolutionRejected", ErrorKind::EvolutionRejected},
        {"PersistenceError", ErrorKind::PersistenceError},
    };
    for (const auto& row : table) {
        if (text == row.name) {
            out = row.kind;
            return true;
        }
    }
    return false;
}

}  // namespace tea
