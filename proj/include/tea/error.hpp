#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace tea {

// Unified error taxonomy. Every failing operation in the kernel maps to
// exactly one of these kinds plus a human-readable detail string.
enum class ErrorKind {
    NotFound,
    NameConflict,
    VersionNotFound,
    ValidationFailed,
    ActionNotFound,
    BackendFailure,
    ProtocolError,
    LifecycleViolation,
    EvolutionRejected,
    PersistenceError,
};

const char* to_string(ErrorKind kind);
bool error_kind_from_string(const std::string& text, ErrorKind& out);

struct Error {
    ErrorKind kind;
    std::string detail;

    std::string to_text() const { return std::string(to_string(kind)) + ": " + detail; }
};

inline Error make_error(ErrorKind kind, std::string detail) {
    return Error{kind, std::move(detail)};
}

// Minimal expected-like result. The kernel does not throw across module
// boundaries; failures travel as Error values.
template <typename T>
class [[nodiscard]] Result {
public:
    Result(T value) : state_(std::move(value)) {}
    Result(Error err) : state_(std::move(err)) {}

    bool ok() const { return std::holds_alternative<T>(state_); }
    explicit operator bool() const { return ok(); }

    T& value() & { return std::get<T>(state_); }
    const T& value() const& { return std::get<T>(state_); }
    // By value on rvalues: `for (x : f().value())` must not dangle.
    T value() && { return std::get<T>(std::move(state_)); }

    const Error& error() const { return std::get<Error>(state_); }

    T value_or(T fallback) const {
        return ok() ? std::get<T>(state_) : std::move(fallback);
    }

private:
    std::variant<T, Error> state_;
};

template <>
class [[nodiscard]] Result<void> {
public:
    Result() = default;
    Result(Error err) : err_(std::move(err)) {}

    bool ok() const { return !err_.has_value(); }
    explicit operator bool() const { return ok(); }
    const Error& error() const { return *err_; }

private:
    std::optional<Error> err_;
};

using Status = Result<void>;

inline Status ok_status() { return Status{}; }

}  // namespace tea
