#pragma once

#include <functional>
#include <map>

#include "tea/runtime.hpp"

namespace tea {

struct RequestEnvelope {
    std::string id;
    std::string op;
    Value params = Value::object();

    Value to_value() const;
};

struct ResponseEnvelope {
    std::string id;
    bool ok = false;
    Value result;
    std::optional<Error> error;

    Value to_value() const;
    std::string to_line() const { return canonical_line(to_value()); }
};

// Routes request envelopes onto the runtime. Every kernel failure maps to a
// structured error response; nothing a client sends can bring the process
// down through this surface.
class Dispatcher {
public:
    explicit Dispatcher(TeaRuntime& runtime);

    ResponseEnvelope dispatch(const RequestEnvelope& request);
    ResponseEnvelope dispatch_line(const std::string& line);

    std::vector<std::string> ops() const;

private:
    using Handler = std::function<Result<Value>(TeaRuntime&, const Value&)>;

    void install(std::string op, Handler handler);

    TeaRuntime& runtime_;
    std::map<std::string, Handler> table_;
};

}  // namespace tea
