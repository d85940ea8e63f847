#pragma once

#include <map>
#include <memory>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tea/error.hpp"
#include "tea/value.hpp"

namespace tea {

enum class ModelCapability { chat, embed, transcribe };

// One model backing: scripted in tests, provider clients as plug-ins.
class ModelBackend {
public:
    virtual ~ModelBackend() = default;
    virtual std::string id() const = 0;
    virtual std::set<ModelCapability> capabilities() const { return {ModelCapability::chat}; }
    virtual Result<Value> invoke(const Value& request) = 0;
};

// Deterministic backend: canned responses keyed by the canonical request
// text, an optional default, or unconditional failure.
class ScriptedBackend final : public ModelBackend {
public:
    explicit ScriptedBackend(std::string id) : id_(std::move(id)) {}

    std::string id() const override { return id_; }

    ScriptedBackend& respond(const Value& request, Value response) {
        canned_.emplace(canonical_line(request), std::move(response));
        return *this;
    }
    ScriptedBackend& respond_default(Value response) {
        default_ = std::move(response);
        has_default_ = true;
        return *this;
    }
    ScriptedBackend& always_fail(std::string detail) {
        fail_detail_ = std::move(detail);
        failing_ = true;
        return *this;
    }

    Result<Value> invoke(const Value& request) override {
        if (failing_) return make_error(ErrorKind::BackendFailure, fail_detail_);
        auto it = canned_.find(canonical_line(request));
        if (it != canned_.end()) return it->second;
        if (has_default_) return default_;
        return make_error(ErrorKind::BackendFailure, id_ + ": no canned response for request");
    }

private:
    std::string id_;
    std::map<std::string, Value> canned_;
    Value default_;
    bool has_default_ = false;
    bool failing_ = false;
    std::string fail_detail_;
};

// Unified invocation over registered backends with first-success fallback.
// The winning backend annotates the response with served_by; when every
// backend fails the error aggregates each cause in chain order.
class ModelManager {
public:
    Status register_backend(std::shared_ptr<ModelBackend> backend);
    std::vector<std::string> backend_ids() const;
    bool has_backend(const std::string& id) const;

    Result<Value> invoke(const Value& request, const std::vector<std::string>& chain) const;

private:
    mutable std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<ModelBackend>> backends_;
};

}  // namespace tea
