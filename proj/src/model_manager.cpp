#include "tea/model_manager.hpp"

#include <mutex>

namespace tea {

Status ModelManager::register_backend(std::shared_ptr<ModelBackend> backend) {
    if (!backend || backend->id().empty()) {
        return make_error(ErrorKind::ValidationFailed, "backend must carry a non-empty id");
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = backends_.emplace(backend->id(), backend);
    if (!inserted) {
        return make_error(ErrorKind::NameConflict,
                          "model backend '" + backend->id() + "' is already registered");
    }
    return ok_status();
}

std::vector<std::string> ModelManager::backend_ids() const {
    std::shared_lock lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, backend] : backends_) out.push_back(id);
    return out;
}

bool ModelManager::has_backend(const std::string& id) const {
    std::shared_lock lock(mu_);
    return backends_.count(id) > 0;
}

Result<Value> ModelManager::invoke(const Value& request,
                                   const std::vector<std::string>& chain) const {
    if (chain.empty()) {
        return make_error(ErrorKind::ValidationFailed, "fallback chain must not be empty");
    }
    std::vector<std::shared_ptr<ModelBackend>> resolved;
    {
        std::shared_lock lock(mu_);
        for (const auto& id : chain) {
            auto it = backends_.find(id);
            if (it == backends_.end()) {
                return make_error(ErrorKind::NotFound, "model backend '" + id + "' is not registered");
            }
            resolved.push_back(it->second);
        }
    }
    std::string causes;
    for (const auto& backend : resolved) {
        Result<Value> got = Value();
        try {
            got = backend->invoke(request);
        } catch (const std::exception& e) {
            got = make_error(ErrorKind::BackendFailure,
                             std::string("backend threw: ") + e.what());
        }
        if (got.ok()) {
            Value response = std::move(got.value());
            if (response.is_object()) {
                response["served_by"] = backend->id();
            } else {
                response = Value{{"result", std::move(response)}, {"served_by", backend->id()}};
            }
            return response;
        }
        if (!causes.empty()) causes += "; ";
        causes += backend->id() + ": " + got.error().detail;
    }
    return make_error(ErrorKind::BackendFailure,
                      "all " + std::to_string(resolved.size()) + " backends failed: " + causes);
}

}  // namespace tea
