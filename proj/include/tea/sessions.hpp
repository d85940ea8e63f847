#pragma once

#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "tea/error.hpp"
#include "tea/ids.hpp"

namespace tea {

// Isolation unit for memory events and trace records.
struct SessionHandle {
    std::string session_id;
    std::string agent_name;
    std::string task_id;

    bool operator==(const SessionHandle&) const = default;
};

// Shared open/closed bookkeeping used by both the memory manager and the
// tracer: a closed session is sealed and rejects further appends.
class SessionRegistry {
public:
    explicit SessionRegistry(IdGen ids) : ids_(std::move(ids)) {}

    SessionHandle open(const std::string& agent_name, const std::string& task_id) {
        SessionHandle h{ids_(), agent_name, task_id};
        std::unique_lock lock(mu_);
        sessions_[h.session_id] = h;
        return h;
    }

    Status close(const std::string& session_id) {
        std::unique_lock lock(mu_);
        auto it = sessions_.find(session_id);
        if (it == sessions_.end()) {
            if (closed_.count(session_id)) {
                return make_error(ErrorKind::LifecycleViolation,
                                  "session '" + session_id + "' is already closed");
            }
            return make_error(ErrorKind::NotFound, "unknown session '" + session_id + "'");
        }
        closed_[session_id] = it->second;
        sessions_.erase(it);
        return ok_status();
    }

    bool is_open(const std::string& session_id) const {
        std::shared_lock lock(mu_);
        return sessions_.count(session_id) > 0;
    }

    // Resolves closed sessions too: appends against a sealed handle must
    // surface as LifecycleViolation downstream, not NotFound.
    Result<SessionHandle> get(const std::string& session_id) const {
        std::shared_lock lock(mu_);
        auto it = sessions_.find(session_id);
        if (it != sessions_.end()) return it->second;
        auto closed = closed_.find(session_id);
        if (closed != closed_.end()) return closed->second;
        return make_error(ErrorKind::NotFound, "unknown session '" + session_id + "'");
    }

private:
    IdGen ids_;
    mutable std::shared_mutex mu_;
    std::map<std::string, SessionHandle> sessions_;
    std::map<std::string, SessionHandle> closed_;
};

}  // namespace tea
