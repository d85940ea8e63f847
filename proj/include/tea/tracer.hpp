#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tea/clock.hpp"
#include "tea/error.hpp"
#include "tea/ids.hpp"
#include "tea/sessions.hpp"
#include "tea/value.hpp"

namespace tea {

struct TraceInvocation {
    std::string kind;  // "tool" | "environment" | "agent"
    std::string name;
    Value args;
    Value outcome;

    Value to_value() const;
};

// One execution step: globally unique record id, gapless per-session index.
struct TraceRecord {
    std::string record_id;
    std::string session_id;
    std::string task_id;
    int index = 0;
    Value observation;
    std::optional<TraceInvocation> invocation;
    std::int64_t at = 0;

    Value to_value() const;
    static Result<TraceRecord> from_value(const Value& v);
};

class Tracer {
public:
    Tracer(Clock& clock, SessionRegistry& sessions, IdGen ids);

    Result<TraceRecord> record(const SessionHandle& session, Value observation,
                               std::optional<TraceInvocation> invocation);

    std::vector<TraceRecord> by_session(const std::string& session_id) const;
    std::vector<TraceRecord> by_task(const std::string& task_id) const;
    Result<TraceRecord> by_record_id(const std::string& record_id) const;
    Result<TraceRecord> by_index(const std::string& session_id, int index) const;

    std::vector<std::string> session_ids() const;
    std::size_t total_records() const;

    // Newline-delimited canonical records; exclusive advisory lock during
    // the write, temp-file + rename so readers never see partial bytes.
    Status save(const std::string& path) const;
    Status save_session(const std::string& session_id, const std::string& path) const;
    Status load(const std::string& path);

private:
    struct SessionTrace {
        std::mutex append_mu;
        std::string task_id;
        std::vector<TraceRecord> records;
    };

    std::vector<TraceRecord> collect_all() const;
    Status write_records(const std::vector<TraceRecord>& records, const std::string& path) const;

    Clock& clock_;
    SessionRegistry& sessions_;
    IdGen ids_;
    mutable std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<SessionTrace>> store_;
};

}  // namespace tea
