#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tea/clock.hpp"
#include "tea/sessions.hpp"
#include "tea/value.hpp"

namespace tea {

struct MemoryEvent {
    SessionHandle session;
    int step = 0;  // gapless per session, starting at 1
    std::string kind;
    Value payload;
    std::int64_t at = 0;

    Value to_value() const;
};

// Called with the trailing event window every `summary_every` events; the
// result is appended to the session's summary list. The default hook
// aggregates event-kind counts.
using SummaryHook = std::function<Value(const std::vector<MemoryEvent>& window)>;

// Session-scoped event memory. Appends serialize per session and run
// concurrently across sessions; queries only ever see the queried session.
class MemoryManager {
public:
    MemoryManager(Clock& clock, SessionRegistry& sessions);

    Result<MemoryEvent> record(const SessionHandle& session, const std::string& kind,
                               Value payload);

    // Only the session's own events, in step order; unknown session -> empty.
    std::vector<MemoryEvent> events(const std::string& session_id) const;
    std::vector<Value> summaries(const std::string& session_id) const;

    void set_summary_hook(SummaryHook hook, int every = 20);

private:
    struct SessionMemory {
        std::mutex append_mu;
        std::vector<MemoryEvent> events;
        std::vector<Value> summaries;
    };

    Clock& clock_;
    SessionRegistry& sessions_;
    SummaryHook hook_;
    int summary_every_ = 20;
    mutable std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<SessionMemory>> store_;
};

Value default_summary_hook(const std::vector<MemoryEvent>& window);

}  // namespace tea
