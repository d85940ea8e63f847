#include "tea/memory_manager.hpp"

#include <mutex>

namespace tea {

Value MemoryEvent::to_value() const {
    return Value{{"agent_name", session.agent_name},
                 {"at", at},
                 {"kind", kind},
                 {"payload", payload},
                 {"session_id", session.session_id},
                 {"step", step},
                 {"task_id", session.task_id}};
}

Value default_summary_hook(const std::vector<MemoryEvent>& window) {
    Value counts = Value::object();
    int lo = 0, hi = 0;
    for (const auto& e : window) {
        counts[e.kind] = counts.value(e.kind, 0) + 1;
        if (lo == 0 || e.step < lo) lo = e.step;
        if (e.step > hi) hi = e.step;
    }
    return Value{{"event_counts", counts}, {"from_step", lo}, {"to_step", hi}};
}

MemoryManager::MemoryManager(Clock& clock, SessionRegistry& sessions)
    : clock_(clock), sessions_(sessions), hook_(default_summary_hook) {}

void MemoryManager::set_summary_hook(SummaryHook hook, int every) {
    std::unique_lock lock(mu_);
    hook_ = std::move(hook);
    summary_every_ = every > 0 ? every : 20;
}

Result<MemoryEvent> MemoryManager::record(const SessionHandle& session, const std::string& kind,
                                          Value payload) {
    if (!sessions_.is_open(session.session_id)) {
        return make_error(ErrorKind::LifecycleViolation,
                          "session '" + session.session_id + "' is not open");
    }
    std::shared_ptr<SessionMemory> mem;
    SummaryHook hook;
    int every;
    {
        std::unique_lock lock(mu_);
        auto& slot = store_[session.session_id];
        if (!slot) slot = std::make_shared<SessionMemory>();
        mem = slot;
        hook = hook_;
        every = summary_every_;
    }
    std::lock_guard<std::mutex> append_lock(mem->append_mu);
    MemoryEvent ev;
    ev.session = session;
    ev.step = int(mem->events.size()) + 1;
    ev.kind = kind;
    ev.payload = std::move(payload);
    ev.at = clock_.now_micros();
    mem->events.push_back(ev);
    if (hook && every > 0 && ev.step % every == 0) {
        std::vector<MemoryEvent> window(mem->events.end() - every, mem->events.end());
        mem->summaries.push_back(hook(window));
    }
    return ev;
}

std::vector<MemoryEvent> MemoryManager::events(const std::string& session_id) const {
    std::shared_ptr<SessionMemory> mem;
    {
        std::shared_lock lock(mu_);
        auto it = store_.find(session_id);
        if (it == store_.end()) return {};
        mem = it->second;
    }
    std::lock_guard<std::mutex> append_lock(mem->append_mu);
    return mem->events;
}

std::vector<Value> MemoryManager::summaries(const std::string& session_id) const {
    std::shared_ptr<SessionMemory> mem;
    {
        std::shared_lock lock(mu_);
        auto it = store_.find(session_id);
        if (it == store_.end()) return {};
        mem = it->second;
    }
    std::lock_guard<std::mutex> append_lock(mem->append_mu);
    return mem->summaries;
}

}  // namespace tea
