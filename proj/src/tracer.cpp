#include "tea/tracer.hpp"

#include <algorithm>
#include <sstream>

#include "tea/persist.hpp"

namespace tea {

Value TraceInvocation::to_value() const {
    return Value{{"args", args}, {"kind", kind}, {"name", name}, {"outcome", outcome}};
}

Value TraceRecord::to_value() const {
    Value v{{"at", at},
            {"index", index},
            {"observation", observation},
            {"record_id", record_id},
            {"session_id", session_id},
            {"task_id", task_id}};
    if (invocation) v["invocation"] = invocation->to_value();
    return v;
}

Result<TraceRecord> TraceRecord::from_value(const Value& v) {
    if (!v.is_object()) return make_error(ErrorKind::ValidationFailed, "record must be a mapping");
    for (const char* field : {"at", "index", "observation", "record_id", "session_id", "task_id"}) {
        if (!v.contains(field)) {
            return make_error(ErrorKind::ValidationFailed,
                              std::string("trace record missing '") + field + "'");
        }
    }
    TraceRecord rec;
    rec.at = v["at"].get<std::int64_t>();
    rec.index = v["index"].get<int>();
    rec.observation = v["observation"];
    rec.record_id = v["record_id"].get<std::string>();
    rec.session_id = v["session_id"].get<std::string>();
    rec.task_id = v["task_id"].get<std::string>();
    if (v.contains("invocation")) {
        const Value& inv = v["invocation"];
        if (!inv.is_object() || !inv.contains("kind") || !inv.contains("name")) {
            return make_error(ErrorKind::ValidationFailed, "malformed trace invocation");
        }
        rec.invocation = TraceInvocation{inv["kind"].get<std::string>(),
                                         inv["name"].get<std::string>(),
                                         inv.value("args", Value()),
                                         inv.value("outcome", Value())};
    }
    return rec;
}

Tracer::Tracer(Clock& clock, SessionRegistry& sessions, IdGen ids)
    : clock_(clock), sessions_(sessions), ids_(std::move(ids)) {}

Result<TraceRecord> Tracer::record(const SessionHandle& session, Value observation,
                                   std::optional<TraceInvocation> invocation) {
    if (!sessions_.is_open(session.session_id)) {
        return make_error(ErrorKind::LifecycleViolation,
                          "session '" + session.session_id + "' is not open");
    }
    std::shared_ptr<SessionTrace> trace;
    {
        std::unique_lock lock(mu_);
        auto& slot = store_[session.session_id];
        if (!slot) slot = std::make_shared<SessionTrace>();
        trace = slot;
        trace->task_id = session.task_id;
    }
    std::lock_guard<std::mutex> append_lock(trace->append_mu);
    TraceRecord rec;
    rec.record_id = ids_();
    rec.session_id = session.session_id;
    rec.task_id = session.task_id;
    rec.index = int(trace->records.size()) + 1;
    rec.observation = std::move(observation);
    rec.invocation = std::move(invocation);
    rec.at = clock_.now_micros();
    trace->records.push_back(rec);
    return rec;
}

std::vector<TraceRecord> Tracer::by_session(const std::string& session_id) const {
    std::shared_ptr<SessionTrace> trace;
    {
        std::shared_lock lock(mu_);
        auto it = store_.find(session_id);
        if (it == store_.end()) return {};
        trace = it->second;
    }
    std::lock_guard<std::mutex> append_lock(trace->append_mu);
    return trace->records;
}

std::vector<TraceRecord> Tracer::by_task(const std::string& task_id) const {
    std::vector<TraceRecord> out;
    std::shared_lock lock(mu_);
    for (const auto& [sid, trace] : store_) {
        std::lock_guard<std::mutex> append_lock(trace->append_mu);
        for (const auto& rec : trace->records) {
            if (rec.task_id == task_id) out.push_back(rec);
        }
    }
    return out;  // map order + per-session index order: (session_id, index)
}

Result<TraceRecord> Tracer::by_record_id(const std::string& record_id) const {
    std::shared_lock lock(mu_);
    for (const auto& [sid, trace] : store_) {
        std::lock_guard<std::mutex> append_lock(trace->append_mu);
        for (const auto& rec : trace->records) {
            if (rec.record_id == record_id) return rec;
        }
    }
    return make_error(ErrorKind::NotFound, "no trace record '" + record_id + "'");
}

Result<TraceRecord> Tracer::by_index(const std::string& session_id, int index) const {
    auto records = by_session(session_id);
    for (const auto& rec : records) {
        if (rec.index == index) return rec;
    }
    return make_error(ErrorKind::NotFound, "session '" + session_id + "' has no trace record #" +
                                               std::to_string(index));
}

std::vector<std::string> Tracer::session_ids() const {
    std::shared_lock lock(mu_);
    std::vector<std::string> out;
    for (const auto& [sid, trace] : store_) out.push_back(sid);
    return out;
}

std::size_t Tracer::total_records() const {
    std::shared_lock lock(mu_);
    std::size_t n = 0;
    for (const auto& [sid, trace] : store_) {
        std::lock_guard<std::mutex> append_lock(trace->append_mu);
        n += trace->records.size();
    }
    return n;
}

std::vector<TraceRecord> Tracer::collect_all() const {
    std::vector<TraceRecord> out;
    std::shared_lock lock(mu_);
    for (const auto& [sid, trace] : store_) {
        std::lock_guard<std::mutex> append_lock(trace->append_mu);
        out.insert(out.end(), trace->records.begin(), trace->records.end());
    }
    return out;
}

Status Tracer::write_records(const std::vector<TraceRecord>& records,
                             const std::string& path) const {
    std::ostringstream out;
    for (const auto& rec : records) out << canonical_dump(rec.to_value());
    FileLock lock(path);
    return atomic_write_file(path, out.str());
}

Status Tracer::save(const std::string& path) const { return write_records(collect_all(), path); }

Status Tracer::save_session(const std::string& session_id, const std::string& path) const {
    return write_records(by_session(session_id), path);
}

Status Tracer::load(const std::string& path) {
    auto bytes = read_file(path);
    if (!bytes.ok()) return bytes.error();
    std::istringstream in(bytes.value());
    std::string line;
    std::vector<TraceRecord> parsed;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto v = parse_value(line);
        if (!v.ok()) {
            return make_error(ErrorKind::PersistenceError,
                              "corrupt trace line in '" + path + "'");
        }
        auto rec = TraceRecord::from_value(v.value());
        if (!rec.ok()) {
            return make_error(ErrorKind::PersistenceError,
                              "invalid trace record in '" + path + "': " + rec.error().detail);
        }
        parsed.push_back(std::move(rec.value()));
    }
    std::unique_lock lock(mu_);
    for (auto& rec : parsed) {
        auto& slot = store_[rec.session_id];
        if (!slot) slot = std::make_shared<SessionTrace>();
        slot->task_id = rec.task_id;
        slot->records.push_back(std::move(rec));
    }
    for (auto& [sid, trace] : store_) {
        std::sort(trace->records.begin(), trace->records.end(),
                  [](const TraceRecord& a, const TraceRecord& b) { return a.index < b.index; });
    }
    return ok_status();
}

}  // namespace tea
