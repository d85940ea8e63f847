#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>

namespace tea {

// Timestamps are injected so histories and traces are reproducible in tests.
// All times are microseconds since the Unix epoch.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_micros() = 0;
};

// Wall clock clamped to be monotonically non-decreasing.
class SystemClock final : public Clock {
public:
    std::int64_t now_micros() override {
        using namespace std::chrono;
        auto t = duration_cast<microseconds>(system_clock::now().time_since_epoch()).count();
        std::lock_guard<std::mutex> lock(mu_);
        if (t <= last_) t = last_ + 1;
        last_ = t;
        return t;
    }

private:
    std::mutex mu_;
    std::int64_t last_ = 0;
};

// Deterministic clock for tests: every read ticks forward by one.
class ManualClock final : public Clock {
public:
    explicit ManualClock(std::int64_t start = 1'000'000) : t_(start) {}

    std::int64_t now_micros() override { return t_.fetch_add(1); }

    void advance(std::int64_t micros) { t_.fetch_add(micros); }
    void set(std::int64_t micros) { t_.store(micros); }

private:
    std::atomic<std::int64_t> t_;
};

}  // namespace tea
