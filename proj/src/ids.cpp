#include "tea/ids.hpp"

#include <atomic>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

#include <cinttypes>
#include <cstdio>

namespace tea {

namespace {

std::uint64_t entropy() {
    static std::atomic<std::uint64_t> salt{0x9e3779b97f4a7c15ULL};
    std::random_device rd;
    std::uint64_t s = (std::uint64_t(rd()) << 32) ^ rd();
    return s ^ salt.fetch_add(0x2545f4914f6cdd1dULL);
}

}  // namespace

IdGen random_hex_ids() {
    auto state = std::make_shared<std::pair<std::mutex, std::mt19937_64>>();
    state->second.seed(entropy());
    return [state]() {
        std::uint64_t hi, lo;
        {
            std::lock_guard<std::mutex> lock(state->first);
            hi = state->second();
            lo = state->second();
        }
        char buf[33];
        std::snprintf(buf, sizeof(buf), "%016" PRIx64 "%016" PRIx64, hi, lo);
        return std::string(buf);
    };
}

IdGen sequential_ids(std::string prefix) {
    auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
    return [counter, prefix = std::move(prefix)]() {
        std::uint64_t n = counter->fetch_add(1) + 1;
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016" PRIx64, n);
        std::string tail(buf);
        std::string id = prefix + tail;
        // Keep the 32-character id shape of the random generator.
        if (id.size() < 32) id.insert(prefix.size(), 32 - id.size(), '0');
        return id;
    };
}

}  // namespace tea
