#include "repaint/log.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>

#include "repaint/json_util.hpp"

namespace repaint {

namespace {
std::atomic<bool> g_enabled{false};
std::mutex g_mutex;
} // namespace

void set_logging(bool enabled) { g_enabled.store(enabled); }
bool logging_enabled() { return g_enabled.load(); }

void log_event(const std::string& event,
               std::initializer_list<std::pair<std::string, std::string>> fields) {
    if (!g_enabled.load(std::memory_order_relaxed)) return;
    Json line;
    line["event"] = event;
    line["ts_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::system_clock::now().time_since_epoch())
                        .count();
    for (const auto& [key, value] : fields) line[key] = value;
    std::string text = canonical_json(line);
    std::lock_guard lock(g_mutex);
    std::fwrite(text.data(), 1, text.size(), stderr);
    std::fputc('\n', stderr);
}

} // namespace repaint
