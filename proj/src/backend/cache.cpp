#include "repaint/cache.hpp"

#include <chrono>

#include "repaint/fs_util.hpp"
#include "repaint/hash.hpp"

namespace repaint {

namespace fs = std::filesystem;

ResponseCache::ResponseCache(fs::path root) : root_(std::move(root)) {}

std::string ResponseCache::key_for(const std::string& backend_id,
                                   const std::string& canonical_request) {
    return sha256_hex_parts({backend_id, canonical_request});
}

fs::path ResponseCache::entry_path(const std::string& backend_id, const std::string& key) const {
    return root_ / backend_id / key.substr(0, 2) / (key + ".bin");
}

std::optional<std::string> ResponseCache::get(const std::string& backend_id,
                                              const std::string& key) const {
    fs::path path = entry_path(backend_id, key);
    if (!file_exists(path)) return std::nullopt;
    return read_file(path);
}

void ResponseCache::put(const std::string& backend_id, const std::string& key,
                        std::string_view response) {
    write_file_atomic(entry_path(backend_id, key), response);
}

ResponseCache::Stats ResponseCache::stats() const {
    Stats s;
    std::error_code ec;
    if (!fs::exists(root_, ec)) return s;
    for (const auto& entry : fs::recursive_directory_iterator(root_, ec)) {
        if (entry.is_regular_file(ec) && entry.path().extension() == ".bin") {
            s.entries += 1;
            s.bytes += entry.file_size(ec);
        }
    }
    return s;
}

std::uint64_t ResponseCache::gc(std::uint64_t max_age_seconds) {
    std::error_code ec;
    if (!fs::exists(root_, ec)) return 0;
    auto now = fs::file_time_type::clock::now();
    std::uint64_t removed = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root_, ec)) {
        if (!entry.is_regular_file(ec) || entry.path().extension() != ".bin") continue;
        bool expired = true;
        if (max_age_seconds > 0) {
            auto age = std::chrono::duration_cast<std::chrono::seconds>(
                now - fs::last_write_time(entry.path(), ec));
            expired = age.count() >= 0 &&
                      static_cast<std::uint64_t>(age.count()) > max_age_seconds;
        }
        if (expired && fs::remove(entry.path(), ec)) removed += 1;
    }
    return removed;
}

} // namespace repaint
