#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "repaint/json_util.hpp"

namespace repaint {

// Content-addressed response cache. Key = sha256(backend id, canonical
// request bytes); layout cache/<backend-id>/<key-prefix-2>/<key>.bin.
// Writes are atomic; identical keys always carry identical responses (mock
// and remote backends are required to be deterministic per request), so
// last-write-wins racing is harmless.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path root);

    static std::string key_for(const std::string& backend_id,
                               const std::string& canonical_request);

    std::optional<std::string> get(const std::string& backend_id, const std::string& key) const;
    void put(const std::string& backend_id, const std::string& key, std::string_view response);

    struct Stats {
        std::uint64_t entries = 0;
        std::uint64_t bytes = 0;
    };
    Stats stats() const;

    // Removes entries older than max_age_seconds (0 = everything). Returns the
    // number of removed entries.
    std::uint64_t gc(std::uint64_t max_age_seconds);

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path entry_path(const std::string& backend_id, const std::string& key) const;

    std::filesystem::path root_;
};

} // namespace repaint
