#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "repaint/json_util.hpp"
#include "repaint/types.hpp"

namespace repaint {

// Request for the multimodal LLM role. `schema` selects the response contract:
// "iut" | "feedback" | "judge" | "freeform".
struct MllmRequest {
    std::vector<ReferenceImage> images; // 0-2 attachments
    std::string prompt;
    std::string schema = "freeform";
    double temperature = 0.0;
    int max_tokens = 1024;

    // Canonical form for cache keys: images by content id, not bytes.
    Json canonical() const;
};

struct T2iRequest {
    std::string prompt;
    std::string negative_prompt;
    std::int64_t seed = 0;
    int width = 512;
    int height = 512;
    int steps = 20;

    Json canonical() const;
};

struct EmbedRequest {
    std::string image_id;
    std::string image_bytes;
    std::string model_tag; // "clip-like" | "dino-like"

    Json canonical() const;
};

struct EmbeddingVector {
    std::vector<double> values;
    int dim = 0;
    std::string model_tag;
};

struct Capabilities {
    std::vector<std::string> roles;
    std::map<std::string, int> embed_dims;

    Json to_json() const;
    static Capabilities from_json(const Json& j);
};

// Per-role invocation counters. "invocations" counts actual backend calls;
// cache hits never reach the backend.
struct BackendCounters {
    std::atomic<std::uint64_t> invocations{0};
    std::atomic<std::uint64_t> cache_hits{0};
    std::atomic<std::uint64_t> failures{0};
    std::atomic<std::uint64_t> repairs{0};
};

// Wire-level backend interfaces. Implementations return the raw response body
// (JSON text) so cached replays are byte-identical by construction.
class MllmBackend {
public:
    virtual ~MllmBackend() = default;
    virtual std::string id() const = 0;
    // Returns the response body: {"text": str}
    virtual std::string query(const MllmRequest& request) = 0;
};

class T2iBackend {
public:
    virtual ~T2iBackend() = default;
    virtual std::string id() const = 0;
    // Returns the response body: {"image": base64, "model": str}
    virtual std::string generate(const T2iRequest& request) = 0;
};

class EmbedBackend {
public:
    virtual ~EmbedBackend() = default;
    virtual std::string id() const = 0;
    // Returns the response body: {"vector": [num...], "dim": int}
    virtual std::string embed(const EmbedRequest& request) = 0;
    virtual Capabilities capabilities() = 0;
};

} // namespace repaint
