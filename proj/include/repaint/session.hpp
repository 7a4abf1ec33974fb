#pragma once

#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>

#include "repaint/backend.hpp"
#include "repaint/cache.hpp"
#include "repaint/config.hpp"
#include "repaint/mock_world.hpp"

namespace repaint {

// Counting semaphore bounding in-flight backend calls (RunConfig.jobs).
class CallLimiter {
public:
    explicit CallLimiter(int limit) : available_(limit < 1 ? 1 : limit) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [this] { return available_ > 0; });
        --available_;
    }
    void release() {
        {
            std::lock_guard lock(mutex_);
            ++available_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int available_;
};

struct MllmResult {
    std::string text;   // raw text (trimmed of the wire envelope, not of content)
    Json parsed;        // null for freeform
    int repair_attempts = 0;
};

// Operational layer over the three backend roles: response cache, transport
// retries, the schema repair loop, and per-role counters. Shareable across
// threads; in-flight calls are bounded by the config's jobs limit.
class BackendSession {
public:
    explicit BackendSession(const RunConfig& config);

    // For tests: wrap or replace individual roles after construction.
    void replace_mllm(std::unique_ptr<MllmBackend> backend);
    void replace_text_llm(std::unique_ptr<MllmBackend> backend);
    void replace_t2i(std::unique_ptr<T2iBackend> backend);
    void replace_embed(std::unique_ptr<EmbedBackend> backend);

    // Schema-validated MLLM query with the repair loop. On parse/schema
    // failure the parse error is appended to the prompt and the query retried;
    // after `repair_attempts` consecutive failures raises SchemaViolation
    // carrying the last raw text. use_text_llm routes pure-text tasks to the
    // (possibly separate) text endpoint.
    MllmResult mllm_query(const MllmRequest& request, bool use_text_llm = false);

    ImageArtifact t2i_generate(const T2iRequest& request);

    // Defensively L2-normalized; checks the declared dimension.
    EmbeddingVector embed_image(const ImageArtifact& image, const std::string& model_tag);
    EmbeddingVector embed_reference(const ReferenceImage& image, const std::string& model_tag);

    Capabilities capabilities();

    const RunConfig& config() const { return config_; }
    ResponseCache& cache() { return cache_; }
    const MockWorld* mock_world() const { return world_.get(); }

    BackendCounters& mllm_counters() { return mllm_counters_; }
    BackendCounters& text_counters() { return text_counters_; }
    BackendCounters& t2i_counters() { return t2i_counters_; }
    BackendCounters& embed_counters() { return embed_counters_; }

    // Counters and cost accounting snapshot for logs and `cache stats`.
    Json stats_json() const;

private:
    std::string call_backend(const std::function<std::string()>& invoke,
                             BackendCounters& counters, const std::string& backend_id,
                             const std::string& cache_key);
    EmbeddingVector embed_bytes(const std::string& image_id, const std::string& bytes,
                                const std::string& model_tag);

    RunConfig config_;
    ResponseCache cache_;
    std::shared_ptr<const MockWorld> world_; // null when no mock role is active
    std::unique_ptr<MllmBackend> mllm_;
    std::unique_ptr<MllmBackend> text_llm_; // null -> route to mllm_
    std::unique_ptr<T2iBackend> t2i_;
    std::unique_ptr<EmbedBackend> embed_;
    CallLimiter limiter_;
    BackendCounters mllm_counters_;
    BackendCounters text_counters_;
    BackendCounters t2i_counters_;
    BackendCounters embed_counters_;
};

} // namespace repaint
