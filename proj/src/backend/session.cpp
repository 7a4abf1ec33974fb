#include "repaint/session.hpp"

#include <cmath>
#include <functional>

#include "repaint/base64.hpp"
#include "repaint/errors.hpp"
#include "repaint/hash.hpp"
#include "repaint/http_backend.hpp"
#include "repaint/log.hpp"
#include "repaint/mock_backends.hpp"
#include "repaint/schemas.hpp"

namespace repaint {

BackendSession::BackendSession(const RunConfig& config)
    : config_(config), cache_(config.cache_dir), limiter_(config.jobs) {
    bool any_mock = config.mllm.kind == "mock" || config.text_llm.kind == "mock" ||
                    config.t2i.kind == "mock" || config.embed.kind == "mock";
    if (any_mock) {
        world_ = std::make_shared<MockWorld>(config.mock_world);
    }

    if (config.mllm.kind == "mock") {
        mllm_ = std::make_unique<MockMllm>(world_);
    } else {
        mllm_ = std::make_unique<HttpMllm>(config.mllm.url, config.api_key);
    }

    // Pure-text tasks go to a separate endpoint only when one is configured;
    // otherwise they share the MLLM backend.
    if (config.text_llm.kind == "http" && !config.text_llm.url.empty()) {
        text_llm_ = std::make_unique<HttpMllm>(config.text_llm.url, config.api_key);
    } else if (config.text_llm.kind == "mock" && config.mllm.kind != "mock") {
        text_llm_ = std::make_unique<MockMllm>(world_);
    }

    if (config.t2i.kind == "mock") {
        t2i_ = std::make_unique<MockT2i>(world_);
    } else {
        t2i_ = std::make_unique<HttpT2i>(config.t2i.url, config.api_key);
    }
    if (config.embed.kind == "mock") {
        embed_ = std::make_unique<MockEmbed>(world_);
    } else {
        embed_ = std::make_unique<HttpEmbed>(config.embed.url, config.api_key);
    }
}

void BackendSession::replace_mllm(std::unique_ptr<MllmBackend> backend) { mllm_ = std::move(backend); }
void BackendSession::replace_text_llm(std::unique_ptr<MllmBackend> backend) {
    text_llm_ = std::move(backend);
}
void BackendSession::replace_t2i(std::unique_ptr<T2iBackend> backend) { t2i_ = std::move(backend); }
void BackendSession::replace_embed(std::unique_ptr<EmbedBackend> backend) {
    embed_ = std::move(backend);
}

std::string BackendSession::call_backend(const std::function<std::string()>& invoke,
                                         BackendCounters& counters,
                                         const std::string& backend_id,
                                         const std::string& cache_key) {
    if (auto cached = cache_.get(backend_id, cache_key)) {
        counters.cache_hits.fetch_add(1);
        log_event("backend_call", {{"backend", backend_id}, {"cache", "hit"}});
        return *cached;
    }

    int tries = config_.transport_retries + 1;
    for (int attempt = 1;; ++attempt) {
        limiter_.acquire();
        try {
            counters.invocations.fetch_add(1);
            std::string response = invoke();
            limiter_.release();
            cache_.put(backend_id, cache_key, response);
            log_event("backend_call",
                      {{"backend", backend_id}, {"cache", "miss"}, {"attempt", std::to_string(attempt)}});
            return response;
        } catch (const Error& e) {
            limiter_.release();
            if (e.code() != ErrorCode::BackendUnavailable || attempt >= tries) {
                counters.failures.fetch_add(1);
                throw;
            }
        } catch (...) {
            limiter_.release();
            counters.failures.fetch_add(1);
            throw;
        }
    }
}

MllmResult BackendSession::mllm_query(const MllmRequest& request, bool use_text_llm) {
    MllmBackend* backend = (use_text_llm && text_llm_) ? text_llm_.get() : mllm_.get();
    BackendCounters& counters = (use_text_llm && text_llm_) ? text_counters_ : mllm_counters_;

    MllmRequest attempt_request = request;
    std::string last_text;
    std::vector<std::string> last_problems;
    for (int attempt = 1; attempt <= config_.repair_attempts; ++attempt) {
        std::string cache_key =
            ResponseCache::key_for(backend->id(), canonical_json(attempt_request.canonical()));
        std::string body =
            call_backend([&] { return backend->query(attempt_request); }, counters,
                         backend->id(), cache_key);

        Json envelope = parse_json(body);
        if (!envelope.is_object() || !envelope.contains("text") || !envelope["text"].is_string()) {
            raise(ErrorCode::Protocol, "mllm response must be {\"text\": str}");
        }
        MllmResult result;
        result.text = envelope["text"].get<std::string>();
        result.repair_attempts = attempt - 1;
        if (request.schema == "freeform") {
            return result;
        }

        last_text = result.text;
        last_problems.clear();
        Json parsed = Json::parse(result.text, nullptr, false);
        if (parsed.is_discarded()) {
            last_problems.push_back("response is not valid JSON");
        } else {
            last_problems = check_schema(request.schema, parsed);
            if (last_problems.empty()) {
                result.parsed = std::move(parsed);
                return result;
            }
        }

        counters.repairs.fetch_add(1);
        std::string note = "\n\nYour previous reply could not be used: ";
        for (std::size_t i = 0; i < last_problems.size(); ++i) {
            if (i > 0) note += "; ";
            note += last_problems[i];
        }
        note += ". Respond with valid JSON matching the required schema only.";
        attempt_request.prompt = request.prompt + note + "\n(attempt " +
                                 std::to_string(attempt + 1) + ")";
    }

    std::string detail = "schema '" + request.schema + "' violated after " +
                         std::to_string(config_.repair_attempts) + " attempts: ";
    for (std::size_t i = 0; i < last_problems.size(); ++i) {
        if (i > 0) detail += "; ";
        detail += last_problems[i];
    }
    detail += "; last raw text: " + last_text;
    raise(ErrorCode::SchemaViolation, detail);
}

ImageArtifact BackendSession::t2i_generate(const T2iRequest& request) {
    if (request.prompt.empty()) {
        raise(ErrorCode::Validation, "t2i prompt must be non-empty");
    }
    std::string cache_key =
        ResponseCache::key_for(t2i_->id(), canonical_json(request.canonical()));
    std::string body = call_backend([&] { return t2i_->generate(request); }, t2i_counters_,
                                    t2i_->id(), cache_key);
    Json envelope = parse_json(body);
    if (!envelope.is_object() || !envelope.contains("image") || !envelope["image"].is_string()) {
        raise(ErrorCode::Protocol, "t2i response must be {\"image\": base64, \"model\": str}");
    }
    ImageArtifact artifact;
    artifact.bytes = base64_decode(envelope["image"].get<std::string>());
    artifact.id = sha256_hex(artifact.bytes);
    artifact.model = envelope.value("model", t2i_->id());
    return artifact;
}

EmbeddingVector BackendSession::embed_bytes(const std::string& image_id, const std::string& bytes,
                                            const std::string& model_tag) {
    EmbedRequest request{image_id, bytes, model_tag};
    std::string cache_key =
        ResponseCache::key_for(embed_->id(), canonical_json(request.canonical()));
    std::string body = call_backend([&] { return embed_->embed(request); }, embed_counters_,
                                    embed_->id(), cache_key);
    Json envelope = parse_json(body);
    if (!envelope.is_object() || !envelope.contains("vector") || !envelope["vector"].is_array() ||
        !envelope.contains("dim")) {
        raise(ErrorCode::Protocol, "embed response must be {\"vector\": [...], \"dim\": int}");
    }
    EmbeddingVector vec;
    vec.model_tag = model_tag;
    vec.values = envelope["vector"].get<std::vector<double>>();
    vec.dim = envelope["dim"].get<int>();
    if (static_cast<int>(vec.values.size()) != vec.dim) {
        raise(ErrorCode::Protocol, "embedding length does not match its declared dim");
    }
    Capabilities caps = embed_->capabilities();
    auto declared = caps.embed_dims.find(model_tag);
    if (declared != caps.embed_dims.end() && declared->second != vec.dim) {
        raise(ErrorCode::Protocol, "embedding dim " + std::to_string(vec.dim) +
                                       " does not match declared dim " +
                                       std::to_string(declared->second) + " for tag '" +
                                       model_tag + "'");
    }

    double norm_sq = 0.0;
    for (double x : vec.values) {
        if (!std::isfinite(x)) raise(ErrorCode::Protocol, "embedding has non-finite entries");
        norm_sq += x * x;
    }
    double norm = std::sqrt(norm_sq);
    if (norm < 1e-12) raise(ErrorCode::DegenerateEmbedding, "zero embedding vector");
    for (auto& x : vec.values) x /= norm;
    return vec;
}

EmbeddingVector BackendSession::embed_image(const ImageArtifact& image,
                                            const std::string& model_tag) {
    return embed_bytes(image.id, image.bytes, model_tag);
}

EmbeddingVector BackendSession::embed_reference(const ReferenceImage& image,
                                                const std::string& model_tag) {
    return embed_bytes(image.id, image.bytes, model_tag);
}

Capabilities BackendSession::capabilities() { return embed_->capabilities(); }

Json BackendSession::stats_json() const {
    auto role = [](const BackendCounters& c, double unit_cost) {
        return Json{{"invocations", c.invocations.load()},
                    {"cache_hits", c.cache_hits.load()},
                    {"failures", c.failures.load()},
                    {"repairs", c.repairs.load()},
                    {"cost", unit_cost * static_cast<double>(c.invocations.load())}};
    };
    return Json{{"mllm", role(mllm_counters_, config_.mllm.unit_cost)},
                {"text_llm", role(text_counters_, config_.text_llm.unit_cost)},
                {"t2i", role(t2i_counters_, config_.t2i.unit_cost)},
                {"embed", role(embed_counters_, config_.embed.unit_cost)}};
}

} // namespace repaint
