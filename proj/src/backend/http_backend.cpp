#include "repaint/http_backend.hpp"

#include <atomic>

#include <httplib.h>

#include "repaint/base64.hpp"
#include "repaint/errors.hpp"
#include "repaint/hash.hpp"
#include "repaint/json_util.hpp"

namespace repaint {

namespace {

std::atomic<std::uint64_t> g_network_calls{0};

// backend id = role + url hash prefix, so caches for different servers never
// collide.
std::string backend_id(const char* role, const std::string& url) {
    return std::string(role) + "-" + sha256_hex(url).substr(0, 12);
}

std::string http_post(const std::string& base_url, const std::string& api_key,
                      const std::string& path, const std::string& body) {
    g_network_calls.fetch_add(1);
    httplib::Client client(base_url);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
        raise(ErrorCode::BackendUnavailable,
              "POST " + base_url + path + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 422) {
        // Structured refusal: {"error": "..."}; surface the message.
        Json err = Json::parse(res->body, nullptr, false);
        std::string message = err.is_object() ? err.value("error", res->body) : res->body;
        raise(ErrorCode::BackendUnavailable, "backend refused request: " + message);
    }
    if (res->status != 200) {
        raise(ErrorCode::BackendUnavailable,
              "POST " + base_url + path + " returned status " + std::to_string(res->status));
    }
    return res->body;
}

} // namespace

std::uint64_t http_network_calls() { return g_network_calls.load(); }

HttpMllm::HttpMllm(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string HttpMllm::id() const { return backend_id("http-mllm", base_url_); }

std::string HttpMllm::query(const MllmRequest& request) {
    Json images = Json::array();
    for (const auto& img : request.images) images.push_back(base64_encode(img.bytes));
    Json body{{"images", images},
              {"prompt", request.prompt},
              {"schema", request.schema == "freeform" ? Json() : Json(request.schema)},
              {"temperature", request.temperature},
              {"max_tokens", request.max_tokens}};
    return http_post(base_url_, api_key_, "/v1/mllm/query", canonical_json(body));
}

HttpT2i::HttpT2i(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string HttpT2i::id() const { return backend_id("http-t2i", base_url_); }

std::string HttpT2i::generate(const T2iRequest& request) {
    Json body{{"prompt", request.prompt},
              {"negative_prompt",
               request.negative_prompt.empty() ? Json() : Json(request.negative_prompt)},
              {"seed", request.seed},
              {"width", request.width},
              {"height", request.height},
              {"steps", request.steps}};
    return http_post(base_url_, api_key_, "/v1/t2i/generate", canonical_json(body));
}

HttpEmbed::HttpEmbed(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string HttpEmbed::id() const { return backend_id("http-embed", base_url_); }

std::string HttpEmbed::embed(const EmbedRequest& request) {
    Json body{{"image", base64_encode(request.image_bytes)}, {"model_tag", request.model_tag}};
    return http_post(base_url_, api_key_, "/v1/embed", canonical_json(body));
}

Capabilities HttpEmbed::capabilities() {
    return Capabilities::from_json(fetch_capabilities(base_url_, api_key_));
}

Json fetch_capabilities(const std::string& base_url, const std::string& api_key) {
    g_network_calls.fetch_add(1);
    httplib::Client client(base_url);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
    auto res = client.Get("/v1/capabilities", headers);
    if (!res || res->status != 200) {
        raise(ErrorCode::BackendUnavailable, "GET " + base_url + "/v1/capabilities failed");
    }
    return parse_json(res->body);
}

} // namespace repaint
