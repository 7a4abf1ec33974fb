#pragma once

#include <cstdint>
#include <string>

#include "repaint/backend.hpp"

namespace repaint {

// Wire protocol (JSON bodies, exact field names):
//   POST /v1/mllm/query    {"images":[base64...], "prompt":str, "schema":str|null,
//                           "temperature":num, "max_tokens":int}      -> {"text":str}
//   POST /v1/t2i/generate  {"prompt":str, "negative_prompt":str|null, "seed":int,
//                           "width":int, "height":int, "steps":int}   -> {"image":base64, "model":str}
//   POST /v1/embed         {"image":base64, "model_tag":str}          -> {"vector":[num...], "dim":int}
//   GET  /v1/capabilities                                             -> {"roles":[...], "embed_dims":{tag:int}}
// An api key, when set, is sent as a bearer token.

// Total HTTP requests issued by this process; lets tests assert that --mock
// runs perform zero network activity.
std::uint64_t http_network_calls();

class HttpMllm : public MllmBackend {
public:
    HttpMllm(std::string base_url, std::string api_key);
    std::string id() const override;
    std::string query(const MllmRequest& request) override;

private:
    std::string base_url_;
    std::string api_key_;
};

class HttpT2i : public T2iBackend {
public:
    HttpT2i(std::string base_url, std::string api_key);
    std::string id() const override;
    std::string generate(const T2iRequest& request) override;

private:
    std::string base_url_;
    std::string api_key_;
};

class HttpEmbed : public EmbedBackend {
public:
    HttpEmbed(std::string base_url, std::string api_key);
    std::string id() const override;
    std::string embed(const EmbedRequest& request) override;
    Capabilities capabilities() override;

private:
    std::string base_url_;
    std::string api_key_;
};

// Shared by doctor: fetch /v1/capabilities from an arbitrary base url.
Json fetch_capabilities(const std::string& base_url, const std::string& api_key);

} // namespace repaint
