#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include <httplib.h>

#include "repaint/base64.hpp"
#include "repaint/errors.hpp"
#include "repaint/json_util.hpp"
#include "repaint/mock_backends.hpp"
#include "repaint/mock_world.hpp"

namespace repaint::test {

// In-process wire-protocol server bridging HTTP onto a MockWorld; the remote
// counterpart the HTTP backends are tested against. Optional response hooks
// let tests inject malformed payloads.
class WireServer {
public:
    explicit WireServer(const repaint::MockWorldConfig& config = {})
        : world_(std::make_shared<repaint::MockWorld>(config)) {
        server_.Post("/v1/mllm/query", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, [this](const repaint::Json& body) {
                std::vector<std::string> images;
                for (const auto& b64 : body.at("images")) {
                    images.push_back(repaint::base64_decode(b64.get<std::string>()));
                }
                std::string text =
                    repaint::mock_mllm_answer(*world_, images, body.at("prompt").get<std::string>());
                if (mllm_hook) text = mllm_hook(text);
                return repaint::Json{{"text", text}};
            });
        });
        server_.Post("/v1/t2i/generate", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, [this](const repaint::Json& body) {
                std::set<std::string> rendered =
                    world_->render(body.at("prompt").get<std::string>());
                std::vector<repaint::SceneEntry> entries;
                for (const auto& t : rendered) entries.push_back({t, ""});
                return repaint::Json{
                    {"image", repaint::base64_encode(repaint::MockWorld::encode_scene(entries))},
                    {"model", "wire-mock-t2i"}};
            });
        });
        server_.Post("/v1/embed", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, [this](const repaint::Json& body) {
                auto entries = repaint::MockWorld::parse_scene(
                    repaint::base64_decode(body.at("image").get<std::string>()));
                std::string tag = body.at("model_tag").get<std::string>();
                std::vector<double> vec =
                    world_->embed_tokens(repaint::MockWorld::flat_tokens(entries), tag);
                int dim = embed_dim_override > 0 ? embed_dim_override
                                                 : static_cast<int>(vec.size());
                return repaint::Json{{"vector", vec}, {"dim", dim}};
            });
        });
        server_.Get("/v1/capabilities", [this](const httplib::Request& req, httplib::Response& res) {
            last_auth = req.get_header_value("Authorization");
            repaint::Json caps{{"roles", {"mllm", "t2i", "embed"}},
                               {"embed_dims",
                                {{"clip-like", repaint::MockWorld::embed_dim("clip-like")},
                                 {"dino-like", repaint::MockWorld::embed_dim("dino-like")}}}};
            res.set_content(repaint::canonical_json(caps), "application/json");
        });

        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~WireServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    std::function<std::string(std::string)> mllm_hook; // rewrite MLLM text
    int embed_dim_override = 0;                        // lie about the dim
    std::atomic<int> requests{0};
    std::string last_auth;

private:
    template <typename Fn>
    void handle(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
        requests.fetch_add(1);
        last_auth = req.get_header_value("Authorization");
        try {
            repaint::Json body = repaint::parse_json(req.body);
            res.set_content(repaint::canonical_json(fn(body)), "application/json");
        } catch (const repaint::Error& e) {
            res.status = 422;
            res.set_content(repaint::canonical_json(repaint::Json{{"error", e.what()}}),
                            "application/json");
        }
    }

    std::shared_ptr<repaint::MockWorld> world_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

} // namespace repaint::test
