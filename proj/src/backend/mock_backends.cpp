#include "repaint/mock_backends.hpp"

#include <sstream>

#include "repaint/base64.hpp"
#include "repaint/errors.hpp"
#include "repaint/hash.hpp"

namespace repaint {

std::string marker_value(const std::string& prompt, const std::string& marker) {
    std::istringstream in(prompt);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(marker, 0) == 0) {
            std::string value = line.substr(marker.size());
            // trim
            std::size_t begin = value.find_first_not_of(" \t");
            std::size_t end = value.find_last_not_of(" \t\r");
            if (begin == std::string::npos) return "";
            return value.substr(begin, end - begin + 1);
        }
    }
    return "";
}

namespace {

// Lines between "Directives:" and the final "Prompt:" line.
std::vector<std::string> directive_lines(const std::string& prompt) {
    std::istringstream in(prompt);
    std::string line;
    std::vector<std::string> out;
    bool capture = false;
    while (std::getline(in, line)) {
        if (line.rfind("Directives:", 0) == 0) {
            capture = true;
            continue;
        }
        if (line.rfind("Prompt:", 0) == 0) break;
        if (capture) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) out.push_back(line);
        }
    }
    return out;
}

// The initial-prompt template carries the serialized tree after an "IUT:" line.
Json iut_payload(const std::string& prompt) {
    auto pos = prompt.find("IUT:");
    if (pos == std::string::npos) {
        raise(ErrorCode::Protocol, "mock mllm: prompt carries no IUT payload");
    }
    auto start = prompt.find('\n', pos);
    if (start == std::string::npos) {
        raise(ErrorCode::Protocol, "mock mllm: empty IUT payload");
    }
    return parse_json(std::string_view(prompt).substr(start + 1));
}

} // namespace

std::string mock_mllm_answer(const MockWorld& world, const std::vector<std::string>& image_bytes,
                             const std::string& prompt) {
    std::string task = marker_value(prompt, "Task:");
    if (task.empty()) {
        raise(ErrorCode::Protocol, "mock mllm: prompt carries no Task marker");
    }

    auto scene_at = [&](std::size_t index) {
        if (index >= image_bytes.size()) {
            raise(ErrorCode::Protocol, "mock mllm: task '" + task + "' expects an image");
        }
        return MockWorld::parse_scene(image_bytes[index]);
    };

    if (task == "caption") {
        return world.caption_for(scene_at(0));
    }
    if (task == "extract_scene") {
        return canonical_json(world.iut_json(scene_at(0)));
    }
    if (task == "extract_object") {
        std::string name = marker_value(prompt, "Object:");
        return canonical_json(world.object_features_json(scene_at(0), name));
    }
    if (task == "initial_prompt") {
        return world.initial_prompt_from_iut(iut_payload(prompt));
    }
    if (task == "paraphrase") {
        int variant = std::stoi(marker_value(prompt, "Variant:"));
        return world.paraphrase(marker_value(prompt, "Prompt:"), variant);
    }
    if (task == "revise") {
        return world.revise(marker_value(prompt, "Prompt:"), directive_lines(prompt));
    }
    if (task == "feedback") {
        Aspect aspect = aspect_from_name(marker_value(prompt, "Aspect:"));
        auto reference = scene_at(0);
        auto candidate = MockWorld::flat_tokens(scene_at(1));
        return canonical_json(world.feedback_json(reference, candidate, aspect));
    }
    if (task == "judge") {
        auto reference = MockWorld::flat_tokens(scene_at(0));
        auto candidate = MockWorld::flat_tokens(scene_at(1));
        return canonical_json(world.judge_json(reference, candidate));
    }
    raise(ErrorCode::Protocol, "mock mllm: unknown task '" + task + "'");
}

std::string MockMllm::query(const MllmRequest& request) {
    std::vector<std::string> images;
    for (const auto& img : request.images) images.push_back(img.bytes);
    std::string text = mock_mllm_answer(*world_, images, request.prompt);
    return canonical_json(Json{{"text", text}});
}

std::string MockT2i::generate(const T2iRequest& request) {
    if (request.prompt.empty()) {
        raise(ErrorCode::Validation, "t2i prompt must be non-empty");
    }
    std::set<std::string> rendered = world_->render(request.prompt);
    std::vector<SceneEntry> entries;
    for (const auto& t : rendered) entries.push_back({t, ""});
    std::string bytes = MockWorld::encode_scene(std::move(entries));
    return canonical_json(Json{{"image", base64_encode(bytes)}, {"model", id()}});
}

std::string MockEmbed::embed(const EmbedRequest& request) {
    auto entries = MockWorld::parse_scene(request.image_bytes);
    std::vector<double> vec = world_->embed_tokens(MockWorld::flat_tokens(entries),
                                                   request.model_tag);
    return canonical_json(Json{{"vector", vec}, {"dim", static_cast<int>(vec.size())}});
}

Capabilities MockEmbed::capabilities() {
    Capabilities caps;
    caps.roles = {"mllm", "t2i", "embed"};
    caps.embed_dims["clip-like"] = MockWorld::embed_dim("clip-like");
    caps.embed_dims["dino-like"] = MockWorld::embed_dim("dino-like");
    return caps;
}

} // namespace repaint
