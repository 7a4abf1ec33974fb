#include "repaint/backend.hpp"

namespace repaint {

Json MllmRequest::canonical() const {
    Json image_ids = Json::array();
    for (const auto& img : images) image_ids.push_back(img.id);
    return Json{{"images", image_ids},
                {"prompt", prompt},
                {"schema", schema},
                {"temperature", temperature},
                {"max_tokens", max_tokens}};
}

Json T2iRequest::canonical() const {
    return Json{{"prompt", prompt},
                {"negative_prompt", negative_prompt.empty() ? Json() : Json(negative_prompt)},
                {"seed", seed},
                {"width", width},
                {"height", height},
                {"steps", steps}};
}

Json EmbedRequest::canonical() const {
    return Json{{"image", image_id}, {"model_tag", model_tag}};
}

Json Capabilities::to_json() const {
    Json dims = Json::object();
    for (const auto& [tag, dim] : embed_dims) dims[tag] = dim;
    return Json{{"roles", roles}, {"embed_dims", dims}};
}

Capabilities Capabilities::from_json(const Json& j) {
    Capabilities caps;
    caps.roles = j.at("roles").get<std::vector<std::string>>();
    for (auto it = j.at("embed_dims").begin(); it != j.at("embed_dims").end(); ++it) {
        caps.embed_dims[it.key()] = it.value().get<int>();
    }
    return caps;
}

} // namespace repaint
