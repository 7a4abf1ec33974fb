#include "repaint/types.hpp"

#include <algorithm>

#include "repaint/errors.hpp"
#include "repaint/fs_util.hpp"
#include "repaint/hash.hpp"

namespace repaint {

const char* aspect_name(Aspect a) {
    switch (a) {
        case Aspect::Overall: return "overall";
        case Aspect::Style: return "style";
        case Aspect::Color: return "color";
        case Aspect::Detail: return "detail";
    }
    return "overall";
}

Aspect aspect_from_name(const std::string& name) {
    if (name == "overall") return Aspect::Overall;
    if (name == "style") return Aspect::Style;
    if (name == "color") return Aspect::Color;
    if (name == "detail") return Aspect::Detail;
    raise(ErrorCode::Validation, "unknown aspect: " + name);
}

namespace {

Json features_to_json(const std::vector<LabeledFeature>& features) {
    Json arr = Json::array();
    for (const auto& f : features) {
        arr.push_back(Json{{"label", f.label}, {"value", f.value}});
    }
    return arr;
}

std::vector<LabeledFeature> features_from_json(const Json& arr) {
    std::vector<LabeledFeature> out;
    for (const auto& f : arr) {
        out.push_back({f.at("label").get<std::string>(), f.at("value").get<std::string>()});
    }
    return out;
}

} // namespace

Json ImageUnderstandingTree::to_json() const {
    Json objs = Json::array();
    for (const auto& o : objects) {
        objs.push_back(Json{{"id", o.id}, {"name", o.name}, {"features", features_to_json(o.features)}});
    }
    Json rels = Json::array();
    for (const auto& r : relations) {
        rels.push_back(Json{{"subject", r.subject_id}, {"predicate", r.predicate}, {"object", r.object_id}});
    }
    return Json{{"caption", caption},
                {"global_features", features_to_json(global_features)},
                {"objects", objs},
                {"relations", rels}};
}

ImageUnderstandingTree ImageUnderstandingTree::from_json(const Json& j) {
    ImageUnderstandingTree tree;
    tree.caption = j.at("caption").get<std::string>();
    tree.global_features = features_from_json(j.at("global_features"));
    for (const auto& o : j.at("objects")) {
        ObjectNode node;
        node.id = o.at("id").get<std::string>();
        node.name = o.at("name").get<std::string>();
        node.features = features_from_json(o.at("features"));
        tree.objects.push_back(std::move(node));
    }
    for (const auto& r : j.at("relations")) {
        tree.relations.push_back({r.at("subject").get<std::string>(),
                                  r.at("predicate").get<std::string>(),
                                  r.at("object").get<std::string>()});
    }
    return tree;
}

namespace {

constexpr std::string_view kPngSignature = "\x89PNG\r\n\x1a\n";
constexpr std::string_view kMockSceneMagic = "mock-scene/v1";

std::uint32_t read_be32(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

} // namespace

ReferenceImage ReferenceImage::from_bytes(std::string bytes, std::string category) {
    ReferenceImage img;
    img.category = std::move(category);
    if (bytes.size() >= 24 && std::string_view(bytes).substr(0, 8) == kPngSignature) {
        const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
        img.width = static_cast<int>(read_be32(p + 16));
        img.height = static_cast<int>(read_be32(p + 20));
    } else if (std::string_view(bytes).substr(0, kMockSceneMagic.size()) == kMockSceneMagic) {
        // Synthetic token-set images carry no raster dimensions.
        img.width = 512;
        img.height = 512;
    } else {
        raise(ErrorCode::Io, "unrecognized image format (expected PNG or mock-scene)");
    }
    if (img.width < 1 || img.height < 1) {
        raise(ErrorCode::Validation, "image dimensions must be >= 1");
    }
    img.id = sha256_hex(bytes);
    img.bytes = std::move(bytes);
    return img;
}

ReferenceImage ReferenceImage::from_file(const std::string& path, std::string category) {
    return from_bytes(read_file(path), std::move(category));
}

Prompt Prompt::make(std::string text, std::vector<PromptStep> lineage) {
    Prompt p;
    p.text = std::move(text);
    p.lineage = std::move(lineage);
    Json lineage_json = Json::array();
    for (const auto& step : p.lineage) {
        lineage_json.push_back(Json{{"iteration", step.iteration},
                                    {"aspect", step.aspect},
                                    {"parent", step.parent_id}});
    }
    p.id = content_id(Json{{"text", p.text}, {"lineage", lineage_json}});
    return p;
}

Prompt Prompt::derive(std::string new_text, int iteration, std::string aspect) const {
    std::vector<PromptStep> steps = lineage;
    steps.push_back({iteration, std::move(aspect), id});
    return Prompt::make(std::move(new_text), std::move(steps));
}

int Prompt::depth() const {
    int depth = 0;
    for (const auto& step : lineage) depth = std::max(depth, step.iteration);
    return depth;
}

Json Prompt::to_json() const {
    Json lineage_json = Json::array();
    for (const auto& step : lineage) {
        lineage_json.push_back(Json{{"iteration", step.iteration},
                                    {"aspect", step.aspect},
                                    {"parent", step.parent_id}});
    }
    return Json{{"text", text}, {"lineage", lineage_json}, {"id", id}};
}

Prompt Prompt::from_json(const Json& j) {
    Prompt p;
    p.text = j.at("text").get<std::string>();
    for (const auto& s : j.at("lineage")) {
        p.lineage.push_back({s.at("iteration").get<int>(), s.at("aspect").get<std::string>(),
                             s.at("parent").get<std::string>()});
    }
    p.id = j.at("id").get<std::string>();
    return p;
}

Json Feedback::to_json() const {
    return Json{{"aspect", aspect_name(aspect)},
                {"directives", directives},
                {"source_candidate", source_candidate}};
}

Feedback Feedback::from_json(const Json& j) {
    Feedback f;
    f.aspect = aspect_from_name(j.at("aspect").get<std::string>());
    f.directives = j.at("directives").get<std::vector<std::string>>();
    f.source_candidate = j.value("source_candidate", "");
    return f;
}

} // namespace repaint
