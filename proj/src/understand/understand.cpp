#include "repaint/understand.hpp"

#include <algorithm>

#include "repaint/concurrency.hpp"
#include "repaint/errors.hpp"
#include "repaint/log.hpp"

namespace repaint {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

} // namespace

std::string caption(BackendSession& session, const TemplateSet& templates,
                    const ReferenceImage& image) {
    MllmRequest request;
    request.images.push_back(image);
    request.prompt = templates.render("caption", {});
    request.schema = "freeform";
    std::string text = trim(session.mllm_query(request).text);
    if (text.empty()) {
        raise(ErrorCode::DegenerateScene, "backend produced an empty caption");
    }
    return text;
}

SceneExtraction extract_scene(BackendSession& session, const TemplateSet& templates,
                              const ReferenceImage& image, const std::string& caption_text) {
    MllmRequest request;
    request.images.push_back(image);
    request.prompt = templates.render("extract_scene", {{"caption", caption_text}});
    request.schema = "iut";
    MllmResult response = session.mllm_query(request);

    ImageUnderstandingTree parsed = ImageUnderstandingTree::from_json(response.parsed);

    SceneExtraction scene;
    scene.global_features = parsed.global_features;
    const IutCaps& caps = session.config().caps;
    if (static_cast<int>(scene.global_features.size()) > caps.max_global_features) {
        scene.global_features.resize(static_cast<std::size_t>(caps.max_global_features));
        scene.warnings.push_back("global features truncated to cap " +
                                 std::to_string(caps.max_global_features));
    }

    // Levels 1-2 only here; per-object features come from dedicated queries.
    for (const auto& obj : parsed.objects) {
        scene.objects.push_back({obj.id, obj.name, {}});
    }
    if (static_cast<int>(scene.objects.size()) > caps.max_objects) {
        scene.objects.resize(static_cast<std::size_t>(caps.max_objects));
        scene.warnings.push_back("objects truncated to cap " + std::to_string(caps.max_objects));
    }

    // Relations touching truncation victims are dropped; genuinely dangling
    // endpoints stay so validation can flag the backend's mistake.
    std::set<std::string> kept, truncated;
    for (const auto& obj : scene.objects) kept.insert(obj.id);
    for (const auto& obj : parsed.objects) {
        if (!kept.count(obj.id)) truncated.insert(obj.id);
    }
    for (const auto& rel : parsed.relations) {
        if (truncated.count(rel.subject_id) || truncated.count(rel.object_id)) {
            scene.warnings.push_back("dropped relation touching a truncated object (" +
                                     rel.subject_id + ", " + rel.predicate + ", " +
                                     rel.object_id + ")");
        } else {
            scene.relations.push_back(rel);
        }
    }
    return scene;
}

std::vector<LabeledFeature> extract_object_features(BackendSession& session,
                                                    const TemplateSet& templates,
                                                    const ReferenceImage& image,
                                                    const ObjectNode& object,
                                                    const std::string& caption_text,
                                                    std::vector<std::string>* warnings) {
    MllmRequest request;
    request.images.push_back(image);
    request.prompt = templates.render(
        "extract_object", {{"object_name", object.name}, {"caption", caption_text}});
    request.schema = "iut";
    MllmResult response = session.mllm_query(request);

    ImageUnderstandingTree parsed = ImageUnderstandingTree::from_json(response.parsed);
    std::vector<LabeledFeature> features;
    for (const auto& obj : parsed.objects) {
        if (obj.name == object.name || obj.id == object.id) {
            features = obj.features;
            break;
        }
    }
    const IutCaps& caps = session.config().caps;
    if (static_cast<int>(features.size()) > caps.max_features_per_object) {
        features.resize(static_cast<std::size_t>(caps.max_features_per_object));
        if (warnings != nullptr) {
            warnings->push_back("features truncated to cap " +
                                std::to_string(caps.max_features_per_object) + " for object '" +
                                object.id + "'");
        }
    }
    return features;
}

BuildOutcome build_iut(BackendSession& session, const TemplateSet& templates,
                       const ReferenceImage& image, RunStore* store) {
    BuildOutcome outcome;
    ImageUnderstandingTree& tree = outcome.tree;
    try {
        tree.caption = caption(session, templates, image);

        SceneExtraction scene = extract_scene(session, templates, image, tree.caption);
        tree.global_features = std::move(scene.global_features);
        tree.objects = std::move(scene.objects);
        tree.relations = std::move(scene.relations);
        outcome.warnings = std::move(scene.warnings);

        // Per-object feature extraction, bounded by the session's call limit.
        std::vector<std::vector<LabeledFeature>> features(tree.objects.size());
        std::vector<std::vector<std::string>> warnings(tree.objects.size());
        parallel_for(tree.objects.size(), session.config().jobs, [&](std::size_t i) {
            features[i] = extract_object_features(session, templates, image, tree.objects[i],
                                                  tree.caption, &warnings[i]);
        });
        for (std::size_t i = 0; i < tree.objects.size(); ++i) {
            tree.objects[i].features = std::move(features[i]);
            for (auto& w : warnings[i]) outcome.warnings.push_back(std::move(w));
        }

        ValidationReport report = validate_iut(tree, session.config().caps);
        if (!report.ok()) {
            raise(ErrorCode::Build, "built tree failed validation: " + report.to_string());
        }
    } catch (...) {
        if (store != nullptr) {
            store->save_json("iut.partial.json", tree.to_json());
        }
        throw;
    }

    if (store != nullptr) {
        store->save_json("iut.json", tree.to_json());
    }
    for (const auto& w : outcome.warnings) {
        log_event("understand_warning", {{"warning", w}});
    }
    return outcome;
}

Prompt synthesize_initial_prompt(BackendSession& session, const TemplateSet& templates,
                                 const ImageUnderstandingTree& tree) {
    std::vector<PromptStep> origin = {{0, "", ""}};
    if (tree.objects.empty()) {
        // Degenerate tree: the caption is the best prompt we have.
        return Prompt::make(tree.caption, origin);
    }
    MllmRequest request;
    request.prompt = templates.render("initial_prompt",
                                      {{"iut_json", canonical_json(tree.to_json())}});
    request.schema = "freeform";
    std::string text = trim(session.mllm_query(request, /*use_text_llm=*/true).text);
    if (text.empty()) {
        raise(ErrorCode::Run, "initial prompt synthesis produced empty text");
    }
    if (static_cast<int>(text.size()) > session.config().prompt_max_chars) {
        raise(ErrorCode::Validation, "initial prompt exceeds prompt_max_chars");
    }
    return Prompt::make(text, origin);
}

} // namespace repaint
