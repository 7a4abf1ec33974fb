#include <doctest.h>

#include "repaint/mock_backends.hpp"
#include "repaint/understand.hpp"

#include "support/fixtures.hpp"
#include "support/scene_gen.hpp"
#include "support/scripted.hpp"
#include "support/test_util.hpp"

using namespace repaint;
using namespace repaint::test;

namespace {

ReferenceImage scene_image(const std::vector<SceneEntry>& entries) {
    return ReferenceImage::from_bytes(MockWorld::encode_scene(entries));
}

std::set<std::string> tree_tokens(const ImageUnderstandingTree& tree) {
    std::string blob;
    for (const auto& g : tree.global_features) blob += g.value + " ";
    for (const auto& o : tree.objects) {
        blob += o.name + " ";
        for (const auto& f : o.features) blob += f.value + " ";
    }
    return MockWorld::text_tokens(blob);
}

} // namespace

TEST_CASE("caption joins sorted primary tokens") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    CHECK(caption(session, templates, scene_image({{"cat", ""}, {"watercolor", ""}})) ==
          "cat, watercolor");
    // bound modifiers are dropped from the caption
    CHECK(caption(session, templates, scene_image({{"blue", "cat"}, {"watercolor", ""}})) ==
          "cat, watercolor");
}

TEST_CASE("caption of an empty scene raises DegenerateScene") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    try {
        caption(session, templates, scene_image({}));
        FAIL("expected DegenerateScene");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateScene);
    }
}

TEST_CASE("caption trims surrounding whitespace from backend text") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    session.replace_mllm(
        std::make_unique<ScriptedMllm>(std::deque<std::string>{"  a cat in a park \n"}));
    CHECK(caption(session, templates, scene_image({{"cat", ""}})) == "a cat in a park");
}

TEST_CASE("extract_scene lists objects and relations per the mock world table") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    SceneExtraction scene = extract_scene(
        session, templates, scene_image({{"cat", ""}, {"dog", ""}, {"park", ""}}), "caption");
    REQUIRE(scene.objects.size() == 3); // cat, dog, park
    CHECK(scene.objects[0].name == "cat");
    CHECK(scene.objects[1].name == "dog");
    CHECK(scene.objects[2].name == "park");
    REQUIRE(scene.relations.size() == 2);
    CHECK(scene.relations[0] == Relation{"cat", "in", "park"});
    CHECK(scene.relations[1] == Relation{"dog", "in", "park"});
    for (const auto& obj : scene.objects) CHECK(obj.features.empty()); // levels 1-2 only
}

TEST_CASE("single-object scene has no relations") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    SceneExtraction scene = extract_scene(session, templates, scene_image({{"cat", ""}}), "c");
    CHECK(scene.objects.size() == 1);
    CHECK(scene.relations.empty());
}

TEST_CASE("extract_scene truncates to the object cap with a warning") {
    TempDir dir;
    RunConfig config = mock_config(dir);
    config.caps.max_objects = 10;
    BackendSession session(config);
    TemplateSet templates;

    // 12 distinct object tokens
    std::vector<SceneEntry> entries;
    for (const char* name : {"cat", "dog", "fox", "owl", "rabbit", "horse", "heron", "lynx",
                             "boat", "lantern", "bridge", "tower"}) {
        entries.push_back({name, ""});
    }
    SceneExtraction scene = extract_scene(session, templates, scene_image(entries), "c");
    CHECK(scene.objects.size() == 10);
    REQUIRE_FALSE(scene.warnings.empty());
    CHECK(scene.warnings[0].find("truncated") != std::string::npos);
}

TEST_CASE("object features come from bound modifiers") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    ReferenceImage image = scene_image({{"blue", "cat"}, {"cat", ""}});
    ObjectNode cat{"cat", "cat", {}};
    auto features = extract_object_features(session, templates, image, cat, "caption");
    REQUIRE(features.size() == 1);
    CHECK(features[0] == LabeledFeature{"color", "blue"});

    ObjectNode bare{"forest", "forest", {}};
    ReferenceImage plain = scene_image({{"forest", ""}});
    CHECK(extract_object_features(session, templates, plain, bare, "caption").empty());
}

TEST_CASE("nine modifiers truncate to the feature cap with a warning") {
    TempDir dir;
    RunConfig config = mock_config(dir);
    config.caps.max_features_per_object = 8;
    BackendSession session(config);
    TemplateSet templates;

    // 9 distinct feature subclasses bound to one object
    std::vector<SceneEntry> entries = {{"cat", ""},      {"blue", "cat"},    {"fluffy", "cat"},
                                       {"wooden", "cat"}, {"striped", "cat"}, {"sitting", "cat"},
                                       {"tiny", "cat"},   {"young", "cat"},   {"gloomy", "cat"},
                                       {"gilded", "cat"}};
    ObjectNode cat{"cat", "cat", {}};
    std::vector<std::string> warnings;
    auto features =
        extract_object_features(session, templates, scene_image(entries), cat, "c", &warnings);
    CHECK(features.size() == 8);
    REQUIRE_FALSE(warnings.empty());
    CHECK(warnings[0].find("truncated") != std::string::npos);
}

TEST_CASE("build_iut composes a valid tree from a modifier scene") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    BuildOutcome outcome =
        build_iut(session, templates, scene_image({{"blue", "cat"}, {"watercolor", ""}}));
    const ImageUnderstandingTree& tree = outcome.tree;
    CHECK(tree.caption == "cat, watercolor");
    REQUIRE(tree.objects.size() == 1);
    CHECK(tree.objects[0].features == std::vector<LabeledFeature>{{"color", "blue"}});
    REQUIRE(tree.global_features.size() == 1);
    CHECK(tree.global_features[0] == LabeledFeature{"style", "watercolor"});
    CHECK(validate_iut(tree, session.config().caps).ok());
}

TEST_CASE("single-token scene builds a one-object tree that validates") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    BuildOutcome outcome = build_iut(session, templates, scene_image({{"cat", ""}}));
    CHECK(outcome.tree.objects.size() == 1);
    CHECK(outcome.tree.relations.empty());
    CHECK(validate_iut(outcome.tree).ok());
}

TEST_CASE("a backend emitting dangling relations surfaces BuildError with the report") {
    TempDir dir;
    RunConfig config = mock_config(dir);
    BackendSession session(config);
    TemplateSet templates;

    Json bad_tree{{"caption", "cat"},
                  {"global_features", Json::array()},
                  {"objects", Json::array({Json{{"id", "cat"}, {"name", "cat"},
                                                {"features", Json::array()}}})},
                  {"relations", Json::array({Json{{"subject", "cat"},
                                                  {"predicate", "in"},
                                                  {"object", "ghost"}}})}};
    // caption reply, then the faulty scene, then object features
    session.replace_mllm(std::make_unique<ScriptedMllm>(
        std::deque<std::string>{"cat", canonical_json(bad_tree),
                                canonical_json(MockWorld(config.mock_world)
                                                   .object_features_json({{"cat", ""}}, "cat"))}));

    RunStore store(dir.sub("run"));
    try {
        build_iut(session, templates, scene_image({{"cat", ""}}), &store);
        FAIL("expected BuildError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Build);
        CHECK(std::string(e.what()).find("dangling relation endpoint") != std::string::npos);
    }
    CHECK(store.has("iut.partial.json")); // partial tree persisted for debugging
}

TEST_CASE("initial prompt contains every token and relation phrase") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    BuildOutcome outcome = build_iut(
        session, templates,
        scene_image({{"blue", "cat"}, {"cat", ""}, {"forest", ""}, {"watercolor", ""}}));
    Prompt prompt = synthesize_initial_prompt(session, templates, outcome.tree);
    for (const char* token : {"cat", "blue", "watercolor", "forest"}) {
        CHECK(prompt.text.find(token) != std::string::npos);
    }
    CHECK(prompt.text.find("cat in forest") != std::string::npos); // predicate phrase
    CHECK(prompt.depth() == 0);
    CHECK(prompt.lineage.size() == 1);
}

TEST_CASE("empty-object tree falls back to the caption as initial prompt") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    ImageUnderstandingTree tree;
    tree.caption = "a painting of nothing";
    Prompt prompt = synthesize_initial_prompt(session, templates, tree);
    CHECK(prompt.text == tree.caption);
}

TEST_CASE("completeness: every scene token appears in the built tree") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    for (int i = 0; i < 200; ++i) {
        GeneratedScene scene = random_scene(31, i);
        BuildOutcome outcome = build_iut(session, templates, scene_image(scene.entries));
        CHECK(validate_iut(outcome.tree, session.config().caps).ok());
        std::set<std::string> present = tree_tokens(outcome.tree);
        for (const auto& token : scene.flat) {
            CHECK_MESSAGE(present.count(token) == 1, "missing token " << token);
        }
        if (!scene.flat.empty()) {
            Prompt prompt = synthesize_initial_prompt(session, templates, outcome.tree);
            CHECK(jaccard(MockWorld::text_tokens(prompt.text), scene.flat) == 1.0);
        }
    }
}

TEST_CASE("template assets on disk match the embedded copies") {
    TemplateSet embedded;
    TemplateSet from_disk = TemplateSet::load(std::string(REPAINT_SOURCE_DIR) + "/templates");
    for (const auto& name : TemplateSet::names()) {
        CHECK_MESSAGE(embedded.raw(name) == from_disk.raw(name), "template " << name);
    }
}

TEST_CASE("placeholder rendering substitutes all occurrences") {
    TemplateSet templates;
    std::string rendered = templates.render(
        "extract_object", {{"object_name", "cat"}, {"caption", "a cat"}});
    CHECK(rendered.find("Object: cat") != std::string::npos);
    CHECK(rendered.find("{{object_name}}") == std::string::npos);
    CHECK(rendered.find("{{caption}}") == std::string::npos);
}
