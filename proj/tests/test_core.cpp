#include <doctest.h>

#include "repaint/base64.hpp"
#include "repaint/config.hpp"
#include "repaint/hash.hpp"
#include "repaint/json_util.hpp"
#include "repaint/mock_world.hpp"
#include "repaint/rng.hpp"
#include "repaint/types.hpp"
#include "repaint/validate.hpp"

#include "support/oracles.hpp"
#include "support/scene_gen.hpp"

using namespace repaint;
using namespace repaint::test;

namespace {

ImageUnderstandingTree minimal_tree() {
    ImageUnderstandingTree tree;
    tree.caption = "cat";
    return tree;
}

ImageUnderstandingTree cat_tree() {
    ImageUnderstandingTree tree;
    tree.caption = "cat, forest, watercolor";
    tree.global_features = {{"style", "watercolor"}};
    tree.objects = {{"cat", "cat", {{"color", "blue"}}}, {"forest", "forest", {}}};
    tree.relations = {{"cat", "in", "forest"}};
    return tree;
}

// Random JSON documents for the serializer comparison.
Json random_json(DetRng& rng, int depth) {
    double roll = rng.unit();
    if (depth <= 0 || roll < 0.35) {
        switch (rng.below(5)) {
            case 0: return Json(static_cast<std::int64_t>(rng.next_u64() % 100000) - 50000);
            case 1: return Json(rng.symmetric() * 1e6);
            case 2: return Json(rng.unit() < 0.5);
            case 3: return Json();
            default: {
                std::string s;
                std::size_t len = rng.below(12);
                for (std::size_t i = 0; i < len; ++i) {
                    s.push_back(static_cast<char>('a' + rng.below(26)));
                }
                if (rng.unit() < 0.2) s += "\"\\\n\ttail";
                return Json(s);
            }
        }
    }
    if (roll < 0.65) {
        Json arr = Json::array();
        std::size_t n = rng.below(5);
        for (std::size_t i = 0; i < n; ++i) arr.push_back(random_json(rng, depth - 1));
        return arr;
    }
    Json obj = Json::object();
    std::size_t n = rng.below(5);
    for (std::size_t i = 0; i < n; ++i) {
        std::string key;
        std::size_t len = 1 + rng.below(8);
        for (std::size_t j = 0; j < len; ++j) key.push_back(static_cast<char>('a' + rng.below(26)));
        obj[key] = random_json(rng, depth - 1);
    }
    return obj;
}

} // namespace

TEST_CASE("canonical_json is key-order independent") {
    Json a = parse_json(R"({"b":1,"a":2})");
    Json b = parse_json(R"({"a":2,"b":1})");
    CHECK(canonical_json(a) == canonical_json(b));
    CHECK(canonical_json(a) == R"({"a":2,"b":1})");
}

TEST_CASE("canonical_json of empty object") {
    CHECK(canonical_json(Json::object()) == "{}");
    CHECK(canonical_json(Json::array()) == "[]");
}

TEST_CASE("canonical_json matches the independent reference serializer") {
    DetRng rng({"canonical-vs-reference"});
    for (int i = 0; i < 100; ++i) {
        Json doc = random_json(rng, 4);
        CHECK(canonical_json(doc) == reference_canonical_json(doc));
    }
}

TEST_CASE("canonical_json is idempotent through a parse round-trip") {
    DetRng rng({"canonical-idempotent"});
    for (int i = 0; i < 250; ++i) {
        Json doc = random_json(rng, 4);
        std::string once = canonical_json(doc);
        std::string twice = canonical_json(parse_json(once));
        CHECK(once == twice);
    }
}

TEST_CASE("canonical_json rejects non-finite numbers") {
    Json j;
    j["x"] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(canonical_json(j), Error);
}

TEST_CASE("tree serialization round-trips structurally") {
    DetRng rng({"tree-roundtrip"});
    for (int i = 0; i < 250; ++i) {
        GeneratedScene scene = random_scene(99, i);
        MockWorld world(MockWorldConfig{});
        ImageUnderstandingTree tree =
            ImageUnderstandingTree::from_json(world.iut_json(scene.entries));
        ImageUnderstandingTree again =
            ImageUnderstandingTree::from_json(parse_json(canonical_json(tree.to_json())));
        CHECK(tree == again);
    }
    ImageUnderstandingTree tree = cat_tree();
    CHECK(ImageUnderstandingTree::from_json(parse_json(canonical_json(tree.to_json()))) == tree);
}

TEST_CASE("sha256 ids are stable and hex encoded") {
    // sha256("") is a published constant.
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex_parts({"a", "b"}) != sha256_hex("ab")); // separator matters
}

TEST_CASE("validate_iut flags dangling relation endpoints") {
    ImageUnderstandingTree tree = cat_tree();
    tree.relations.push_back({"cat", "beside", "dog"});
    ValidationReport report = validate_iut(tree);
    REQUIRE_FALSE(report.ok());
    CHECK(report.to_string().find("dangling relation endpoint") != std::string::npos);
}

TEST_CASE("validate_iut accepts the minimal caption-only tree") {
    CHECK(validate_iut(minimal_tree()).ok());
}

TEST_CASE("validate_iut enforces the object cap") {
    ImageUnderstandingTree tree = minimal_tree();
    for (int i = 0; i < 11; ++i) {
        std::string id = "o" + std::to_string(i);
        tree.objects.push_back({id, id, {}});
    }
    IutCaps caps; // max 10
    ValidationReport report = validate_iut(tree, caps);
    REQUIRE_FALSE(report.ok());
    CHECK(report.to_string().find("object count exceeds limit") != std::string::npos);
    tree.objects.pop_back();
    CHECK(validate_iut(tree, caps).ok());
}

TEST_CASE("validate_iut rejects self relations, duplicate ids and labels") {
    ImageUnderstandingTree tree = cat_tree();
    tree.relations.push_back({"cat", "beside", "cat"});
    CHECK(validate_iut(tree).to_string().find("self-relation") != std::string::npos);

    tree = cat_tree();
    tree.objects.push_back({"cat", "cat", {}});
    CHECK(validate_iut(tree).to_string().find("duplicate object id") != std::string::npos);

    tree = cat_tree();
    tree.objects[0].features.push_back({"color", "red"});
    CHECK(validate_iut(tree).to_string().find("duplicate feature label") != std::string::npos);

    tree = cat_tree();
    tree.objects[0].features[0].value = "";
    CHECK(validate_iut(tree).to_string().find("empty feature value") != std::string::npos);
}

TEST_CASE("validate_iut enforces feature and global caps") {
    ImageUnderstandingTree tree = minimal_tree();
    ObjectNode obj{"cat", "cat", {}};
    for (int i = 0; i < 9; ++i) {
        obj.features.push_back({"label" + std::to_string(i), "v"});
    }
    tree.objects.push_back(obj);
    CHECK(validate_iut(tree).to_string().find("feature count exceeds limit") !=
          std::string::npos);

    tree = minimal_tree();
    for (int i = 0; i < 7; ++i) {
        tree.global_features.push_back({"g" + std::to_string(i), "v"});
    }
    CHECK(validate_iut(tree).to_string().find("global feature count exceeds limit") !=
          std::string::npos);
}

TEST_CASE("validate_iut accepts every mock-emitted tree over 1000 random scenes") {
    MockWorld world(MockWorldConfig{});
    for (int i = 0; i < 1000; ++i) {
        GeneratedScene scene = random_scene(7, i);
        ImageUnderstandingTree tree =
            ImageUnderstandingTree::from_json(world.iut_json(scene.entries));
        ValidationReport report = validate_iut(tree);
        CHECK_MESSAGE(report.ok(), report.to_string());
    }
}

TEST_CASE("prompt ids are content hashes and lineage depth tracks iterations") {
    Prompt p = Prompt::make("a cat", {{0, "", ""}});
    Prompt q = Prompt::make("a cat", {{0, "", ""}});
    CHECK(p.id == q.id);
    CHECK(p.depth() == 0);

    Prompt r = p.derive("a blue cat", 2, "color");
    CHECK(r.id != p.id);
    CHECK(r.depth() == 2);
    CHECK(r.lineage.back().parent_id == p.id);

    Prompt back = Prompt::from_json(parse_json(canonical_json(r.to_json())));
    CHECK(back == r);
}

TEST_CASE("reference image sniffs PNG dimensions and hashes bytes") {
    // 1x1 PNG header (signature + IHDR prefix); body truncated is fine for sniffing.
    std::string png =
        std::string("\x89PNG\r\n\x1a\n", 8) + std::string("\x00\x00\x00\x0d", 4) + "IHDR" +
        std::string("\x00\x00\x00\x02", 4) + std::string("\x00\x00\x00\x03", 4) +
        std::string(5, '\0');
    ReferenceImage img = ReferenceImage::from_bytes(png, "label");
    CHECK(img.width == 2);
    CHECK(img.height == 3);
    CHECK(img.id == sha256_hex(png));
    CHECK(img.category == "label");

    CHECK_THROWS_AS(ReferenceImage::from_bytes("not an image"), Error);
}

TEST_CASE("base64 round-trips binary data") {
    DetRng rng({"base64"});
    for (int i = 0; i < 200; ++i) {
        std::string bytes;
        std::size_t len = rng.below(64);
        for (std::size_t j = 0; j < len; ++j) {
            bytes.push_back(static_cast<char>(rng.next_u64() & 0xff));
        }
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
    CHECK(base64_encode("any carnal pleasure") == "YW55IGNhcm5hbCBwbGVhc3VyZQ==");
}

TEST_CASE("config defaults and precedence") {
    RunConfig def = config_from_json(Json::object());
    CHECK(def.iterations == 4);
    CHECK(def.fan_out == std::vector<int>{4, 3, 3, 3});
    CHECK(def.weights == std::array<double, 4>{0.25, 0.25, 0.25, 0.25});

    // flag layer wins over file layer
    std::map<std::string, std::string> env;
    RunConfig merged = load_config("", env, Json{{"iterations", 2}});
    CHECK(merged.iterations == 2);
    CHECK(merged.fan_out == std::vector<int>{4, 3});
}

TEST_CASE("config env layer sets http endpoints, flags override") {
    std::map<std::string, std::string> env{{"REPAINT_MLLM_URL", "http://mllm.example"},
                                           {"REPAINT_API_KEY", "sekret"}};
    RunConfig from_env = load_config("", env, Json());
    CHECK(from_env.mllm.kind == "http");
    CHECK(from_env.mllm.url == "http://mllm.example");
    CHECK(from_env.api_key == "sekret");

    RunConfig overridden =
        load_config("", env, Json{{"backends", Json{{"mllm", Json{{"kind", "mock"}}}}}});
    CHECK(overridden.mllm.kind == "mock");
}

TEST_CASE("config rejects bad weights and schedules with field paths") {
    CHECK_THROWS_WITH_AS(config_from_json(Json{{"weights", {0.3, 0.3, 0.2, 0.1}}}),
                         doctest::Contains("weights"), Error);
    CHECK_THROWS_WITH_AS(config_from_json(Json{{"iterations", 2}, {"fan_out", {4, 3, 3}}}),
                         doctest::Contains("fan_out"), Error);
    CHECK_THROWS_WITH_AS(config_from_json(Json{{"fan_out", {4, 0, 3, 3}}}),
                         doctest::Contains("fan_out[1]"), Error);
    CHECK_THROWS_WITH_AS(config_from_json(Json{{"initial_prompt_mode", "direct"}}),
                         doctest::Contains("initial_prompt_mode"), Error);
}

TEST_CASE("config hash is stable across equal configs and api key is excluded") {
    RunConfig a = config_from_json(Json::object());
    RunConfig b = config_from_json(Json::object());
    b.api_key = "different";
    CHECK(a.hash() == b.hash());
}
