#include <doctest.h>

#include <cmath>

#include "repaint/hash.hpp"
#include "repaint/iterate.hpp"
#include "repaint/mock_backends.hpp"
#include "repaint/score.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/scripted.hpp"
#include "support/test_util.hpp"

using namespace repaint;
using namespace repaint::test;

namespace {

EmbeddingVector vec(std::vector<double> values) {
    EmbeddingVector v;
    v.dim = static_cast<int>(values.size());
    v.values = std::move(values);
    v.model_tag = "raw";
    return v;
}

} // namespace

TEST_CASE("cosine similarity on the documented examples") {
    CHECK(cosine_similarity(vec({1, 0}), vec({1, 0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(vec({1, 0}), vec({0, 1})) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cosine_similarity(vec({1, 2, 2}), vec({2, 1, 2})) ==
          doctest::Approx(8.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("cosine similarity rejects dimension mismatch and zero vectors") {
    try {
        cosine_similarity(vec({1, 0}), vec({1, 0, 0}));
        FAIL("expected ProtocolError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Protocol);
    }
    try {
        cosine_similarity(vec({0, 0}), vec({1, 0}));
        FAIL("expected DegenerateEmbedding");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateEmbedding);
    }
}

TEST_CASE("cosine properties: self similarity and symmetry") {
    DetRng rng({"cosine-props"});
    for (int i = 0; i < 250; ++i) {
        std::size_t dim = 2 + rng.below(16);
        std::vector<double> a(dim), b(dim);
        for (auto& x : a) x = rng.symmetric() * 10;
        for (auto& x : b) x = rng.symmetric() * 10;
        a[rng.below(dim)] += 1.0; // keep nonzero
        b[rng.below(dim)] += 1.0;
        CHECK(std::abs(cosine_similarity(vec(a), vec(a)) - 1.0) <= 1e-9);
        CHECK(std::abs(cosine_similarity(vec(a), vec(b)) -
                       cosine_similarity(vec(b), vec(a))) <= 1e-12);
        CHECK(std::abs(cosine_similarity(vec(a), vec(b)) - oracle_cosine(a, b)) <= 1e-9);
    }
}

TEST_CASE("normalize_similarity clamps and scales") {
    CHECK(normalize_similarity(1.0) == 100.0);
    CHECK(normalize_similarity(-0.2) == 0.0);
    CHECK(normalize_similarity(0.9017) == doctest::Approx(90.17).epsilon(1e-12));
}

TEST_CASE("normalize_judge is the (s-1)/4 map and validates range") {
    CHECK(normalize_judge(1) == 0.0);
    CHECK(normalize_judge(5) == 1.0);
    CHECK(normalize_judge(4.528) == doctest::Approx(0.882).epsilon(1e-12));
    CHECK_THROWS_AS(normalize_judge(0.5), Error);
    CHECK_THROWS_AS(normalize_judge(5.5), Error);
}

TEST_CASE("normalize_judge is a bijection on the rubric integers") {
    std::set<double> image;
    for (int s = 1; s <= 5; ++s) {
        double x = normalize_judge(s);
        image.insert(x);
        CHECK(denormalize_judge(x) == static_cast<double>(s));
    }
    CHECK(image == std::set<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("human-scale normalization round-trips real-valued means exactly") {
    DetRng rng({"judge-roundtrip"});
    for (int i = 0; i < 250; ++i) {
        // means of five annotator integers
        int sum = 0;
        for (int k = 0; k < 5; ++k) sum += 1 + static_cast<int>(rng.below(5));
        double mean = static_cast<double>(sum) / 5.0;
        CHECK(denormalize_judge(normalize_judge(mean)) == mean);
    }
}

TEST_CASE("composite_score on the documented examples") {
    std::array<double, 4> equal = {0.25, 0.25, 0.25, 0.25};
    CHECK(composite_score({0.9, 0.9, 0.5, 0.5}, equal) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(composite_score({0.3, 0.8, 0.1, 0.9}, {1, 0, 0, 0}) == doctest::Approx(0.3));
    CHECK(composite_score({1, 1, 1, 1}, equal) == doctest::Approx(1.0));
}

TEST_CASE("composite_score validates weights and component ranges") {
    CHECK_THROWS_AS(composite_score({0.5, 0.5, 0.5, 0.5}, {0.3, 0.3, 0.3, 0.3}), Error);
    CHECK_THROWS_AS(composite_score({0.5, 0.5, 0.5, 0.5}, {-0.5, 0.5, 0.5, 0.5}), Error);
    CHECK_THROWS_AS(composite_score({1.5, 0.5, 0.5, 0.5}, {0.25, 0.25, 0.25, 0.25}), Error);
}

TEST_CASE("composite is monotone in every positively weighted component") {
    DetRng rng({"composite-monotone"});
    for (int i = 0; i < 250; ++i) {
        std::array<double, 4> v{};
        for (auto& x : v) x = rng.unit();
        std::array<double, 4> w{};
        double sum = 0;
        for (auto& x : w) {
            x = 0.05 + rng.unit();
            sum += x;
        }
        for (auto& x : w) x /= sum;
        // renormalize exactly enough for the 1e-9 gate
        double s2 = w[0] + w[1] + w[2] + w[3];
        w[3] += 1.0 - s2;

        double base = composite_score(v, w);
        std::size_t k = rng.below(4);
        std::array<double, 4> raised = v;
        raised[k] = std::min(1.0, v[k] + rng.unit() * (1.0 - v[k]));
        CHECK(composite_score(raised, w) >= base - 1e-12);
    }
}

TEST_CASE("composite equals the long-double weighted-mean oracle") {
    DetRng rng({"composite-oracle"});
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> v(4), w(4);
        double sum = 0;
        for (auto& x : v) x = rng.unit();
        for (auto& x : w) {
            x = rng.unit() + 0.01;
            sum += x;
        }
        for (auto& x : w) x /= sum;
        w[3] += 1.0 - (w[0] + w[1] + w[2] + w[3]);
        double got = composite_score({v[0], v[1], v[2], v[3]}, {w[0], w[1], w[2], w[3]});
        CHECK(std::abs(got - oracle_weighted_mean(v, w)) <= 1e-9);
    }
}

TEST_CASE("selection is invariant under positive scaling of embeddings") {
    DetRng rng({"scale-invariance"});
    for (int i = 0; i < 200; ++i) {
        std::size_t dim = 4 + rng.below(12);
        std::vector<double> ref(dim);
        for (auto& x : ref) x = rng.symmetric();
        ref[0] += 2.0;
        double scale = 0.25 + rng.unit() * 8.0;

        std::vector<double> best_plain, best_scaled;
        double top_plain = -2, top_scaled = -2;
        int arg_plain = -1, arg_scaled = -1;
        for (int c = 0; c < 5; ++c) {
            std::vector<double> cand(dim);
            for (auto& x : cand) x = rng.symmetric();
            cand[1] += 1.0;
            double plain = cosine_similarity(vec(ref), vec(cand));
            std::vector<double> scaled = cand;
            for (auto& x : scaled) x *= scale;
            double after = cosine_similarity(vec(ref), vec(scaled));
            CHECK(std::abs(plain - after) <= 1e-9);
            if (plain > top_plain) {
                top_plain = plain;
                arg_plain = c;
            }
            if (after > top_scaled) {
                top_scaled = after;
                arg_scaled = c;
            }
        }
        CHECK(arg_plain == arg_scaled);
    }
}

TEST_CASE("judge_pair follows the mock rubric on token sets") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;

    auto image = [](std::vector<SceneEntry> entries) {
        return ReferenceImage::from_bytes(MockWorld::encode_scene(std::move(entries)));
    };
    auto artifact = [](std::vector<SceneEntry> entries) {
        ImageArtifact a;
        a.bytes = MockWorld::encode_scene(std::move(entries));
        a.id = "cand";
        return a;
    };

    JudgeResult identical = judge_pair(session, templates, image({{"cat", ""}, {"blue", ""}}),
                                       artifact({{"cat", ""}, {"blue", ""}}));
    CHECK(identical.content == 5);
    CHECK(identical.perceptual == 5);
    CHECK_FALSE(identical.fallback);
    CHECK_FALSE(identical.rationale.empty());

    JudgeResult disjoint = judge_pair(session, templates, image({{"cat", ""}}),
                                      artifact({{"forest", ""}}));
    CHECK(disjoint.content == 1);

    JudgeResult half = judge_pair(
        session, templates, image({{"cat", ""}, {"blue", ""}, {"dog", ""}, {"red", ""}}),
        artifact({{"cat", ""}, {"blue", ""}}));
    CHECK(half.content == 3); // Jaccard 0.5 -> 1 + 2
}

TEST_CASE("judge schema failure pins scores to 1 and flags the candidate") {
    TempDir dir;
    BackendSession session(mock_config(dir));
    TemplateSet templates;
    session.replace_mllm(std::make_unique<ScriptedMllm>(
        std::deque<std::string>{"bad", "worse", "still bad"}));
    ImageArtifact candidate;
    candidate.bytes = MockWorld::encode_scene({{"cat", ""}});
    candidate.id = "c";
    JudgeResult result = judge_pair(
        session, templates, ReferenceImage::from_bytes(MockWorld::encode_scene({{"cat", ""}})),
        candidate);
    CHECK(result.fallback);
    CHECK(result.content == 1);
    CHECK(result.perceptual == 1);
}

TEST_CASE("score vectors are recomputable from their components") {
    TempDir dir;
    RunConfig config = mock_config(dir);
    BackendSession session(config);
    TemplateSet templates;
    ReferenceImage reference =
        ReferenceImage::from_bytes(MockWorld::encode_scene({{"cat", ""}, {"blue", ""}}));
    ImageArtifact candidate;
    candidate.bytes = MockWorld::encode_scene({{"cat", ""}});
    candidate.id = sha256_hex(candidate.bytes);

    ScoreVector scores = score_candidate(session, templates, reference, candidate);
    CHECK(scores.composite ==
          doctest::Approx(recompute_composite(scores, config.weights)).epsilon(1e-12));
    CHECK(scores.clip_pct >= 0.0);
    CHECK(scores.clip_pct <= 100.0);
    ScoreVector loaded = ScoreVector::from_json(parse_json(canonical_json(scores.to_json())));
    CHECK(loaded.composite == scores.composite);
    CHECK(loaded.judge_content == scores.judge_content);
}
