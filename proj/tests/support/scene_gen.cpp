#include "scene_gen.hpp"

#include <algorithm>
#include <map>

#include "repaint/iterate.hpp"

namespace repaint::test {

using repaint::Aspect;
using repaint::DetRng;
using repaint::MockWorld;
using repaint::SceneEntry;

namespace {

std::vector<std::string> tokens_of_kind(const std::string& kind) {
    std::vector<std::string> out;
    for (const auto& [token, info] : MockWorld::vocabulary()) {
        if (info.subclass == "object" && info.object_kind == kind) out.push_back(token);
    }
    return out;
}

std::vector<std::string> tokens_of_subclass(const std::string& subclass) {
    std::vector<std::string> out;
    for (const auto& [token, info] : MockWorld::vocabulary()) {
        if (info.subclass == subclass) out.push_back(token);
    }
    return out;
}

const std::vector<std::string>& detail_subclasses() {
    static const std::vector<std::string> subclasses = {
        "texture", "material", "pattern", "pose", "size",
        "age",     "mood",     "trim",    "glow", "lighting"};
    return subclasses;
}

} // namespace

GeneratedScene random_scene(std::uint64_t seed, int index) {
    DetRng rng({"scene", std::to_string(seed), std::to_string(index)});
    GeneratedScene scene;

    static const std::vector<std::string> animals = tokens_of_kind("animal");
    static const std::vector<std::string> places = tokens_of_kind("place");
    static const std::vector<std::string> things = tokens_of_kind("thing");
    static const std::vector<std::string> styles = tokens_of_subclass("style");
    static const std::vector<std::string> colors = tokens_of_subclass("color");

    std::vector<std::string> objects;
    objects.push_back(rng.pick(animals));
    if (rng.unit() < 0.5) {
        std::string thing = rng.pick(things);
        if (std::find(objects.begin(), objects.end(), thing) == objects.end()) {
            objects.push_back(thing);
        }
    }
    if (rng.unit() < 0.7) objects.push_back(rng.pick(places));
    for (const auto& o : objects) scene.entries.push_back({o, ""});

    if (rng.unit() < 0.9) scene.entries.push_back({rng.pick(styles), ""});

    // Bound modifiers: a color on the first object, and 0-2 detail-class
    // modifiers with distinct labels.
    if (rng.unit() < 0.8) {
        scene.entries.push_back({rng.pick(colors), objects[0]});
    }
    std::vector<std::string> subclasses = detail_subclasses();
    rng.shuffle(subclasses);
    std::size_t detail_count = rng.below(3); // 0..2
    for (std::size_t d = 0; d < detail_count; ++d) {
        std::vector<std::string> pool = tokens_of_subclass(subclasses[d]);
        const std::string& binder = objects[rng.below(objects.size())];
        scene.entries.push_back({rng.pick(pool), binder});
    }

    std::sort(scene.entries.begin(), scene.entries.end());
    scene.entries.erase(std::unique(scene.entries.begin(), scene.entries.end()),
                        scene.entries.end());
    scene.flat = MockWorld::flat_tokens(scene.entries);
    return scene;
}

Corpus make_corpus(std::uint64_t seed, int count, int detail_blind_every) {
    Corpus corpus;
    std::set<std::string> blind_union;
    const auto& vocab = MockWorld::vocabulary();

    for (int i = 0; i < count; ++i) {
        GeneratedScene scene = random_scene(seed, i);
        DetRng rng({"blind", std::to_string(seed), std::to_string(i)});

        // Pick blind tokens cycling over the repairable aspect classes so the
        // corpus diffs span Overall, Style and Color. Relation participants
        // are skipped for the Overall class: the relation phrase already
        // mentions them twice, which counts as emphasis.
        bool has_animal = false, has_place = false;
        for (const auto& t : scene.flat) {
            const auto& kind = vocab.at(t).object_kind;
            if (kind == "animal") has_animal = true;
            if (kind == "place") has_place = true;
        }
        std::vector<std::string> by_aspect[3]; // overall, style, color
        std::vector<std::string> detail_tokens;
        for (const auto& t : scene.flat) {
            const auto& info = vocab.at(t);
            switch (info.aspect) {
                case Aspect::Overall: {
                    bool in_relation = (info.object_kind == "animal" && has_place) ||
                                       (info.object_kind == "place" && has_animal);
                    if (!in_relation) by_aspect[0].push_back(t);
                    break;
                }
                case Aspect::Style: by_aspect[1].push_back(t); break;
                case Aspect::Color: by_aspect[2].push_back(t); break;
                case Aspect::Detail: detail_tokens.push_back(t); break;
            }
        }
        int cls = i % 3;
        for (int probe = 0; probe < 3; ++probe) {
            int c = (cls + probe) % 3;
            if (!by_aspect[c].empty()) {
                scene.blind.insert(by_aspect[c][rng.below(by_aspect[c].size())]);
                break;
            }
        }
        // A second blind token on alternating scenes for harder diffs.
        if (i % 2 == 1) {
            int c = (cls + 1) % 3;
            if (!by_aspect[c].empty()) {
                scene.blind.insert(by_aspect[c][rng.below(by_aspect[c].size())]);
            }
        }
        if (detail_blind_every > 0 && (i + 1) % detail_blind_every == 0 &&
            !detail_tokens.empty()) {
            scene.blind.insert(detail_tokens[rng.below(detail_tokens.size())]);
        }

        blind_union.insert(scene.blind.begin(), scene.blind.end());
        corpus.scenes.push_back(std::move(scene));
    }

    corpus.blind_tokens.assign(blind_union.begin(), blind_union.end());
    return corpus;
}

std::string scene_file_bytes(const GeneratedScene& scene) {
    return MockWorld::encode_scene(scene.entries);
}

std::vector<std::set<std::string>> simulate_rounds(const GeneratedScene& scene,
                                                   const std::set<std::string>& world_blind,
                                                   int iterations) {
    const auto& vocab = MockWorld::vocabulary();

    // Initial-prompt mention counts: every token once, plus one extra mention
    // for each relation phrase a token participates in (animal "in" place).
    std::map<std::string, int> counts;
    std::vector<std::string> animals, places;
    for (const auto& token : scene.flat) {
        counts[token] = 1;
        const auto& info = vocab.at(token);
        if (info.object_kind == "animal") animals.push_back(token);
        if (info.object_kind == "place") places.push_back(token);
    }
    for (const auto& a : animals) counts[a] += static_cast<int>(places.size());
    for (const auto& p : places) counts[p] += static_cast<int>(animals.size());

    // Rendering rule: mentioned at least once, and either outside the blind
    // set or mentioned at least twice. Paraphrases preserve mention counts;
    // an add-directive appends two mentions; ties select the anchor prompt,
    // so the evolving count vector models the selected candidate exactly.
    auto rendered_now = [&] {
        std::set<std::string> rendered;
        for (const auto& [token, count] : counts) {
            if (count >= 1 && (count >= 2 || !world_blind.count(token))) {
                rendered.insert(token);
            }
        }
        return rendered;
    };

    std::vector<std::set<std::string>> rounds;
    for (int t = 1; t <= iterations; ++t) {
        std::set<std::string> rendered = rendered_now();
        rounds.push_back(rendered);
        if (t == iterations) break;
        Aspect aspect = repaint::aspect_for(t);
        for (const auto& token : scene.flat) {
            if (!rendered.count(token) && vocab.at(token).aspect == aspect) {
                counts[token] += 2;
            }
        }
    }
    return rounds;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& t : a) {
        if (b.count(t)) ++inter;
    }
    return static_cast<double>(inter) /
           static_cast<double>(a.size() + b.size() - inter);
}

} // namespace repaint::test
