#pragma once

#include <set>
#include <string>
#include <vector>

#include "repaint/mock_world.hpp"
#include "repaint/rng.hpp"

namespace repaint::test {

struct GeneratedScene {
    std::vector<repaint::SceneEntry> entries;
    std::set<std::string> flat; // all tokens incl. binders
    std::set<std::string> blind; // tokens designated unrenderable for this corpus
};

// Random scene within the tree caps: 1-3 objects (at most one place), an
// optional style, colors and detail modifiers. Deterministic per (seed, index).
GeneratedScene random_scene(std::uint64_t seed, int index);

// Acceptance corpus: scenes with blind tokens spread across the aspect
// classes. Scenes at indices where `detail_blind` fires carry a Detail-class
// blind token (unrepairable under T=4, since the detail round is last).
struct Corpus {
    std::vector<GeneratedScene> scenes;
    std::vector<std::string> blind_tokens; // union, feeds MockWorldConfig
};
Corpus make_corpus(std::uint64_t seed, int count, int detail_blind_every = 0);

std::string scene_file_bytes(const GeneratedScene& scene);

// Pure-set re-derivation of the mock iteration dynamics ("simulation oracle"),
// independent of the iterate module: predicts the selected candidate's token
// set per round given the blind set and the feedback schedule (feedback at
// rounds 1..T-1 with aspect_for(t); an add-directive makes the token render
// from the next round on).
std::vector<std::set<std::string>> simulate_rounds(const GeneratedScene& scene,
                                                   const std::set<std::string>& world_blind,
                                                   int iterations);

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

} // namespace repaint::test
