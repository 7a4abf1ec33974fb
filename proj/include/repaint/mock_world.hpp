#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "repaint/config.hpp"
#include "repaint/json_util.hpp"
#include "repaint/types.hpp"

namespace repaint {

// One attribute of a synthetic scene: a vocabulary token, optionally bound to
// an object ("blue:cat" binds color blue to the cat object).
struct SceneEntry {
    std::string token;
    std::string binder;

    bool operator<(const SceneEntry& other) const {
        return std::tie(binder, token) < std::tie(other.binder, other.token);
    }
    bool operator==(const SceneEntry&) const = default;
};

struct TokenInfo {
    std::string subclass;   // object | style | color | texture | ...
    Aspect aspect;          // revision aspect the token belongs to
    std::string object_kind; // animal | place | thing, empty for non-objects
};

// Deterministic synthetic backend world. An "image" is a finite token set
// encoded as a mock-scene file. Every behavior is a pure function of
// (request, world seed, blind set), which makes the world usable as the
// offline oracle for the full pipeline. The exact contracts are documented in
// docs/mock-world.md and re-derived independently by the tests.
class MockWorld {
public:
    explicit MockWorld(const MockWorldConfig& config);

    static const std::map<std::string, TokenInfo>& vocabulary();
    static bool in_vocabulary(const std::string& token);

    // Scene codec. Encoded form: "mock-scene/v1\n" then one sorted entry per
    // line, bound entries as "token:binder-object".
    static std::string encode_scene(std::vector<SceneEntry> entries);
    static std::vector<SceneEntry> parse_scene(std::string_view bytes);
    static bool is_scene(std::string_view bytes);

    static std::set<std::string> flat_tokens(const std::vector<SceneEntry>& entries);

    // Vocabulary tokens mentioned in free text, lowercased.
    static std::set<std::string> text_tokens(std::string_view text);

    // T2I rendering rule: a prompt token renders if it is outside the blind
    // set or mentioned at least twice (emphasis).
    std::set<std::string> render(std::string_view prompt) const;

    // MLLM behaviors.
    std::string caption_for(const std::vector<SceneEntry>& entries) const;
    Json iut_json(const std::vector<SceneEntry>& entries) const;
    Json object_features_json(const std::vector<SceneEntry>& entries,
                              const std::string& object_name) const;
    Json feedback_json(const std::vector<SceneEntry>& reference,
                       const std::set<std::string>& candidate_tokens, Aspect aspect) const;
    Json judge_json(const std::set<std::string>& reference_tokens,
                    const std::set<std::string>& candidate_tokens) const;
    std::string initial_prompt_from_iut(const Json& iut) const;
    std::string paraphrase(const std::string& prompt, int variant) const;
    std::string revise(const std::string& prompt, const std::vector<std::string>& directives) const;

    // Embedder: normalized sum of fixed per-token pseudo-random unit vectors.
    static int embed_dim(const std::string& model_tag);
    std::vector<double> token_unit_vector(const std::string& token,
                                          const std::string& model_tag) const;
    std::vector<double> embed_tokens(const std::set<std::string>& tokens,
                                     const std::string& model_tag) const;

    std::uint64_t seed() const { return seed_; }
    const std::set<std::string>& blind_tokens() const { return blind_; }

private:
    std::uint64_t seed_;
    std::set<std::string> blind_;
};

} // namespace repaint
