#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "repaint/json_util.hpp"
#include "repaint/validate.hpp"

namespace repaint {

struct BackendEndpoint {
    std::string kind = "mock"; // "mock" or "http"
    std::string url;
    double unit_cost = 0.0; // cost accounting units per invocation
};

struct MockWorldConfig {
    std::uint64_t seed = 1337;
    // Tokens the mock T2I model cannot render from a single mention; stands in
    // for a real model's blind spots. Empty by default.
    std::vector<std::string> blind_tokens;
};

// Resolved run configuration. Serialized (canonically) into every run
// directory as provenance.
struct RunConfig {
    int iterations = 4; // T
    std::vector<int> fan_out = {4, 3, 3, 3}; // N_t, len == T
    // Weights over [clip, dino, judge_content, judge_perceptual]; sum to 1.
    std::array<double, 4> weights = {0.25, 0.25, 0.25, 0.25};
    std::uint64_t base_seed = 42;
    int jobs = 4; // bound on concurrent backend calls
    int repair_attempts = 3; // max schema-validated attempts per MLLM query
    int transport_retries = 2; // extra tries after a transport failure
    int prompt_max_chars = 4000;
    std::string initial_prompt_mode = "iut"; // "iut" or "caption" (ablation)

    IutCaps caps;

    BackendEndpoint mllm;
    BackendEndpoint text_llm; // url empty -> use mllm endpoint
    BackendEndpoint t2i;
    BackendEndpoint embed;
    std::string api_key;

    std::string model_id = "mock-t2i";
    std::string out_dir = "runs";
    std::string cache_dir = "cache";
    std::string template_dir; // empty -> embedded templates

    MockWorldConfig mock_world;

    int image_width = 512;
    int image_height = 512;
    int steps = 20;

    std::string log = "off"; // "off" or "stderr"

    Json to_json() const;
    std::string hash() const;
};

// Layered load: defaults <- file <- env <- flag overrides. `env` should hold
// the REPAINT_* variables; `overrides` uses the same keys as the config file.
RunConfig load_config(const std::string& file_path_or_empty,
                      const std::map<std::string, std::string>& env,
                      const Json& overrides);

// Re-applies defaults-dependent rules (fan_out sizing) and checks invariants;
// raises ConfigError with a field path on violation.
void validate_config(RunConfig& config, bool fan_out_explicit);

RunConfig config_from_json(const Json& merged);

} // namespace repaint
