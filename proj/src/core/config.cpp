#include "repaint/config.hpp"

#include <cmath>

#include "repaint/errors.hpp"
#include "repaint/fs_util.hpp"
#include "repaint/hash.hpp"

namespace repaint {

namespace {

Json endpoint_to_json(const BackendEndpoint& e) {
    return Json{{"kind", e.kind}, {"url", e.url}, {"unit_cost", e.unit_cost}};
}

void endpoint_from_json(const Json& j, BackendEndpoint& e, const std::string& path) {
    if (!j.is_object()) raise(ErrorCode::Config, path + ": expected object");
    e.kind = j.value("kind", e.kind);
    e.url = j.value("url", e.url);
    e.unit_cost = j.value("unit_cost", e.unit_cost);
    if (e.kind != "mock" && e.kind != "http") {
        raise(ErrorCode::Config, path + ".kind: expected \"mock\" or \"http\"");
    }
    if (e.kind == "http" && e.url.empty()) {
        raise(ErrorCode::Config, path + ".url: required for http backends");
    }
}

void merge_into(Json& base, const Json& overlay) {
    if (!overlay.is_object() || !base.is_object()) {
        base = overlay;
        return;
    }
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (base.contains(it.key()) && base[it.key()].is_object() && it.value().is_object()) {
            merge_into(base[it.key()], it.value());
        } else {
            base[it.key()] = it.value();
        }
    }
}

} // namespace

Json RunConfig::to_json() const {
    return Json{
        {"iterations", iterations},
        {"fan_out", fan_out},
        {"weights", weights},
        {"base_seed", base_seed},
        {"jobs", jobs},
        {"repair_attempts", repair_attempts},
        {"transport_retries", transport_retries},
        {"prompt_max_chars", prompt_max_chars},
        {"initial_prompt_mode", initial_prompt_mode},
        {"caps",
         Json{{"max_objects", caps.max_objects},
              {"max_features_per_object", caps.max_features_per_object},
              {"max_global_features", caps.max_global_features}}},
        {"backends",
         Json{{"mllm", endpoint_to_json(mllm)},
              {"text_llm", endpoint_to_json(text_llm)},
              {"t2i", endpoint_to_json(t2i)},
              {"embed", endpoint_to_json(embed)}}},
        {"model_id", model_id},
        {"out_dir", out_dir},
        {"cache_dir", cache_dir},
        {"template_dir", template_dir},
        {"mock_world", Json{{"seed", mock_world.seed}, {"blind_tokens", mock_world.blind_tokens}}},
        {"image", Json{{"width", image_width}, {"height", image_height}, {"steps", steps}}},
        {"log", log},
    };
}

std::string RunConfig::hash() const {
    // api_key deliberately excluded from to_json/provenance.
    return sha256_hex(canonical_json(to_json()));
}

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    bool fan_out_explicit = false;
    if (!j.is_object()) raise(ErrorCode::Config, "config: expected JSON object");

    c.iterations = j.value("iterations", c.iterations);
    if (j.contains("fan_out")) {
        if (!j["fan_out"].is_array()) raise(ErrorCode::Config, "fan_out: expected array");
        c.fan_out = j["fan_out"].get<std::vector<int>>();
        fan_out_explicit = true;
    }
    if (j.contains("weights")) {
        if (!j["weights"].is_array() || j["weights"].size() != 4) {
            raise(ErrorCode::Config, "weights: expected array of 4 reals");
        }
        for (std::size_t i = 0; i < 4; ++i) c.weights[i] = j["weights"][i].get<double>();
    }
    c.base_seed = j.value("base_seed", c.base_seed);
    c.jobs = j.value("jobs", c.jobs);
    c.repair_attempts = j.value("repair_attempts", c.repair_attempts);
    c.transport_retries = j.value("transport_retries", c.transport_retries);
    c.prompt_max_chars = j.value("prompt_max_chars", c.prompt_max_chars);
    c.initial_prompt_mode = j.value("initial_prompt_mode", c.initial_prompt_mode);

    if (j.contains("caps")) {
        const Json& caps = j["caps"];
        c.caps.max_objects = caps.value("max_objects", c.caps.max_objects);
        c.caps.max_features_per_object =
            caps.value("max_features_per_object", c.caps.max_features_per_object);
        c.caps.max_global_features = caps.value("max_global_features", c.caps.max_global_features);
    }

    if (j.contains("backends")) {
        const Json& b = j["backends"];
        if (b.contains("mllm")) endpoint_from_json(b["mllm"], c.mllm, "backends.mllm");
        if (b.contains("text_llm")) endpoint_from_json(b["text_llm"], c.text_llm, "backends.text_llm");
        if (b.contains("t2i")) endpoint_from_json(b["t2i"], c.t2i, "backends.t2i");
        if (b.contains("embed")) endpoint_from_json(b["embed"], c.embed, "backends.embed");
    }

    c.model_id = j.value("model_id", c.model_id);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.cache_dir = j.value("cache_dir", c.cache_dir);
    c.template_dir = j.value("template_dir", c.template_dir);

    if (j.contains("mock_world")) {
        const Json& m = j["mock_world"];
        c.mock_world.seed = m.value("seed", c.mock_world.seed);
        if (m.contains("blind_tokens")) {
            c.mock_world.blind_tokens = m["blind_tokens"].get<std::vector<std::string>>();
        }
    }

    if (j.contains("image")) {
        const Json& im = j["image"];
        c.image_width = im.value("width", c.image_width);
        c.image_height = im.value("height", c.image_height);
        c.steps = im.value("steps", c.steps);
    }

    c.log = j.value("log", c.log);

    validate_config(c, fan_out_explicit);
    return c;
}

void validate_config(RunConfig& c, bool fan_out_explicit) {
    if (c.iterations < 1) raise(ErrorCode::Config, "iterations: must be >= 1");
    if (!fan_out_explicit) {
        // Default schedule: 4 first, then 3s, sized to T.
        c.fan_out.assign(static_cast<std::size_t>(c.iterations), 3);
        c.fan_out[0] = 4;
    }
    if (static_cast<int>(c.fan_out.size()) != c.iterations) {
        raise(ErrorCode::Config, "fan_out: length " + std::to_string(c.fan_out.size()) +
                                     " != iterations " + std::to_string(c.iterations));
    }
    for (std::size_t i = 0; i < c.fan_out.size(); ++i) {
        if (c.fan_out[i] < 1) {
            raise(ErrorCode::Config, "fan_out[" + std::to_string(i) + "]: must be >= 1");
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (c.weights[i] < 0.0) {
            raise(ErrorCode::Config, "weights[" + std::to_string(i) + "]: must be >= 0");
        }
        sum += c.weights[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        raise(ErrorCode::Config, "weights: sum " + std::to_string(sum) + " != 1");
    }
    if (c.jobs < 1) raise(ErrorCode::Config, "jobs: must be >= 1");
    if (c.repair_attempts < 1) raise(ErrorCode::Config, "repair_attempts: must be >= 1");
    if (c.transport_retries < 0) raise(ErrorCode::Config, "transport_retries: must be >= 0");
    if (c.caps.max_objects < 1) raise(ErrorCode::Config, "caps.max_objects: must be >= 1");
    if (c.caps.max_features_per_object < 1) {
        raise(ErrorCode::Config, "caps.max_features_per_object: must be >= 1");
    }
    if (c.caps.max_global_features < 1) {
        raise(ErrorCode::Config, "caps.max_global_features: must be >= 1");
    }
    if (c.initial_prompt_mode != "iut" && c.initial_prompt_mode != "caption") {
        raise(ErrorCode::Config, "initial_prompt_mode: expected \"iut\" or \"caption\"");
    }
    if (c.prompt_max_chars < 16) raise(ErrorCode::Config, "prompt_max_chars: must be >= 16");
    if (c.image_width < 1 || c.image_height < 1) {
        raise(ErrorCode::Config, "image: width/height must be >= 1");
    }
}

RunConfig load_config(const std::string& file_path,
                      const std::map<std::string, std::string>& env,
                      const Json& overrides) {
    Json merged = Json::object();

    if (!file_path.empty()) {
        Json from_file = parse_json(read_file(file_path));
        if (!from_file.is_object()) raise(ErrorCode::Config, "config file: expected JSON object");
        merge_into(merged, from_file);
    }

    Json from_env = Json::object();
    auto env_url = [&](const char* var, const char* backend) {
        auto it = env.find(var);
        if (it != env.end() && !it->second.empty()) {
            from_env["backends"][backend] = Json{{"kind", "http"}, {"url", it->second}};
        }
    };
    env_url("REPAINT_MLLM_URL", "mllm");
    env_url("REPAINT_T2I_URL", "t2i");
    env_url("REPAINT_EMBED_URL", "embed");
    merge_into(merged, from_env);

    if (!overrides.is_null()) {
        if (!overrides.is_object()) raise(ErrorCode::Config, "overrides: expected JSON object");
        merge_into(merged, overrides);
    }

    RunConfig config = config_from_json(merged);
    if (auto it = env.find("REPAINT_API_KEY"); it != env.end()) {
        config.api_key = it->second;
    }
    return config;
}

} // namespace repaint
