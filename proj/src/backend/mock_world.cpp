#include "repaint/mock_world.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "repaint/errors.hpp"
#include "repaint/rng.hpp"

namespace repaint {

namespace {

void add_group(std::map<std::string, TokenInfo>& vocab, const char* subclass, Aspect aspect,
               const char* kind, std::initializer_list<const char*> tokens) {
    for (const char* t : tokens) {
        vocab[t] = TokenInfo{subclass, aspect, kind};
    }
}

std::map<std::string, TokenInfo> build_vocabulary() {
    std::map<std::string, TokenInfo> v;
    add_group(v, "object", Aspect::Overall, "animal",
              {"cat", "dog", "fox", "owl", "rabbit", "horse", "heron", "lynx"});
    add_group(v, "object", Aspect::Overall, "place",
              {"park", "forest", "beach", "mountain", "harbor", "meadow", "canyon", "village"});
    add_group(v, "object", Aspect::Overall, "thing",
              {"boat", "lantern", "bridge", "tower", "kite", "statue", "windmill", "cart"});
    add_group(v, "style", Aspect::Style, "",
              {"watercolor", "oilpaint", "sketch", "pixelart", "anime", "impressionist",
               "ukiyoe", "artdeco"});
    add_group(v, "color", Aspect::Color, "",
              {"blue", "red", "green", "golden", "silver", "crimson", "azure", "amber"});
    add_group(v, "texture", Aspect::Detail, "", {"fluffy", "sleek", "rough", "glossy"});
    add_group(v, "material", Aspect::Detail, "", {"wooden", "metallic", "glass", "stone"});
    add_group(v, "pattern", Aspect::Detail, "", {"striped", "spotted", "checkered", "dotted"});
    add_group(v, "pose", Aspect::Detail, "", {"sitting", "running", "sleeping", "soaring"});
    add_group(v, "size", Aspect::Detail, "", {"tiny", "huge", "slender", "stout"});
    add_group(v, "age", Aspect::Detail, "", {"young", "ancient", "weathered", "newborn"});
    add_group(v, "mood", Aspect::Detail, "", {"cheerful", "gloomy", "fierce", "serene"});
    add_group(v, "trim", Aspect::Detail, "", {"gilded", "frayed", "polished", "rusty"});
    add_group(v, "glow", Aspect::Detail, "", {"glowing", "dim", "radiant", "shadowy"});
    add_group(v, "lighting", Aspect::Detail, "", {"sunlit", "moonlit", "neon", "dusk"});
    return v;
}

constexpr std::string_view kMagic = "mock-scene/v1";

const std::set<std::string>& label_words() {
    static const std::set<std::string> labels = {
        "object", "style", "color", "palette", "texture", "material", "pattern", "pose",
        "size",   "age",   "mood",  "trim",    "glow",    "lighting"};
    return labels;
}

// Decoration words used by the mock paraphraser; deliberately not in the
// vocabulary so they never change a prompt's token set.
const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> fillers = {
        "artwork", "rendering", "illustration", "composition",
        "piece",   "vignette",  "tableau",      "panorama"};
    return fillers;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char raw : text) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            current.push_back(c);
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

std::string global_label_for(const TokenInfo& info) {
    if (info.subclass == "color") return "palette";
    return info.subclass;
}

void append_token_list(std::vector<std::string>& out, const std::string& merged_value) {
    // Feature values may hold several merged tokens ("blue, red").
    for (const auto& w : split_words(merged_value)) out.push_back(w);
}

} // namespace

MockWorld::MockWorld(const MockWorldConfig& config) : seed_(config.seed) {
    for (const auto& token : config.blind_tokens) {
        if (!in_vocabulary(token)) {
            raise(ErrorCode::Config, "mock_world.blind_tokens: unknown token '" + token + "'");
        }
        blind_.insert(token);
    }
}

const std::map<std::string, TokenInfo>& MockWorld::vocabulary() {
    static const std::map<std::string, TokenInfo> vocab = build_vocabulary();
    return vocab;
}

bool MockWorld::in_vocabulary(const std::string& token) {
    return vocabulary().count(token) > 0;
}

std::string MockWorld::encode_scene(std::vector<SceneEntry> entries) {
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    std::string out(kMagic);
    out.push_back('\n');
    for (const auto& e : entries) {
        out += e.token;
        if (!e.binder.empty()) {
            out.push_back(':');
            out += e.binder;
        }
        out.push_back('\n');
    }
    return out;
}

bool MockWorld::is_scene(std::string_view bytes) {
    return bytes.substr(0, kMagic.size()) == kMagic;
}

std::vector<SceneEntry> MockWorld::parse_scene(std::string_view bytes) {
    std::istringstream in{std::string(bytes)};
    std::string line;
    if (!std::getline(in, line) || line != kMagic) {
        raise(ErrorCode::Encoding, "not a mock-scene image");
    }
    std::vector<SceneEntry> entries;
    const auto& vocab = vocabulary();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SceneEntry entry;
        auto colon = line.find(':');
        if (colon == std::string::npos) {
            entry.token = line;
        } else {
            entry.token = line.substr(0, colon);
            entry.binder = line.substr(colon + 1);
        }
        auto it = vocab.find(entry.token);
        if (it == vocab.end()) {
            raise(ErrorCode::Encoding, "unknown scene token '" + entry.token + "'");
        }
        if (!entry.binder.empty()) {
            auto binder_it = vocab.find(entry.binder);
            if (binder_it == vocab.end() || binder_it->second.subclass != "object") {
                raise(ErrorCode::Encoding, "scene binder must be an object token: '" +
                                               entry.binder + "'");
            }
            if (it->second.subclass == "object") {
                raise(ErrorCode::Encoding, "object token '" + entry.token + "' cannot be bound");
            }
        }
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    return entries;
}

std::set<std::string> MockWorld::flat_tokens(const std::vector<SceneEntry>& entries) {
    std::set<std::string> tokens;
    for (const auto& e : entries) {
        tokens.insert(e.token);
        if (!e.binder.empty()) tokens.insert(e.binder);
    }
    return tokens;
}

std::set<std::string> MockWorld::text_tokens(std::string_view text) {
    std::set<std::string> tokens;
    for (const auto& w : split_words(text)) {
        if (in_vocabulary(w)) tokens.insert(w);
    }
    return tokens;
}

std::set<std::string> MockWorld::render(std::string_view prompt) const {
    std::map<std::string, int> counts;
    for (const auto& w : split_words(prompt)) {
        if (in_vocabulary(w)) counts[w]++;
    }
    std::set<std::string> rendered;
    for (const auto& [token, count] : counts) {
        if (count >= 2 || blind_.count(token) == 0) rendered.insert(token);
    }
    return rendered;
}

std::string MockWorld::caption_for(const std::vector<SceneEntry>& entries) const {
    std::set<std::string> primary;
    for (const auto& e : entries) {
        primary.insert(e.binder.empty() ? e.token : e.binder);
    }
    std::string out;
    for (const auto& t : primary) {
        if (!out.empty()) out += ", ";
        out += t;
    }
    return out;
}

Json MockWorld::iut_json(const std::vector<SceneEntry>& entries) const {
    const auto& vocab = vocabulary();

    std::set<std::string> object_names;
    std::map<std::string, std::map<std::string, std::set<std::string>>> object_features;
    std::map<std::string, std::set<std::string>> globals;
    for (const auto& e : entries) {
        const TokenInfo& info = vocab.at(e.token);
        if (info.subclass == "object") {
            object_names.insert(e.token);
        } else if (!e.binder.empty()) {
            object_names.insert(e.binder);
            object_features[e.binder][info.subclass].insert(e.token);
        } else {
            globals[global_label_for(info)].insert(e.token);
        }
    }

    Json global_arr = Json::array();
    for (const auto& [label, values] : globals) {
        std::string merged;
        for (const auto& v : values) {
            if (!merged.empty()) merged += ", ";
            merged += v;
        }
        global_arr.push_back(Json{{"label", label}, {"value", merged}});
    }

    Json objects = Json::array();
    for (const auto& name : object_names) {
        Json features = Json::array();
        auto it = object_features.find(name);
        if (it != object_features.end()) {
            for (const auto& [label, values] : it->second) {
                std::string merged;
                for (const auto& v : values) {
                    if (!merged.empty()) merged += ", ";
                    merged += v;
                }
                features.push_back(Json{{"label", label}, {"value", merged}});
            }
        }
        objects.push_back(Json{{"id", name}, {"name", name}, {"features", features}});
    }

    // Relation table: every animal is located in every place present.
    Json relations = Json::array();
    for (const auto& subject : object_names) {
        if (vocab.at(subject).object_kind != "animal") continue;
        for (const auto& object : object_names) {
            if (vocab.at(object).object_kind != "place") continue;
            relations.push_back(
                Json{{"subject", subject}, {"predicate", "in"}, {"object", object}});
        }
    }

    return Json{{"caption", caption_for(entries)},
                {"global_features", global_arr},
                {"objects", objects},
                {"relations", relations}};
}

Json MockWorld::object_features_json(const std::vector<SceneEntry>& entries,
                                     const std::string& object_name) const {
    Json full = iut_json(entries);
    Json features = Json::array();
    for (const auto& obj : full["objects"]) {
        if (obj["name"] == object_name) {
            features = obj["features"];
            break;
        }
    }
    Json object = Json{{"id", object_name}, {"name", object_name}, {"features", features}};
    return Json{{"caption", object_name},
                {"global_features", Json::array()},
                {"objects", Json::array({object})},
                {"relations", Json::array()}};
}

Json MockWorld::feedback_json(const std::vector<SceneEntry>& reference,
                              const std::set<std::string>& candidate_tokens,
                              Aspect aspect) const {
    const auto& vocab = vocabulary();
    std::set<std::string> ref_tokens = flat_tokens(reference);

    auto binder_of = [&reference](const std::string& token) -> std::string {
        for (const auto& e : reference) {
            if (e.token == token && !e.binder.empty()) return e.binder;
        }
        return "";
    };

    std::vector<std::string> directives;
    for (const auto& t : ref_tokens) {
        if (candidate_tokens.count(t)) continue;
        const TokenInfo& info = vocab.at(t);
        if (info.aspect != aspect) continue;
        std::string d = "add " + info.subclass + " " + t;
        std::string binder = binder_of(t);
        if (!binder.empty()) d += " to " + binder;
        directives.push_back(std::move(d));
    }
    for (const auto& t : candidate_tokens) {
        if (ref_tokens.count(t)) continue;
        auto it = vocab.find(t);
        if (it == vocab.end() || it->second.aspect != aspect) continue;
        directives.push_back("remove " + it->second.subclass + " " + t);
    }

    return Json{{"aspect", aspect_name(aspect)}, {"directives", directives}};
}

Json MockWorld::judge_json(const std::set<std::string>& reference_tokens,
                           const std::set<std::string>& candidate_tokens) const {
    std::vector<std::string> shared, missing, extra;
    std::set_intersection(reference_tokens.begin(), reference_tokens.end(),
                          candidate_tokens.begin(), candidate_tokens.end(),
                          std::back_inserter(shared));
    std::set_difference(reference_tokens.begin(), reference_tokens.end(),
                        candidate_tokens.begin(), candidate_tokens.end(),
                        std::back_inserter(missing));
    std::set_difference(candidate_tokens.begin(), candidate_tokens.end(),
                        reference_tokens.begin(), reference_tokens.end(),
                        std::back_inserter(extra));
    std::size_t union_size = shared.size() + missing.size() + extra.size();
    double jaccard = union_size == 0 ? 1.0
                                     : static_cast<double>(shared.size()) /
                                           static_cast<double>(union_size);
    int score = static_cast<int>(std::llround(1.0 + 4.0 * jaccard));

    auto join = [](const std::vector<std::string>& items) {
        if (items.empty()) return std::string("none");
        std::string out;
        for (const auto& s : items) {
            if (!out.empty()) out += ", ";
            out += s;
        }
        return out;
    };
    std::string rationale = "matched " + std::to_string(shared.size()) + " of " +
                            std::to_string(union_size) + " attributes; missing: " +
                            join(missing) + "; extra: " + join(extra);

    return Json{{"content", score}, {"perceptual", score}, {"rationale", rationale}};
}

std::string MockWorld::initial_prompt_from_iut(const Json& iut) const {
    std::vector<std::string> tokens;
    for (const auto& g : iut.at("global_features")) {
        append_token_list(tokens, g.at("value").get<std::string>());
    }
    for (const auto& obj : iut.at("objects")) {
        tokens.push_back(obj.at("name").get<std::string>());
        for (const auto& f : obj.at("features")) {
            append_token_list(tokens, f.at("value").get<std::string>());
        }
    }
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());

    std::string prompt;
    for (const auto& t : tokens) {
        if (!prompt.empty()) prompt += ", ";
        prompt += t;
    }
    for (const auto& rel : iut.at("relations")) {
        if (!prompt.empty()) prompt += ", ";
        prompt += rel.at("subject").get<std::string>() + " " +
                  rel.at("predicate").get<std::string>() + " " +
                  rel.at("object").get<std::string>();
    }
    return prompt;
}

std::string MockWorld::paraphrase(const std::string& prompt, int variant) const {
    std::vector<std::string> words = split_words(prompt);
    if (!words.empty()) {
        std::size_t shift = static_cast<std::size_t>(variant) % words.size();
        std::rotate(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(shift),
                    words.end());
    }
    const auto& fillers = filler_words();
    std::string filler = fillers[static_cast<std::size_t>(variant - 1) % fillers.size()];
    if (variant > static_cast<int>(fillers.size())) {
        filler += " " + std::to_string(variant);
    }
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += " ";
        out += w;
    }
    if (!out.empty()) out += " ";
    out += filler;
    return out;
}

std::string MockWorld::revise(const std::string& prompt,
                              const std::vector<std::string>& directives) const {
    std::vector<std::string> words = split_words(prompt);
    for (const auto& directive : directives) {
        std::vector<std::string> parts = split_words(directive);
        if (parts.empty()) continue;
        const std::string& verb = parts[0];
        if (verb != "add" && verb != "remove") continue;
        std::string target;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            if (parts[i] == "to" || parts[i] == "from") break;
            if (label_words().count(parts[i])) continue;
            if (in_vocabulary(parts[i])) {
                target = parts[i];
                break;
            }
        }
        if (target.empty()) continue;
        if (verb == "add") {
            // Mentioning a token twice is the emphasis form the renderer honors.
            words.push_back(target);
            words.push_back(target);
        } else {
            words.erase(std::remove(words.begin(), words.end(), target), words.end());
        }
    }
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += " ";
        out += w;
    }
    return out;
}

int MockWorld::embed_dim(const std::string& model_tag) {
    if (model_tag == "clip-like") return 64;
    if (model_tag == "dino-like") return 96;
    raise(ErrorCode::Protocol, "unknown embedding model tag '" + model_tag + "'");
}

std::vector<double> MockWorld::token_unit_vector(const std::string& token,
                                                 const std::string& model_tag) const {
    int dim = embed_dim(model_tag);
    DetRng rng({"embed", model_tag, token, std::to_string(seed_)});
    std::vector<double> v(static_cast<std::size_t>(dim));
    double norm_sq = 0.0;
    for (auto& x : v) {
        x = rng.symmetric();
        norm_sq += x * x;
    }
    double norm = std::sqrt(norm_sq);
    if (norm < 1e-12) raise(ErrorCode::Encoding, "degenerate token vector");
    for (auto& x : v) x /= norm;
    return v;
}

std::vector<double> MockWorld::embed_tokens(const std::set<std::string>& tokens,
                                            const std::string& model_tag) const {
    if (tokens.empty()) {
        raise(ErrorCode::DegenerateEmbedding, "zero-token scene has no embedding");
    }
    int dim = embed_dim(model_tag);
    std::vector<double> sum(static_cast<std::size_t>(dim), 0.0);
    for (const auto& t : tokens) {
        std::vector<double> u = token_unit_vector(t, model_tag);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += u[i];
    }
    double norm_sq = 0.0;
    for (double x : sum) norm_sq += x * x;
    double norm = std::sqrt(norm_sq);
    if (norm < 1e-12) {
        raise(ErrorCode::DegenerateEmbedding, "token vectors cancelled to zero");
    }
    for (auto& x : sum) x /= norm;
    return sum;
}

} // namespace repaint
