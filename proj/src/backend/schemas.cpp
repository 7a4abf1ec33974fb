#include "repaint/schemas.hpp"

#include "repaint/errors.hpp"
#include "repaint/types.hpp"

namespace repaint {

namespace {

void require_string(const Json& j, const char* key, std::vector<std::string>& problems) {
    if (!j.contains(key)) {
        problems.push_back(std::string("missing key '") + key + "'");
    } else if (!j[key].is_string()) {
        problems.push_back(std::string("key '") + key + "' must be a string");
    }
}

void check_feature_array(const Json& j, const std::string& where,
                         std::vector<std::string>& problems) {
    if (!j.is_array()) {
        problems.push_back(where + " must be an array");
        return;
    }
    for (const auto& f : j) {
        if (!f.is_object() || !f.contains("label") || !f.contains("value") ||
            !f["label"].is_string() || !f["value"].is_string()) {
            problems.push_back(where + " entries must be {label: string, value: string}");
            return;
        }
    }
}

} // namespace

std::vector<std::string> check_iut_schema(const Json& j) {
    std::vector<std::string> problems;
    if (!j.is_object()) {
        problems.push_back("response must be a JSON object");
        return problems;
    }
    require_string(j, "caption", problems);
    if (!j.contains("global_features")) {
        problems.push_back("missing key 'global_features'");
    } else {
        check_feature_array(j["global_features"], "global_features", problems);
    }
    if (!j.contains("objects") || !j["objects"].is_array()) {
        problems.push_back("missing or non-array key 'objects'");
    } else {
        for (const auto& obj : j["objects"]) {
            if (!obj.is_object()) {
                problems.push_back("objects entries must be objects");
                break;
            }
            std::vector<std::string> sub;
            require_string(obj, "id", sub);
            require_string(obj, "name", sub);
            if (!obj.contains("features")) {
                sub.push_back("missing key 'features'");
            } else {
                check_feature_array(obj["features"], "object features", sub);
            }
            for (auto& p : sub) problems.push_back("objects: " + p);
            if (!sub.empty()) break;
        }
    }
    if (!j.contains("relations") || !j["relations"].is_array()) {
        problems.push_back("missing or non-array key 'relations'");
    } else {
        for (const auto& rel : j["relations"]) {
            if (!rel.is_object() || !rel.contains("subject") || !rel.contains("predicate") ||
                !rel.contains("object") || !rel["subject"].is_string() ||
                !rel["predicate"].is_string() || !rel["object"].is_string()) {
                problems.push_back(
                    "relations entries must be {subject: string, predicate: string, object: string}");
                break;
            }
        }
    }
    return problems;
}

std::vector<std::string> check_feedback_schema(const Json& j) {
    std::vector<std::string> problems;
    if (!j.is_object()) {
        problems.push_back("response must be a JSON object");
        return problems;
    }
    if (!j.contains("aspect") || !j["aspect"].is_string()) {
        problems.push_back("missing or non-string key 'aspect'");
    } else {
        const std::string aspect = j["aspect"].get<std::string>();
        if (aspect != "overall" && aspect != "style" && aspect != "color" && aspect != "detail") {
            problems.push_back("aspect must be one of overall|style|color|detail");
        }
    }
    if (!j.contains("directives") || !j["directives"].is_array()) {
        problems.push_back("missing or non-array key 'directives'");
    } else {
        for (const auto& d : j["directives"]) {
            if (!d.is_string() || d.get<std::string>().empty()) {
                problems.push_back("directives must be non-empty strings");
                break;
            }
        }
    }
    return problems;
}

std::vector<std::string> check_judge_schema(const Json& j) {
    std::vector<std::string> problems;
    if (!j.is_object()) {
        problems.push_back("response must be a JSON object");
        return problems;
    }
    for (const char* key : {"content", "perceptual"}) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            problems.push_back(std::string("missing or non-integer key '") + key + "'");
            continue;
        }
        int v = j[key].get<int>();
        if (v < 1 || v > 5) {
            problems.push_back(std::string("key '") + key + "' must be in 1..5");
        }
    }
    require_string(j, "rationale", problems);
    return problems;
}

std::vector<std::string> check_schema(const std::string& schema_id, const Json& j) {
    if (schema_id == "freeform") return {};
    if (schema_id == "iut") return check_iut_schema(j);
    if (schema_id == "feedback") return check_feedback_schema(j);
    if (schema_id == "judge") return check_judge_schema(j);
    raise(ErrorCode::Protocol, "unknown response schema '" + schema_id + "'");
}

} // namespace repaint
