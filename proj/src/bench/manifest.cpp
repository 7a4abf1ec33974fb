#include "repaint/manifest.hpp"

#include <filesystem>
#include <set>

#include "repaint/errors.hpp"
#include "repaint/fs_util.hpp"

namespace repaint {

std::map<std::string, int> BenchmarkManifest::histogram() const {
    std::map<std::string, int> counts;
    for (const auto& c : categories) counts[c] = 0;
    for (const auto& s : samples) counts[s.category] += 1;
    return counts;
}

std::string BenchmarkManifest::histogram_csv() const {
    std::string out = "category,count\n";
    for (const auto& [category, count] : histogram()) {
        out += category + "," + std::to_string(count) + "\n";
    }
    return out;
}

BenchmarkManifest load_manifest(const std::string& path) {
    namespace fs = std::filesystem;
    Json j;
    try {
        j = parse_json(read_file(path));
    } catch (const Error& e) {
        raise(ErrorCode::Manifest, std::string("manifest unreadable: ") + e.what());
    }
    if (!j.is_object()) raise(ErrorCode::Manifest, "manifest: expected JSON object");

    BenchmarkManifest m;
    m.name = j.value("name", "unnamed");
    m.kind = j.value("kind", "custom");
    if (m.kind != "style-diverse" && m.kind != "content-diverse" && m.kind != "custom") {
        raise(ErrorCode::Manifest, "manifest.kind: expected style-diverse|content-diverse|custom");
    }
    if (!j.contains("categories") || !j["categories"].is_array()) {
        raise(ErrorCode::Manifest, "manifest.categories: expected array");
    }
    m.categories = j["categories"].get<std::vector<std::string>>();
    std::set<std::string> vocabulary(m.categories.begin(), m.categories.end());

    if (!j.contains("samples") || !j["samples"].is_array() || j["samples"].empty()) {
        raise(ErrorCode::Manifest, "manifest.samples: expected non-empty array");
    }

    fs::path base = fs::path(path).parent_path();
    std::vector<std::string> missing;
    int index = 0;
    for (const auto& s : j["samples"]) {
        if (!s.is_object() || !s.contains("image") || !s.contains("category")) {
            raise(ErrorCode::Manifest,
                  "manifest.samples[" + std::to_string(index) + "]: expected {image, category}");
        }
        ManifestSample sample;
        char id[16];
        std::snprintf(id, sizeof(id), "s%04d", index);
        sample.id = id;
        sample.image = (base / s["image"].get<std::string>()).string();
        sample.category = s["category"].get<std::string>();
        sample.caption = s.value("caption", "");
        if (!vocabulary.count(sample.category)) {
            raise(ErrorCode::Manifest, "manifest.samples[" + std::to_string(index) +
                                           "].category: '" + sample.category +
                                           "' not in category vocabulary");
        }
        if (!file_exists(sample.image)) missing.push_back(sample.image);
        m.samples.push_back(std::move(sample));
        ++index;
    }

    if (!missing.empty()) {
        std::string message = "missing image files:";
        for (const auto& p : missing) message += " " + p;
        raise(ErrorCode::Manifest, message);
    }
    return m;
}

} // namespace repaint
