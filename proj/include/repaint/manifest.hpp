#pragma once

#include <map>
#include <string>
#include <vector>

#include "repaint/json_util.hpp"

namespace repaint {

struct ManifestSample {
    std::string id;       // sNNNN, positional
    std::string image;    // path resolved against the manifest directory
    std::string category;
    std::string caption;  // optional fallback caption
};

// Benchmark description: a named set of reference images with category
// labels. The images themselves are not shipped; the manifest format is the
// contract. File schema (manifest.json):
//   {"name": str, "kind": "style-diverse"|"content-diverse"|"custom",
//    "categories": [str], "samples": [{"image": relpath, "category": str,
//    "caption"?: str}]}
struct BenchmarkManifest {
    std::string name;
    std::string kind = "custom";
    std::vector<std::string> categories;
    std::vector<ManifestSample> samples;

    std::map<std::string, int> histogram() const;
    std::string histogram_csv() const;
};

// Validates structure, category vocabulary and image existence; a missing
// image raises ManifestError listing every missing path.
BenchmarkManifest load_manifest(const std::string& path);

} // namespace repaint
