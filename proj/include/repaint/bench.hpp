#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repaint/manifest.hpp"
#include "repaint/score.hpp"
#include "repaint/session.hpp"
#include "repaint/templates.hpp"

namespace repaint {

struct SampleOutcome {
    std::string id;
    std::string category;
    std::optional<ScoreVector> scores; // of the final candidate; absent = failed
    std::string error;
};

struct BenchmarkRun {
    std::string model_id;
    std::string manifest_name;
    std::vector<SampleOutcome> samples;
    bool degraded = false; // more than half the samples failed

    int succeeded() const;
    Json to_json() const;
    static BenchmarkRun from_json(const Json& j);
};

// Per-category and overall means of the final candidates' metrics. Judge
// columns are normalized to [0,1] via (s-1)/4.
struct CategoryMeans {
    std::string category;
    int samples = 0;
    double clip_pct = 0.0;
    double dino_pct = 0.0;
    double judge_content = 0.0;
    double judge_perceptual = 0.0;
};

struct ModelReport {
    std::string model_id;
    int samples = 0;
    int failed = 0;
    CategoryMeans overall; // category == "overall"
    std::vector<CategoryMeans> per_category;
    Json provenance;

    Json to_json() const;
    static ModelReport from_json(const Json& j);
};

// Runs the full pipeline per sample into <bench_dir>/samples/<id>/; failures
// are recorded and the run continues. Resumable at sample granularity.
BenchmarkRun run_benchmark(BackendSession& session, const TemplateSet& templates,
                           const BenchmarkManifest& manifest, const std::string& bench_dir,
                           bool resume = false);

ModelReport aggregate(const BenchmarkRun& run);

} // namespace repaint
