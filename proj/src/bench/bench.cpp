#include "repaint/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

#include "repaint/concurrency.hpp"
#include "repaint/errors.hpp"
#include "repaint/fs_util.hpp"
#include "repaint/iterate.hpp"
#include "repaint/log.hpp"
#include "repaint/store.hpp"

namespace repaint {

int BenchmarkRun::succeeded() const {
    int n = 0;
    for (const auto& s : samples) {
        if (s.scores) ++n;
    }
    return n;
}

Json BenchmarkRun::to_json() const {
    Json sample_arr = Json::array();
    for (const auto& s : samples) {
        sample_arr.push_back(Json{{"id", s.id},
                                  {"category", s.category},
                                  {"scores", s.scores ? s.scores->to_json() : Json()},
                                  {"error", s.error}});
    }
    return Json{{"model_id", model_id},
                {"manifest", manifest_name},
                {"samples", sample_arr},
                {"degraded", degraded}};
}

BenchmarkRun BenchmarkRun::from_json(const Json& j) {
    BenchmarkRun run;
    run.model_id = j.at("model_id").get<std::string>();
    run.manifest_name = j.at("manifest").get<std::string>();
    for (const auto& s : j.at("samples")) {
        SampleOutcome outcome;
        outcome.id = s.at("id").get<std::string>();
        outcome.category = s.at("category").get<std::string>();
        if (!s.at("scores").is_null()) outcome.scores = ScoreVector::from_json(s["scores"]);
        outcome.error = s.value("error", "");
        run.samples.push_back(std::move(outcome));
    }
    run.degraded = j.at("degraded").get<bool>();
    return run;
}

BenchmarkRun run_benchmark(BackendSession& session, const TemplateSet& templates,
                           const BenchmarkManifest& manifest, const std::string& bench_dir,
                           bool resume) {
    namespace fs = std::filesystem;
    const RunConfig& config = session.config();

    BenchmarkRun run;
    run.model_id = config.model_id;
    run.manifest_name = manifest.name;
    run.samples.resize(manifest.samples.size());

    write_file_atomic(fs::path(bench_dir) / "config.json", canonical_json(config.to_json()));
    write_file_atomic(fs::path(bench_dir) / "histogram.csv", manifest.histogram_csv());

    // Samples are independent pipelines; inner backend calls share the
    // session's global limit, so parallelism here stays bounded overall.
    parallel_for(manifest.samples.size(), config.jobs, [&](std::size_t i) {
        const ManifestSample& sample = manifest.samples[i];
        SampleOutcome& outcome = run.samples[i];
        outcome.id = sample.id;
        outcome.category = sample.category;

        RunStore store(fs::path(bench_dir) / "samples" / sample.id);
        try {
            RegenerationResult result;
            if (resume && store.has("result.json")) {
                result = RegenerationResult::from_json(*store.load_json("result.json"));
            } else {
                ReferenceImage image = ReferenceImage::from_file(sample.image, sample.category);
                result = run_regeneration(session, templates, image, store, resume);
            }
            const Candidate& final_candidate = result.final_candidate();
            if (!final_candidate.scores) {
                raise(ErrorCode::Run, "final candidate carries no scores");
            }
            outcome.scores = final_candidate.scores;
        } catch (const Error& e) {
            outcome.error = std::string(error_code_name(e.code())) + ": " + e.what();
            log_event("sample_failed", {{"sample", sample.id}, {"error", outcome.error}});
        }
    });

    int failed = static_cast<int>(run.samples.size()) - run.succeeded();
    run.degraded = failed * 2 > static_cast<int>(run.samples.size());

    write_file_atomic(fs::path(bench_dir) / "summary.json", canonical_json(run.to_json()));
    return run;
}

namespace {

struct Accumulator {
    int n = 0;
    double clip = 0.0, dino = 0.0, content = 0.0, perceptual = 0.0;

    void add(const ScoreVector& s) {
        ++n;
        clip += s.clip_pct;
        dino += s.dino_pct;
        content += normalize_judge(static_cast<double>(s.judge_content));
        perceptual += normalize_judge(static_cast<double>(s.judge_perceptual));
    }

    CategoryMeans means(const std::string& category) const {
        CategoryMeans m;
        m.category = category;
        m.samples = n;
        if (n > 0) {
            m.clip_pct = clip / n;
            m.dino_pct = dino / n;
            m.judge_content = content / n;
            m.judge_perceptual = perceptual / n;
        }
        return m;
    }
};

Json category_to_json(const CategoryMeans& m) {
    return Json{{"category", m.category},
                {"samples", m.samples},
                {"clip_pct", m.clip_pct},
                {"dino_pct", m.dino_pct},
                {"judge_content", m.judge_content},
                {"judge_perceptual", m.judge_perceptual}};
}

CategoryMeans category_from_json(const Json& j) {
    CategoryMeans m;
    m.category = j.at("category").get<std::string>();
    m.samples = j.at("samples").get<int>();
    m.clip_pct = j.at("clip_pct").get<double>();
    m.dino_pct = j.at("dino_pct").get<double>();
    m.judge_content = j.at("judge_content").get<double>();
    m.judge_perceptual = j.at("judge_perceptual").get<double>();
    return m;
}

} // namespace

Json ModelReport::to_json() const {
    Json categories = Json::array();
    for (const auto& c : per_category) categories.push_back(category_to_json(c));
    return Json{{"model_id", model_id},
                {"samples", samples},
                {"failed", failed},
                {"overall", category_to_json(overall)},
                {"per_category", categories},
                {"provenance", provenance}};
}

ModelReport ModelReport::from_json(const Json& j) {
    ModelReport r;
    r.model_id = j.at("model_id").get<std::string>();
    r.samples = j.at("samples").get<int>();
    r.failed = j.at("failed").get<int>();
    r.overall = category_from_json(j.at("overall"));
    for (const auto& c : j.at("per_category")) r.per_category.push_back(category_from_json(c));
    r.provenance = j.value("provenance", Json::object());
    return r;
}

ModelReport aggregate(const BenchmarkRun& run) {
    Accumulator overall;
    std::map<std::string, Accumulator> by_category;
    int failed = 0;
    for (const auto& s : run.samples) {
        if (!s.scores) {
            ++failed;
            continue;
        }
        overall.add(*s.scores);
        by_category[s.category].add(*s.scores);
    }
    if (overall.n == 0) {
        raise(ErrorCode::Aggregate, "no successful samples to aggregate");
    }

    ModelReport report;
    report.model_id = run.model_id;
    report.samples = overall.n;
    report.failed = failed;
    report.overall = overall.means("overall");
    for (const auto& [category, acc] : by_category) {
        report.per_category.push_back(acc.means(category));
    }
    report.provenance = Json{{"manifest", run.manifest_name},
                             {"judge_normalization", "(s-1)/4"},
                             {"failed_samples_excluded", true}};
    return report;
}

} // namespace repaint
