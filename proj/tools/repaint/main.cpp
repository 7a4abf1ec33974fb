// repaint CLI: thin argv layer over the C API (librepaint).
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "repaint/capi.h"

namespace {

using Json = nlohmann::json;

struct GlobalOptions {
    std::string config_path;
    bool mock = false;
    bool verbose = false;
    int jobs = 0;
    int iterations = 0;
    std::string fanout;
    std::string weights;
    long long seed = -1;
    std::string out_dir;
    std::string cache_dir;
    std::string model_id;
    std::string initial_prompt_mode;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            items.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) items.push_back(current);
    return items;
}

// Flags become the top override layer of the config stack.
std::string build_overrides(const GlobalOptions& g) {
    Json o = Json::object();
    if (g.mock) {
        for (const char* role : {"mllm", "text_llm", "t2i", "embed"}) {
            o["backends"][role]["kind"] = "mock";
        }
    }
    if (g.jobs > 0) o["jobs"] = g.jobs;
    if (g.iterations > 0) o["iterations"] = g.iterations;
    if (!g.fanout.empty()) {
        Json arr = Json::array();
        for (const auto& item : split_list(g.fanout)) arr.push_back(std::stoi(item));
        o["fan_out"] = arr;
    }
    if (!g.weights.empty()) {
        Json arr = Json::array();
        for (const auto& item : split_list(g.weights)) arr.push_back(std::stod(item));
        o["weights"] = arr;
    }
    if (g.seed >= 0) o["base_seed"] = g.seed;
    if (!g.out_dir.empty()) o["out_dir"] = g.out_dir;
    if (!g.cache_dir.empty()) o["cache_dir"] = g.cache_dir;
    if (!g.model_id.empty()) o["model_id"] = g.model_id;
    if (!g.initial_prompt_mode.empty()) o["initial_prompt_mode"] = g.initial_prompt_mode;
    if (g.verbose) o["log"] = "stderr";
    return o.dump();
}

struct CtxGuard {
    repaint_ctx* ctx = nullptr;
    ~CtxGuard() { repaint_ctx_destroy(ctx); }
};

int make_ctx(const GlobalOptions& g, CtxGuard& guard) {
    std::string overrides = build_overrides(g);
    int rc = repaint_ctx_create(g.config_path.empty() ? nullptr : g.config_path.c_str(),
                                overrides.c_str(), /*use_env=*/1, &guard.ctx);
    if (rc != REPAINT_OK) {
        std::fprintf(stderr, "error: %s\n", repaint_last_error(nullptr));
    }
    return rc;
}

// Prints the JSON result and frees it; returns the exit code.
int finish(int rc, repaint_ctx* ctx, char* result) {
    if (rc != REPAINT_OK) {
        std::fprintf(stderr, "error: %s\n", repaint_last_error(ctx));
        return 1;
    }
    if (result != nullptr) {
        std::printf("%s\n", result);
        repaint_string_free(result);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Image-regeneration evaluation harness for text-to-image models"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON config file");
    app.add_flag("--mock", g.mock, "use in-process deterministic backends; no network");
    app.add_flag("-v,--verbose", g.verbose, "JSON-lines logging to stderr");
    app.add_option("--jobs", g.jobs, "max concurrent backend calls");
    app.add_option("--iterations", g.iterations, "iteration rounds T");
    app.add_option("--fanout", g.fanout, "per-iteration prompt counts, e.g. 4,3,3,3");
    app.add_option("--weights", g.weights, "composite weights clip,dino,gpt-con,gpt-per");
    app.add_option("--seed", g.seed, "base seed for candidate generation");
    app.add_option("--out", g.out_dir, "run store directory (default: runs)");
    app.add_option("--cache-dir", g.cache_dir, "response cache directory (default: cache)");
    app.add_option("--model", g.model_id, "model id recorded in reports");
    app.add_option("--initial-prompt-mode", g.initial_prompt_mode,
                   "iut (default) or caption (ablation)");

    std::string image_path, manifest_path, resume_id, run_id;
    std::string runs_list, humans_csv, metric = "gpt_per", report_csv, out_path;
    long long max_age_seconds = 0;

    CLI::App* understand = app.add_subcommand("understand", "build the understanding tree");
    understand->add_option("--image", image_path, "reference image")->required();
    understand->add_option("--run-id", run_id, "explicit run id");

    CLI::App* regen = app.add_subcommand("regen", "full regeneration pipeline for one image");
    regen->add_option("--image", image_path, "reference image")->required();
    regen->add_option("--run-id", run_id, "explicit run id");
    regen->add_option("--resume", resume_id, "resume an existing run id");

    CLI::App* bench = app.add_subcommand("bench", "run a benchmark manifest");
    bench->add_option("--manifest", manifest_path, "manifest.json")->required();
    bench->add_option("--run-id", run_id, "explicit run id");
    bench->add_option("--resume", resume_id, "resume an existing bench run id");

    CLI::App* report = app.add_subcommand("report", "aggregate bench runs into report files");
    report->add_option("--runs", runs_list, "comma-separated bench run directories")->required();
    report->add_option("--humans", humans_csv, "human study CSV");
    report->add_option("--metric", metric, "gpt_per (default) or gpt_con");
    report->add_option("--out", out_path, "output directory")->required();

    CLI::App* correlate = app.add_subcommand("correlate", "rank correlation vs human study");
    correlate->add_option("--report", report_csv, "report.csv from `report`")->required();
    correlate->add_option("--humans", humans_csv, "human study CSV")->required();
    correlate->add_option("--metric", metric, "gpt_per (default) or gpt_con");
    correlate->add_option("--out", out_path, "write correlation.json here");

    CLI::App* cache = app.add_subcommand("cache", "response cache maintenance");
    cache->require_subcommand(1);
    CLI::App* cache_stats = cache->add_subcommand("stats", "entry count, bytes, call counters");
    CLI::App* cache_gc = cache->add_subcommand("gc", "drop cache entries");
    cache_gc->add_option("--max-age-seconds", max_age_seconds,
                         "only drop entries older than this (default: all)");

    CLI::App* doctor = app.add_subcommand("doctor", "backend capability check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CtxGuard guard;
    if (int rc = make_ctx(g, guard); rc != REPAINT_OK) {
        return rc == REPAINT_ERR_CONFIG ? 2 : 1;
    }

    char* result = nullptr;
    if (understand->parsed()) {
        int rc = repaint_understand(guard.ctx, image_path.c_str(),
                                    run_id.empty() ? nullptr : run_id.c_str(), &result);
        return finish(rc, guard.ctx, result);
    }
    if (regen->parsed()) {
        bool resume = !resume_id.empty();
        const std::string& id = resume ? resume_id : run_id;
        int rc = repaint_regenerate(guard.ctx, image_path.c_str(),
                                    id.empty() ? nullptr : id.c_str(), resume ? 1 : 0, &result);
        return finish(rc, guard.ctx, result);
    }
    if (bench->parsed()) {
        bool resume = !resume_id.empty();
        const std::string& id = resume ? resume_id : run_id;
        int rc = repaint_bench(guard.ctx, manifest_path.c_str(),
                               id.empty() ? nullptr : id.c_str(), resume ? 1 : 0, &result);
        return finish(rc, guard.ctx, result);
    }
    if (report->parsed()) {
        Json dirs = Json::array();
        for (const auto& d : split_list(runs_list)) dirs.push_back(d);
        int rc = repaint_report(guard.ctx, dirs.dump().c_str(),
                                humans_csv.empty() ? nullptr : humans_csv.c_str(),
                                metric.c_str(), out_path.c_str(), &result);
        return finish(rc, guard.ctx, result);
    }
    if (correlate->parsed()) {
        int rc = repaint_correlate(guard.ctx, report_csv.c_str(), humans_csv.c_str(),
                                   metric.c_str(), out_path.empty() ? nullptr : out_path.c_str(),
                                   &result);
        return finish(rc, guard.ctx, result);
    }
    if (cache->parsed()) {
        if (cache_stats->parsed()) {
            return finish(repaint_cache_stats(guard.ctx, &result), guard.ctx, result);
        }
        if (cache_gc->parsed()) {
            return finish(repaint_cache_gc(guard.ctx, max_age_seconds, &result), guard.ctx,
                          result);
        }
    }
    if (doctor->parsed()) {
        int rc = repaint_doctor(guard.ctx, &result);
        if (rc == REPAINT_OK && result != nullptr) {
            bool healthy = Json::parse(result).value("ok", false);
            std::printf("%s\n", result);
            repaint_string_free(result);
            return healthy ? 0 : 1;
        }
        return finish(rc, guard.ctx, result);
    }
    return 2;
}
