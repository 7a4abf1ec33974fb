#include "repaint/capi.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <sstream>

#include "repaint/bench.hpp"
#include "repaint/correlate.hpp"
#include "repaint/errors.hpp"
#include "repaint/fs_util.hpp"
#include "repaint/hash.hpp"
#include "repaint/http_backend.hpp"
#include "repaint/human.hpp"
#include "repaint/iterate.hpp"
#include "repaint/log.hpp"
#include "repaint/manifest.hpp"
#include "repaint/report.hpp"
#include "repaint/score.hpp"
#include "repaint/session.hpp"
#include "repaint/templates.hpp"
#include "repaint/understand.hpp"
#include "repaint/validate.hpp"

extern char** environ;

struct repaint_ctx {
    repaint::RunConfig config;
    std::unique_ptr<repaint::BackendSession> session;
    repaint::TemplateSet templates;
    mutable std::mutex error_mutex;
    std::string last_error;
};

namespace {

namespace fs = std::filesystem;
using repaint::Json;

thread_local std::string g_thread_error;

void set_error(const repaint_ctx* ctx, const std::string& message) {
    if (ctx != nullptr) {
        std::lock_guard lock(ctx->error_mutex);
        const_cast<repaint_ctx*>(ctx)->last_error = message;
    } else {
        g_thread_error = message;
    }
}

int code_of(const repaint::Error& e) { return static_cast<int>(e.code()); }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
int guarded(repaint_ctx* ctx, Fn&& fn) {
    try {
        return fn();
    } catch (const repaint::Error& e) {
        set_error(ctx, std::string(repaint::error_code_name(e.code())) + ": " + e.what());
        return code_of(e);
    } catch (const std::exception& e) {
        set_error(ctx, std::string("unexpected error: ") + e.what());
        return REPAINT_ERR_UNKNOWN;
    } catch (...) {
        set_error(ctx, "unexpected error");
        return REPAINT_ERR_UNKNOWN;
    }
}

int out_json(char** out, const Json& value) {
    *out = dup_string(repaint::canonical_json(value));
    return *out == nullptr ? REPAINT_ERR_UNKNOWN : REPAINT_OK;
}

std::map<std::string, std::string> environment_map() {
    std::map<std::string, std::string> env;
    for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
        std::string_view entry(*e);
        auto eq = entry.find('=');
        if (eq == std::string_view::npos) continue;
        std::string key(entry.substr(0, eq));
        if (key.rfind("REPAINT_", 0) == 0) env[key] = std::string(entry.substr(eq + 1));
    }
    return env;
}

std::string derive_run_id(const char* requested, const std::string& prefix,
                          const std::string& material) {
    if (requested != nullptr && *requested != '\0') return requested;
    return prefix + repaint::sha256_hex(material).substr(0, 16);
}

// report.csv column access for correlate.
std::vector<std::pair<std::string, double>> read_report_metric(const std::string& csv_path,
                                                               const std::string& metric) {
    std::string text = repaint::read_file(csv_path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        repaint::raise(repaint::ErrorCode::Validation, "report csv is empty");
    }
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string field;
        while (std::getline(h, field, ',')) header.push_back(field);
    }
    std::size_t column = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == metric) column = i;
    }
    if (column == header.size()) {
        repaint::raise(repaint::ErrorCode::Validation,
                       "report csv has no column '" + metric + "'");
    }
    std::vector<std::pair<std::string, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream r(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(r, field, ',')) fields.push_back(field);
        if (fields.size() != header.size()) {
            repaint::raise(repaint::ErrorCode::Validation, "report csv row width mismatch");
        }
        rows.emplace_back(fields[0], std::stod(fields[column]));
    }
    return rows;
}

repaint::CorrelationReport correlate_against_humans(
    const std::vector<std::pair<std::string, double>>& metric_rows,
    const std::string& humans_csv, const std::string& metric) {
    repaint::HumanScores humans = repaint::ingest_human_study(humans_csv);
    auto human_means = humans.per_model_normalized();

    std::vector<std::string> models;
    std::vector<double> metric_values;
    std::vector<double> human_values;
    for (const auto& [model, value] : metric_rows) {
        auto it = human_means.find(model);
        if (it == human_means.end()) continue;
        models.push_back(model);
        metric_values.push_back(value);
        human_values.push_back(metric == "gpt_con" ? it->second.content
                                                   : it->second.perceptual);
    }
    return repaint::correlate(models, metric_values, human_values);
}

} // namespace

extern "C" {

const char* repaint_version(void) { return REPAINT_VERSION_STRING; }

int repaint_ctx_create(const char* config_path, const char* overrides_json, int use_env,
                       repaint_ctx** out_ctx) {
    if (out_ctx == nullptr) return REPAINT_ERR_ARGUMENT;
    *out_ctx = nullptr;
    return guarded(nullptr, [&] {
        Json overrides;
        if (overrides_json != nullptr && *overrides_json != '\0') {
            overrides = repaint::parse_json(overrides_json);
        }
        std::map<std::string, std::string> env;
        if (use_env != 0) env = environment_map();

        auto ctx = std::make_unique<repaint_ctx>();
        ctx->config = repaint::load_config(
            config_path == nullptr ? "" : config_path, env, overrides);
        repaint::set_logging(ctx->config.log == "stderr");
        ctx->session = std::make_unique<repaint::BackendSession>(ctx->config);
        ctx->templates = ctx->config.template_dir.empty()
                             ? repaint::TemplateSet()
                             : repaint::TemplateSet::load(ctx->config.template_dir);
        *out_ctx = ctx.release();
        return REPAINT_OK;
    });
}

void repaint_ctx_destroy(repaint_ctx* ctx) { delete ctx; }

const char* repaint_last_error(const repaint_ctx* ctx) {
    if (ctx == nullptr) return g_thread_error.c_str();
    std::lock_guard lock(ctx->error_mutex);
    return ctx->last_error.c_str();
}

void repaint_string_free(char* s) { std::free(s); }

int repaint_resolved_config(repaint_ctx* ctx, char** out) {
    if (ctx == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(ctx, [&] { return out_json(out, ctx->config.to_json()); });
}

int repaint_understand(repaint_ctx* ctx, const char* image_path, const char* run_id,
                       char** out) {
    if (ctx == nullptr || image_path == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(ctx, [&] {
        repaint::ReferenceImage image = repaint::ReferenceImage::from_file(image_path);
        std::string id = derive_run_id(run_id, "r", image.id + ":" + ctx->config.hash());
        repaint::RunStore store(fs::path(ctx->config.out_dir) / id);
        store.save_json("config.json", ctx->config.to_json());

        repaint::BuildOutcome outcome =
            repaint::build_iut(*ctx->session, ctx->templates, image, &store);
        repaint::Prompt initial =
            repaint::synthesize_initial_prompt(*ctx->session, ctx->templates, outcome.tree);
        store.save_json("initial_prompt.json", initial.to_json());

        return out_json(out, Json{{"run_id", id},
                                  {"run_dir", store.root().string()},
                                  {"iut", outcome.tree.to_json()},
                                  {"initial_prompt", initial.to_json()},
                                  {"warnings", outcome.warnings}});
    });
}

int repaint_regenerate(repaint_ctx* ctx, const char* image_path, const char* run_id, int resume,
                       char** out) {
    if (ctx == nullptr || image_path == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(ctx, [&] {
        repaint::ReferenceImage image = repaint::ReferenceImage::from_file(image_path);
        std::string id = derive_run_id(run_id, "r", image.id + ":" + ctx->config.hash());
        repaint::RunStore store(fs::path(ctx->config.out_dir) / id);
        repaint::RegenerationResult result = repaint::run_regeneration(
            *ctx->session, ctx->templates, image, store, resume != 0);
        return out_json(out, Json{{"run_id", id},
                                  {"run_dir", store.root().string()},
                                  {"result", result.to_json()}});
    });
}

int repaint_bench(repaint_ctx* ctx, const char* manifest_path, const char* run_id, int resume,
                  char** out) {
    if (ctx == nullptr || manifest_path == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(ctx, [&] {
        repaint::BenchmarkManifest manifest = repaint::load_manifest(manifest_path);
        std::string material = manifest.name + ":" + ctx->config.hash();
        std::string id = derive_run_id(run_id, "b", material);
        std::string dir = (fs::path(ctx->config.out_dir) / id).string();

        repaint::BenchmarkRun run = repaint::run_benchmark(*ctx->session, ctx->templates,
                                                           manifest, dir, resume != 0);
        repaint::ModelReport report = repaint::aggregate(run);
        repaint::emit_report({report}, std::nullopt, dir);

        return out_json(out, Json{{"run_id", id},
                                  {"run_dir", dir},
                                  {"summary", run.to_json()},
                                  {"report", report.to_json()}});
    });
}

int repaint_report(repaint_ctx* ctx, const char* bench_dirs_json, const char* humans_csv,
                   const char* metric, const char* out_dir, char** out) {
    if (ctx == nullptr || bench_dirs_json == nullptr || out_dir == nullptr || out == nullptr) {
        return REPAINT_ERR_ARGUMENT;
    }
    return guarded(ctx, [&] {
        Json dirs = repaint::parse_json(bench_dirs_json);
        if (!dirs.is_array() || dirs.empty()) {
            repaint::raise(repaint::ErrorCode::Validation,
                           "bench_dirs must be a non-empty JSON array");
        }
        std::vector<repaint::ModelReport> reports;
        for (const auto& d : dirs) {
            fs::path summary = fs::path(d.get<std::string>()) / "summary.json";
            repaint::BenchmarkRun run =
                repaint::BenchmarkRun::from_json(repaint::parse_json(repaint::read_file(summary)));
            reports.push_back(repaint::aggregate(run));
        }

        std::optional<repaint::CorrelationReport> correlation;
        std::string metric_name = (metric == nullptr || *metric == '\0') ? "gpt_per" : metric;
        if (humans_csv != nullptr && *humans_csv != '\0') {
            std::vector<std::pair<std::string, double>> rows;
            for (const auto& r : reports) {
                rows.emplace_back(r.model_id, metric_name == "gpt_con"
                                                  ? r.overall.judge_content
                                                  : r.overall.judge_perceptual);
            }
            correlation = correlate_against_humans(rows, humans_csv, metric_name);
        }
        repaint::emit_report(reports, correlation, out_dir);

        Json report_arr = Json::array();
        for (const auto& r : reports) report_arr.push_back(r.to_json());
        Json result{{"out_dir", out_dir}, {"reports", report_arr}};
        if (correlation) result["correlation"] = correlation->to_json();
        return out_json(out, result);
    });
}

int repaint_correlate(repaint_ctx* ctx, const char* report_csv, const char* humans_csv,
                      const char* metric, const char* out_path, char** out) {
    if (ctx == nullptr || report_csv == nullptr || humans_csv == nullptr || out == nullptr) {
        return REPAINT_ERR_ARGUMENT;
    }
    return guarded(ctx, [&] {
        std::string metric_name = (metric == nullptr || *metric == '\0') ? "gpt_per" : metric;
        auto rows = read_report_metric(report_csv, metric_name);
        repaint::CorrelationReport report =
            correlate_against_humans(rows, humans_csv, metric_name);
        if (out_path != nullptr && *out_path != '\0') {
            repaint::write_file_atomic(out_path, repaint::canonical_json(report.to_json()));
        }
        return out_json(out, report.to_json());
    });
}

int repaint_doctor(repaint_ctx* ctx, char** out) {
    if (ctx == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(ctx, [&] {
        Json roles = Json::object();
        auto probe = [&](const char* name, const repaint::BackendEndpoint& endpoint) {
            Json entry{{"kind", endpoint.kind}, {"url", endpoint.url}};
            if (endpoint.kind == "http") {
                try {
                    entry["capabilities"] =
                        repaint::fetch_capabilities(endpoint.url, ctx->config.api_key);
                    entry["ok"] = true;
                } catch (const repaint::Error& e) {
                    entry["ok"] = false;
                    entry["error"] = e.what();
                }
            } else {
                entry["ok"] = true;
            }
            roles[name] = entry;
        };
        probe("mllm", ctx->config.mllm);
        probe("text_llm", ctx->config.text_llm);
        probe("t2i", ctx->config.t2i);
        probe("embed", ctx->config.embed);

        Json result{{"roles", roles}};
        try {
            result["embed_dims"] = ctx->session->capabilities().to_json()["embed_dims"];
            result["ok"] = true;
        } catch (const repaint::Error& e) {
            result["ok"] = false;
            result["error"] = e.what();
        }
        return out_json(out, result);
    });
}

int repaint_cache_stats(repaint_ctx* ctx, char** out) {
    if (ctx == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(ctx, [&] {
        repaint::ResponseCache::Stats stats = ctx->session->cache().stats();
        return out_json(out, Json{{"dir", ctx->config.cache_dir},
                                  {"entries", stats.entries},
                                  {"bytes", stats.bytes},
                                  {"counters", ctx->session->stats_json()}});
    });
}

int repaint_cache_gc(repaint_ctx* ctx, long long max_age_seconds, char** out) {
    if (ctx == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(ctx, [&] {
        std::uint64_t removed = ctx->session->cache().gc(
            max_age_seconds < 0 ? 0 : static_cast<std::uint64_t>(max_age_seconds));
        return out_json(out, Json{{"removed", removed}});
    });
}

int repaint_validate_iut(const char* iut_json, char** out) {
    if (iut_json == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(nullptr, [&] {
        repaint::ImageUnderstandingTree tree =
            repaint::ImageUnderstandingTree::from_json(repaint::parse_json(iut_json));
        repaint::ValidationReport report = repaint::validate_iut(tree);
        return out_json(out, Json{{"ok", report.ok()}, {"violations", report.violations}});
    });
}

int repaint_canonical_json(const char* json_text, char** out) {
    if (json_text == nullptr || out == nullptr) return REPAINT_ERR_ARGUMENT;
    return guarded(nullptr, [&] {
        *out = dup_string(repaint::canonical_json(repaint::parse_json(json_text)));
        return *out == nullptr ? REPAINT_ERR_UNKNOWN : REPAINT_OK;
    });
}

int repaint_cosine_similarity(const double* a, const double* b, int dim, double* out) {
    if (a == nullptr || b == nullptr || out == nullptr || dim < 1) return REPAINT_ERR_ARGUMENT;
    return guarded(nullptr, [&] {
        repaint::EmbeddingVector va{std::vector<double>(a, a + dim), dim, "raw"};
        repaint::EmbeddingVector vb{std::vector<double>(b, b + dim), dim, "raw"};
        *out = repaint::cosine_similarity(va, vb);
        return REPAINT_OK;
    });
}

int repaint_spearman(const double* a, const double* b, int n, double* out) {
    if (a == nullptr || b == nullptr || out == nullptr || n < 2) return REPAINT_ERR_ARGUMENT;
    return guarded(nullptr, [&] {
        *out = repaint::spearman_rho(std::vector<double>(a, a + n),
                                     std::vector<double>(b, b + n));
        return REPAINT_OK;
    });
}

int repaint_kendall(const double* a, const double* b, int n, double* out) {
    if (a == nullptr || b == nullptr || out == nullptr || n < 2) return REPAINT_ERR_ARGUMENT;
    return guarded(nullptr, [&] {
        *out = repaint::kendall_tau(std::vector<double>(a, a + n),
                                    std::vector<double>(b, b + n));
        return REPAINT_OK;
    });
}

} // extern "C"
