#include "repaint/report.hpp"

#include <cstdio>
#include <filesystem>

#include "repaint/errors.hpp"
#include "repaint/fs_util.hpp"

namespace repaint {

namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

} // namespace

std::string render_report_markdown(const std::vector<ModelReport>& reports,
                                   const std::optional<CorrelationReport>& correlation) {
    std::string md = "# Image Regeneration Report\n\n";
    md += "| Model | CLIP(%) | DINO(%) | GPT4-con | GPT4-per |\n";
    md += "|---|---|---|---|---|\n";
    for (const auto& r : reports) {
        md += "| " + r.model_id + " | " + fixed(r.overall.clip_pct, 2) + " | " +
              fixed(r.overall.dino_pct, 2) + " | " + fixed(r.overall.judge_content, 4) + " | " +
              fixed(r.overall.judge_perceptual, 4) + " |\n";
    }
    md += "\nJudge columns are normalized via (s-1)/4; failed samples are excluded from means "
          "and counted per model.\n";
    if (correlation) {
        md += "\nRank correlation vs human study over " + std::to_string(correlation->n) +
              " models: Spearman rho = " + fixed(correlation->spearman, 6) +
              ", Kendall tau = " + fixed(correlation->kendall, 6) + ".\n";
    }
    return md;
}

std::string render_report_csv(const std::vector<ModelReport>& reports) {
    std::string csv = "model_id,samples,failed,clip_pct,dino_pct,gpt_con,gpt_per\n";
    for (const auto& r : reports) {
        csv += r.model_id + "," + std::to_string(r.samples) + "," + std::to_string(r.failed) +
               "," + fixed(r.overall.clip_pct, 6) + "," + fixed(r.overall.dino_pct, 6) + "," +
               fixed(r.overall.judge_content, 6) + "," + fixed(r.overall.judge_perceptual, 6) +
               "\n";
    }
    return csv;
}

std::string render_categories_csv(const std::vector<ModelReport>& reports) {
    std::string csv = "model_id,category,samples,clip_pct,dino_pct,gpt_con,gpt_per\n";
    for (const auto& r : reports) {
        for (const auto& c : r.per_category) {
            csv += r.model_id + "," + c.category + "," + std::to_string(c.samples) + "," +
                   fixed(c.clip_pct, 6) + "," + fixed(c.dino_pct, 6) + "," +
                   fixed(c.judge_content, 6) + "," + fixed(c.judge_perceptual, 6) + "\n";
        }
    }
    return csv;
}

void emit_report(const std::vector<ModelReport>& reports,
                 const std::optional<CorrelationReport>& correlation,
                 const std::string& out_dir) {
    if (reports.empty()) {
        raise(ErrorCode::Validation, "emit_report needs at least one model report");
    }
    namespace fs = std::filesystem;
    fs::path dir(out_dir);
    write_file_atomic(dir / "report.md", render_report_markdown(reports, correlation));
    write_file_atomic(dir / "report.csv", render_report_csv(reports));
    write_file_atomic(dir / "categories.csv", render_categories_csv(reports));
    if (correlation) {
        write_file_atomic(dir / "correlation.json", canonical_json(correlation->to_json()));
    }
}

} // namespace repaint
