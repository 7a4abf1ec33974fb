#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repaint/bench.hpp"
#include "repaint/correlate.hpp"

namespace repaint {

// Renders model reports into the published files:
//   report.md        markdown table (Model | CLIP(%) | DINO(%) | GPT4-con | GPT4-per)
//   report.csv       full-precision per-model rows
//   categories.csv   per-category rows
//   correlation.json rank-correlation report (when provided)
// Rows keep the order of `reports`. Output is deterministic byte-for-byte.
void emit_report(const std::vector<ModelReport>& reports,
                 const std::optional<CorrelationReport>& correlation,
                 const std::string& out_dir);

std::string render_report_markdown(const std::vector<ModelReport>& reports,
                                   const std::optional<CorrelationReport>& correlation);
std::string render_report_csv(const std::vector<ModelReport>& reports);
std::string render_categories_csv(const std::vector<ModelReport>& reports);

} // namespace repaint
