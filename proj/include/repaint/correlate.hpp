#pragma once

#include <string>
#include <vector>

#include "repaint/json_util.hpp"

namespace repaint {

// Average ranks (1-based); ties share the mean of the positions they occupy.
std::vector<double> average_ranks(const std::vector<double>& values);

// Spearman rho with average-rank tie handling. Tie-free inputs use the exact
// 1 - 6*sum(d^2)/(n(n^2-1)) form; ties fall back to Pearson over ranks.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

// Kendall tau-b (tie-adjusted).
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

struct CorrelationReport {
    int n = 0;
    double spearman = 0.0;
    double kendall = 0.0;
    std::vector<std::string> models;
    std::vector<double> metric_values;
    std::vector<double> metric_ranks;
    std::vector<double> human_values;
    std::vector<double> human_ranks;

    Json to_json() const;
};

// Rank correlation between a harness metric and a human metric over matching
// model ids. Requires at least 3 models (InsufficientData otherwise).
CorrelationReport correlate(const std::vector<std::string>& models,
                            const std::vector<double>& model_metric,
                            const std::vector<double>& human_metric);

} // namespace repaint
