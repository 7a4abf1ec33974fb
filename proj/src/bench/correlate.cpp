#include "repaint/correlate.hpp"

#include <algorithm>
#include <cmath>

#include "repaint/errors.hpp"

namespace repaint {

std::vector<double> average_ranks(const std::vector<double>& values) {
    std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share the average 1-based rank
        double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

namespace {

bool has_ties(const std::vector<double>& values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

long long count_tied_pairs(const std::vector<double>& values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    long long pairs = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        long long t = static_cast<long long>(j - i + 1);
        pairs += t * (t - 1) / 2;
        i = j + 1;
    }
    return pairs;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = a.size();
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = a[i] - mean_a;
        double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 && var_b == 0.0) return 1.0;
    if (var_a == 0.0 || var_b == 0.0) return 0.0;
    return cov / std::sqrt(var_a * var_b);
}

} // namespace

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) raise(ErrorCode::Validation, "spearman: length mismatch");
    std::size_t n = a.size();
    if (n < 2) raise(ErrorCode::InsufficientData, "spearman needs at least 2 observations");

    std::vector<double> ra = average_ranks(a);
    std::vector<double> rb = average_ranks(b);
    if (!has_ties(a) && !has_ties(b)) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = ra[i] - rb[i];
            d2 += d * d;
        }
        double nn = static_cast<double>(n);
        return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
    }
    return pearson(ra, rb);
}

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) raise(ErrorCode::Validation, "kendall: length mismatch");
    std::size_t n = a.size();
    if (n < 2) raise(ErrorCode::InsufficientData, "kendall needs at least 2 observations");

    long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double da = a[i] - a[j];
            double db = b[i] - b[j];
            if (da == 0.0 && db == 0.0) continue; // tied in both: dropped
            if (da == 0.0) {
                ++ties_a;
            } else if (db == 0.0) {
                ++ties_b;
            } else if ((da > 0.0) == (db > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
    double denom_a = n0 - static_cast<double>(count_tied_pairs(a));
    double denom_b = n0 - static_cast<double>(count_tied_pairs(b));
    if (denom_a <= 0.0 || denom_b <= 0.0) return 0.0;
    return static_cast<double>(concordant - discordant) / std::sqrt(denom_a * denom_b);
}

Json CorrelationReport::to_json() const {
    Json ranks = Json::array();
    for (std::size_t i = 0; i < models.size(); ++i) {
        ranks.push_back(Json{{"model", models[i]},
                             {"metric_value", metric_values[i]},
                             {"metric_rank", metric_ranks[i]},
                             {"human_value", human_values[i]},
                             {"human_rank", human_ranks[i]}});
    }
    return Json{{"n", n},
                {"spearman_rho", spearman},
                {"kendall_tau", kendall},
                {"ranks", ranks},
                {"notes", Json{{"judge_normalization", "(s-1)/4"},
                               {"tie_handling", "average ranks; kendall tau-b"}}}};
}

CorrelationReport correlate(const std::vector<std::string>& models,
                            const std::vector<double>& model_metric,
                            const std::vector<double>& human_metric) {
    if (models.size() != model_metric.size() || models.size() != human_metric.size()) {
        raise(ErrorCode::Validation, "correlate: input lengths differ");
    }
    if (models.size() < 3) {
        raise(ErrorCode::InsufficientData,
              "correlate needs at least 3 models, got " + std::to_string(models.size()));
    }
    CorrelationReport report;
    report.n = static_cast<int>(models.size());
    report.models = models;
    report.metric_values = model_metric;
    report.human_values = human_metric;
    report.metric_ranks = average_ranks(model_metric);
    report.human_ranks = average_ranks(human_metric);
    report.spearman = spearman_rho(model_metric, human_metric);
    report.kendall = kendall_tau(model_metric, human_metric);
    return report;
}

} // namespace repaint
