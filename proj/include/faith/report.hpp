#pragma once

#include "faith/eval.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace faith {

/// Ratio as a percentage with two decimals ("99.56").
std::string percent(double ratio);

/// metrics CSV: dataset, model, style, sentences, order, group, R_m, R_c,
/// R_u, n, avg_strength. `group` joins the remaining keys (evidence group,
/// strength bin, entity type) or reads "all".
void write_metrics_csv(std::ostream& out, const std::vector<MetricsReport>& reports);

/// Ratio-vs-strength-bin chart data: one row per (dataset, model, style,
/// sentences, order, bin) with ratios and counts.
void write_ratio_by_bin_csv(std::ostream& out, const std::vector<MetricsReport>& reports);

/// Eight-bin strength histogram per (dataset, model).
void write_histogram_csv(std::ostream& out, const std::string& dataset, const std::string& model,
                         const std::vector<double>& strengths);

/// Average strength against R_m / R_u, one row per report.
void write_strength_scatter_csv(std::ostream& out, const std::vector<MetricsReport>& reports);

struct StageCounts {
    std::size_t initial = 0;
    std::size_t ma = 0;
    std::size_t cma = 0;
    std::size_t filtered = 0;
    std::size_t direct = 0;
    std::size_t indirect_2 = 0;
    std::size_t indirect_3 = 0;
    std::size_t group1 = 0;
    std::size_t group2 = 0;

    /// initial >= ma >= cma >= filtered >= direct >= group1, and
    /// group1 >= indirect_k >= group2 for k = 2, 3.
    bool monotone() const;
};

void write_stage_counts_csv(std::ostream& out, const std::string& dataset, const std::string& model,
                            const StageCounts& c);

} // namespace faith
