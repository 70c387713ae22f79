#include "faith/report.hpp"

#include <array>
#include <cstdio>

namespace faith {

std::string percent(double ratio) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", ratio * 100.0);
    return buf;
}

namespace {

std::string strength_cell(const MetricsReport& r) {
    if (!r.avg_strength) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *r.avg_strength);
    return buf;
}

std::string group_label(const GroupKeys& k) {
    std::string out;
    auto add = [&](std::string_view name, const std::string& v) {
        if (v == "*") return;
        if (!out.empty()) out += ';';
        out += std::string(name) + "=" + v;
    };
    add("group", k.evidence_group);
    add("bin", k.strength_bin);
    add("entity", k.entity_type);
    return out.empty() ? "all" : out;
}

} // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
    out << "dataset,model,style,sentences,order,group,R_m,R_c,R_u,n,avg_strength\n";
    for (const auto& r : reports) {
        out << r.keys.dataset << ',' << r.keys.model << ',' << r.keys.style << ',' << r.keys.sentences << ','
            << r.keys.order << ',' << group_label(r.keys) << ',' << percent(r.ratios.r_m) << ','
            << percent(r.ratios.r_c) << ',' << percent(r.ratios.r_u) << ',' << r.counts.total() << ','
            << strength_cell(r) << '\n';
    }
}

void write_ratio_by_bin_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
    out << "dataset,model,style,sentences,order,bin,R_m,R_c,R_u,f_m,f_c,f_u\n";
    for (const auto& r : reports) {
        out << r.keys.dataset << ',' << r.keys.model << ',' << r.keys.style << ',' << r.keys.sentences << ','
            << r.keys.order << ',' << r.keys.strength_bin << ',' << percent(r.ratios.r_m) << ','
            << percent(r.ratios.r_c) << ',' << percent(r.ratios.r_u) << ',' << r.counts.f_m << ','
            << r.counts.f_c << ',' << r.counts.f_u << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const std::string& dataset, const std::string& model,
                         const std::vector<double>& strengths) {
    const auto bins = strength_histogram(strengths);
    out << "dataset,model,bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < bins.size(); ++i) {
        char lo[16], hi[16];
        std::snprintf(lo, sizeof lo, "%.2f", -2.0 + 0.25 * static_cast<double>(i));
        std::snprintf(hi, sizeof hi, "%.2f", -2.0 + 0.25 * static_cast<double>(i + 1));
        out << dataset << ',' << model << ',' << lo << ',' << hi << ',' << bins[i] << '\n';
    }
}

void write_strength_scatter_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
    out << "dataset,model,style,sentences,order,avg_strength,R_m,R_u,n\n";
    for (const auto& r : reports) {
        out << r.keys.dataset << ',' << r.keys.model << ',' << r.keys.style << ',' << r.keys.sentences << ','
            << r.keys.order << ',' << strength_cell(r) << ',' << percent(r.ratios.r_m) << ','
            << percent(r.ratios.r_u) << ',' << r.counts.total() << '\n';
    }
}

bool StageCounts::monotone() const {
    return initial >= ma && ma >= cma && cma >= filtered && filtered >= direct && direct >= group1 &&
           group1 >= indirect_2 && group1 >= indirect_3 && indirect_2 >= group2 && indirect_3 >= group2;
}

void write_stage_counts_csv(std::ostream& out, const std::string& dataset, const std::string& model,
                            const StageCounts& c) {
    out << "dataset,model,stage,count\n";
    const std::array<std::pair<const char*, std::size_t>, 9> rows{{
        {"initial", c.initial},
        {"generate_ma", c.ma},
        {"generate_cma", c.cma},
        {"cma_filter", c.filtered},
        {"direct_evidence", c.direct},
        {"indirect_evidence_2", c.indirect_2},
        {"indirect_evidence_3", c.indirect_3},
        {"group1", c.group1},
        {"group2", c.group2},
    }};
    for (const auto& [name, n] : rows) out << dataset << ',' << model << ',' << name << ',' << n << '\n';
}

} // namespace faith
