// faithbench: build knowledge-conflict QA data and measure how faithfully a
// model follows counter-memory evidence.

#include "faith/config.hpp"
#include "faith/dataset.hpp"
#include "faith/error.hpp"
#include "faith/pipeline.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <iostream>

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_signal(int) { g_cancel.store(true); }


struct Flags {
    std::string config;
    std::string dataset;
    std::string kind;
    std::vector<std::string> model_roles;
    std::vector<std::string> styles;
    std::vector<std::string> orders;
    std::size_t n = 0;
    bool resume = false;
    bool mock = false;
    std::string out;
    std::string cache;
    std::string model_label;
    std::optional<std::int64_t> seed;
    int parallelism = 0;
};

void add_run_flags(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config, "TOML run configuration");
    app.add_option("--dataset", f.dataset, "input JSONL");
    app.add_option("--kind", f.kind, "dataset kind")->check(CLI::IsMember({"popqa", "nq"}));
    app.add_option("--model-role", f.model_roles,
                   "bind a role: <role>=mock | <url>@<model> | classifier:<url> | judge-fallback");
    app.add_option("--styles", f.styles, "evidence styles, e.g. direct/1,indirect/3")->delimiter(',');
    app.add_option("--orders", f.orders, "option orders")
        ->delimiter(',')
        ->check(CLI::IsMember({"ma-first", "cma-first"}));
    app.add_option("--n", f.n, "paraphrases per question");
    app.add_flag("--resume", f.resume, "continue an interrupted stage");
    app.add_flag("--mock", f.mock, "serve every role from the seeded offline mock");
    app.add_option("--out", f.out, "run directory");
    app.add_option("--cache", f.cache, "call cache file (default <out>/cache.jsonl)");
    app.add_option("--model-label", f.model_label, "model name written to reports");
    app.add_option("--seed", f.seed, "run seed");
    app.add_option("--parallelism", f.parallelism, "in-flight calls per endpoint");
}

faith::RunConfig build_config(const Flags& f) {
    faith::RunConfig cfg = f.config.empty() ? faith::RunConfig{} : faith::load_config(f.config);
    if (!f.dataset.empty()) cfg.dataset = f.dataset;
    if (!f.kind.empty()) cfg.kind = faith::parse_dataset(f.kind);
    if (f.mock) faith::use_mock_roles(cfg);
    for (const auto& spec : f.model_roles) {
        auto [role, ep] = faith::parse_model_role(spec);
        cfg.roles[role] = ep;
        if (role == faith::ModelRole::Entailer)
            cfg.entailment = ep.kind == faith::EndpointKind::JudgeFallback ? faith::EntailmentMode::JudgeFallback
                                                                          : faith::EntailmentMode::Classifier;
    }
    if (!f.styles.empty()) {
        cfg.styles.clear();
        for (const auto& s : f.styles) cfg.styles.push_back(faith::parse_style(s));
    }
    if (!f.orders.empty()) {
        cfg.orders.clear();
        for (const auto& o : f.orders) cfg.orders.push_back(faith::parse_order(o));
    }
    if (f.n) cfg.n = f.n;
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.cache.empty()) cfg.cache = f.cache;
    if (!f.model_label.empty()) cfg.model_label = f.model_label;
    if (f.seed) cfg.seed = *f.seed;
    if (f.parallelism) cfg.parallelism = f.parallelism;
    faith::validate_config(cfg);
    return cfg;
}

void print_manifest(const faith::RunManifest& m, const faith::Gateway& gw) {
    const auto& c = m.counts;
    std::cout << "run " << m.run_id << "\n"
              << "  initial " << c.initial << "  ma " << c.ma << "  cma " << c.cma << "  filtered " << c.filtered
              << "\n"
              << "  direct " << c.direct << "  indirect_2 " << c.indirect_2 << "  indirect_3 " << c.indirect_3
              << "  group1 " << c.group1 << "  group2 " << c.group2 << "\n";
    const auto s = gw.stats();
    std::cout << "  calls " << s.backend_calls << "  cache hits " << s.cache_hits << "  retries " << s.retries
              << "  entailment " << m.entailment_fidelity << "\n";
}

int run_stages(const Flags& f, const std::vector<faith::Stage>& stages) {
    const auto cfg = build_config(f);
    auto rt = faith::make_runtime(cfg);
    faith::Pipeline pipe(cfg, rt.gateway);
    faith::RunOptions opts;
    opts.resume = f.resume;
    opts.cancel = &g_cancel;
    faith::RunManifest m;
    for (auto s : stages) {
        const auto before = faith::read_manifest(cfg.out);
        const std::string name(faith::to_string(s));
        const bool was_complete = before && before->config_digest == pipe.digest() && before->stages.contains(name) &&
                                  before->stages.at(name).complete;
        m = pipe.run_stage(s, opts);
        std::cerr << "stage " << name << (was_complete ? " already complete\n" : " done\n");
    }
    print_manifest(m, *rt.gateway);
    return 0;
}

int validate(const std::string& path, const std::string& kind) {
    const auto summary = faith::summarize_dataset(path, faith::parse_dataset(kind));
    std::cout << "records " << summary.records << "\n";
    for (std::size_t i = 0; i < summary.duplicate_ids.size(); ++i)
        std::cout << "duplicate id '" << summary.duplicate_ids[i] << "' at line " << summary.duplicate_lines[i]
                  << "\n";
    for (const auto& p : summary.problems) std::cout << "line " << p.line << ": " << p.message << "\n";
    if (!summary.problems.empty()) {
        const auto& p = summary.problems.front();
        throw faith::SchemaViolation(p.message, p.line);
    }
    return summary.duplicate_ids.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-conflict faithfulness benchmark"};
    app.require_subcommand(1);

    Flags flags;
    std::vector<std::pair<CLI::App*, std::vector<faith::Stage>>> stage_cmds;
    for (auto stage : faith::all_stages()) {
        auto* sub = app.add_subcommand(std::string(faith::to_string(stage)), "run the " +
                                                                                 std::string(faith::to_string(stage)) +
                                                                                 " stage");
        add_run_flags(*sub, flags);
        stage_cmds.push_back({sub, {stage}});
    }
    auto* all = app.add_subcommand("run", "run every stage that is not yet complete");
    add_run_flags(*all, flags);
    stage_cmds.push_back({all, faith::all_stages()});

    std::string vpath;
    std::string vkind = "nq";
    auto* val = app.add_subcommand("validate", "schema-check an input dataset");
    val->add_option("--dataset", vpath, "input JSONL")->required();
    val->add_option("--kind", vkind, "dataset kind")->check(CLI::IsMember({"popqa", "nq"}));

    CLI11_PARSE(app, argc, argv);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    try {
        if (val->parsed()) return validate(vpath, vkind);
        for (const auto& [cmd, stages] : stage_cmds)
            if (cmd->parsed()) return run_stages(flags, stages);
    } catch (const faith::SchemaViolation& e) {
        std::cerr << "schema violation: " << e.what() << "\n";
        return 5;
    } catch (const faith::ConfigMismatch& e) {
        std::cerr << "config mismatch: " << e.what() << "\n";
        return 4;
    } catch (const faith::MissingUpstream& e) {
        std::cerr << "missing upstream: " << e.what() << "\n";
        return 3;
    } catch (const faith::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const faith::Interrupted& e) {
        std::cerr << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
