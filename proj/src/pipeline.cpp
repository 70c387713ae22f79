#include "faith/pipeline.hpp"

#include "faith/conflict.hpp"
#include "faith/dataset.hpp"
#include "faith/digest.hpp"
#include "faith/eval.hpp"
#include "faith/evidence.hpp"
#include "faith/serialize.hpp"
#include "faith/strength.hpp"
#include "faith/text.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace faith {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Stage s) {
    switch (s) {
    case Stage::Paraphrase: return "paraphrase";
    case Stage::Strength: return "strength";
    case Stage::Conflict: return "conflict";
    case Stage::Evidence: return "evidence";
    case Stage::Evaluate: return "evaluate";
    case Stage::Report: return "report";
    }
    return "?";
}

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages{Stage::Paraphrase, Stage::Strength, Stage::Conflict,
                                           Stage::Evidence,   Stage::Evaluate, Stage::Report};
    return stages;
}

Stage parse_stage(std::string_view s) {
    for (auto st : all_stages())
        if (to_string(st) == s) return st;
    throw std::invalid_argument("unknown stage '" + std::string(s) + "'");
}

// -- manifest ---------------------------------------------------------------

json RunManifest::to_json() const {
    json j;
    j["run_id"] = run_id;
    j["config_digest"] = config_digest;
    j["counts"] = {{"initial", counts.initial},       {"ma", counts.ma},
                   {"cma", counts.cma},               {"filtered", counts.filtered},
                   {"direct", counts.direct},         {"indirect_2", counts.indirect_2},
                   {"indirect_3", counts.indirect_3}, {"group1", counts.group1},
                   {"group2", counts.group2}};
    j["stages"] = json::object();
    for (const auto& [name, st] : stages) {
        j["stages"][name] = {{"complete", st.complete},
                             {"records", st.records},
                             {"started_at", st.started_at},
                             {"finished_at", st.finished_at}};
    }
    j["entailment_fidelity"] = entailment_fidelity;
    j["created_at"] = created_at;
    j["updated_at"] = updated_at;
    return j;
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.config_digest = j.at("config_digest").get<std::string>();
    const auto& c = j.at("counts");
    m.counts.initial = c.at("initial").get<std::size_t>();
    m.counts.ma = c.at("ma").get<std::size_t>();
    m.counts.cma = c.at("cma").get<std::size_t>();
    m.counts.filtered = c.at("filtered").get<std::size_t>();
    m.counts.direct = c.at("direct").get<std::size_t>();
    m.counts.indirect_2 = c.at("indirect_2").get<std::size_t>();
    m.counts.indirect_3 = c.at("indirect_3").get<std::size_t>();
    m.counts.group1 = c.at("group1").get<std::size_t>();
    m.counts.group2 = c.at("group2").get<std::size_t>();
    for (const auto& [name, st] : j.at("stages").items()) {
        StageStatus s;
        s.complete = st.at("complete").get<bool>();
        s.records = st.at("records").get<std::size_t>();
        s.started_at = st.value("started_at", "");
        s.finished_at = st.value("finished_at", "");
        m.stages[name] = s;
    }
    m.entailment_fidelity = j.value("entailment_fidelity", "classifier");
    m.created_at = j.value("created_at", "");
    m.updated_at = j.value("updated_at", "");
    return m;
}

std::optional<RunManifest> read_manifest(const fs::path& dir) {
    const auto path = dir / "manifest.json";
    if (!fs::exists(path)) return std::nullopt;
    std::ifstream in(path);
    try {
        return RunManifest::from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw SchemaViolation("corrupt manifest " + path.string() + ": " + e.what(), 0);
    }
}

// -- files ------------------------------------------------------------------

std::vector<json> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingUpstream("cannot read " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw SchemaViolation(path.string() + ": " + e.what(), lineno);
        }
    }
    return out;
}

namespace {

void write_text_atomic(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << body;
    }
    fs::rename(tmp, path);
}

void write_jsonl(const fs::path& path, const std::vector<json>& records) {
    std::string body;
    for (const auto& r : records) body += r.dump() + "\n";
    write_text_atomic(path, body);
}

/// Per-item executor with a JSONL checkpoint. Items finished in an earlier
/// interrupted invocation are reused when `resume` is set; results come back
/// in input order.
std::vector<json> run_checkpointed(const fs::path& partial, const std::vector<std::string>& keys,
                                   const RunOptions& opts, int parallelism,
                                   const std::function<json(std::size_t)>& work) {
    std::map<std::string, json> done;
    if (opts.resume && fs::exists(partial)) {
        std::ifstream in(partial);
        std::string line;
        while (std::getline(in, line)) {
            try {
                auto j = json::parse(line);
                done[j.at("key").get<std::string>()] = j.at("record");
            } catch (const json::exception&) {
                // torn final line from a killed run
            }
        }
    } else {
        fs::remove(partial);
    }

    std::vector<std::optional<json>> results(keys.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto it = done.find(keys[i]);
        if (it != done.end()) results[i] = it->second;
        else todo.push_back(i);
    }

    fs::create_directories(partial.parent_path());
    std::ofstream log(partial, std::ios::app | std::ios::binary);
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::size_t written = 0;
    bool interrupted = false;
    std::exception_ptr failure;

    auto worker = [&] {
        while (!stop.load()) {
            if (opts.cancel && opts.cancel->load()) {
                std::lock_guard lock(mu);
                interrupted = true;
                stop = true;
                return;
            }
            const auto slot = next.fetch_add(1);
            if (slot >= todo.size()) return;
            const auto i = todo[slot];
            try {
                auto rec = work(i);
                std::lock_guard lock(mu);
                log << json{{"key", keys[i]}, {"record", rec}}.dump() << "\n";
                log.flush();
                results[i] = std::move(rec);
                ++written;
                if (opts.interrupt_after && written >= *opts.interrupt_after) {
                    interrupted = true;
                    stop = true;
                }
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                stop = true;
            }
        }
    };

    const auto threads = static_cast<std::size_t>(std::max(1, parallelism));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < std::min(threads, std::max<std::size_t>(todo.size(), 1)); ++t)
            pool.emplace_back(worker);
    }
    log.close();
    if (failure) std::rethrow_exception(failure);
    if (interrupted && std::any_of(results.begin(), results.end(), [](const auto& r) { return !r.has_value(); }))
        throw Interrupted("interrupted after " + std::to_string(written) + " items; rerun with --resume");

    std::vector<json> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    fs::remove(partial);
    return out;
}

std::string excluded_reason(const std::exception& e) { return e.what(); }

struct ParaphraseRow {
    QuestionRecord question;
    bool ok = false;
};

std::vector<ParaphraseRow> read_paraphrases(const fs::path& dir) {
    std::vector<ParaphraseRow> rows;
    for (const auto& j : read_jsonl(dir / "paraphrases.jsonl"))
        rows.push_back({j.at("question").get<QuestionRecord>(), j.at("status").get<std::string>() == "ok"});
    return rows;
}

std::map<std::string, AnswerSet> read_answers(const fs::path& dir) {
    std::map<std::string, AnswerSet> out;
    for (const auto& j : read_jsonl(dir / "answers.jsonl")) {
        if (j.at("status").get<std::string>() != "ok") continue;
        AnswerSet a{j.at("question_id").get<std::string>(), j.at("answers").get<std::vector<std::string>>()};
        out[a.question_id] = std::move(a);
    }
    return out;
}

} // namespace

// -- runtime ----------------------------------------------------------------

Runtime make_runtime(const RunConfig& cfg) {
    Runtime rt;
    fs::create_directories(cfg.cache_path().parent_path().empty() ? fs::path(".") : cfg.cache_path().parent_path());
    rt.gateway = std::make_shared<Gateway>(std::make_shared<CallCache>(cfg.cache_path()));

    bool any_mock = false;
    for (const auto& [_, ep] : cfg.roles) any_mock = any_mock || ep.kind == EndpointKind::Mock;
    if (any_mock) rt.world = std::make_shared<MockWorld>(load_dataset(cfg.dataset, cfg.kind), cfg.mock);

    for (const auto& [role, ep] : cfg.roles) {
        EndpointOptions opts{ep.max_retries, ep.backoff_ms, std::max(1, std::min(ep.parallelism, cfg.parallelism))};
        HttpEndpoint http{ep.base_url, ep.model, "", std::chrono::seconds(ep.timeout_s)};
        if (!ep.token_env.empty()) {
            const char* tok = std::getenv(ep.token_env.c_str());
            const bool remote = ep.kind == EndpointKind::Chat || ep.kind == EndpointKind::Classifier;
            if (remote && (!tok || !*tok))
                throw ConfigError("role " + std::string(to_string(role)) + " needs an API token in $" + ep.token_env);
            if (tok) http.api_token = tok;
        }
        switch (ep.kind) {
        case EndpointKind::Mock: rt.world->bind(*rt.gateway, role, opts); break;
        case EndpointKind::Chat: rt.gateway->bind(role, std::make_shared<ChatBackend>(http), opts); break;
        case EndpointKind::Classifier: rt.gateway->bind(role, std::make_shared<ClassifierBackend>(http), opts); break;
        case EndpointKind::JudgeFallback:
            if (role != ModelRole::Entailer) throw ConfigError("judge-fallback only applies to the entailer role");
            break;
        }
    }
    rt.gateway->set_entailment_mode(cfg.entailment);
    return rt;
}

// -- pipeline ---------------------------------------------------------------

Pipeline::Pipeline(RunConfig cfg, std::shared_ptr<Gateway> gw)
    : cfg_(std::move(cfg)), gw_(std::move(gw)), digest_(config_digest(cfg_)) {}

RunManifest Pipeline::load_or_init_manifest() const {
    if (auto m = read_manifest(cfg_.out)) {
        if (m->config_digest != digest_)
            throw ConfigMismatch("run directory " + cfg_.out.string() + " was produced with config digest " +
                                 m->config_digest.substr(0, 12) + ", current config is " + digest_.substr(0, 12));
        return *m;
    }
    RunManifest m;
    m.run_id = "run-" + digest_.substr(0, 12);
    m.config_digest = digest_;
    m.created_at = utc_timestamp();
    return m;
}

void Pipeline::save_manifest(RunManifest& m) const {
    m.updated_at = utc_timestamp();
    m.entailment_fidelity = std::string(gw_->entailment_fidelity());
    write_text_atomic(cfg_.out / "manifest.json", m.to_json().dump(2) + "\n");
}

RunManifest Pipeline::run_stage(Stage stage, const RunOptions& opts) {
    fs::create_directories(cfg_.out);
    auto m = load_or_init_manifest();
    const std::string name(to_string(stage));
    if (m.stages.count(name) && m.stages[name].complete) return m;

    for (auto up : all_stages()) {
        if (up == stage) break;
        const std::string up_name(to_string(up));
        if (!m.stages.count(up_name) || !m.stages[up_name].complete)
            throw MissingUpstream("stage '" + name + "' needs completed '" + up_name + "' outputs in " +
                                  cfg_.out.string());
    }

    auto& status = m.stages[name];
    status.started_at = utc_timestamp();
    switch (stage) {
    case Stage::Paraphrase: paraphrase_stage(m, opts); break;
    case Stage::Strength: strength_stage(m, opts); break;
    case Stage::Conflict: conflict_stage(m, opts); break;
    case Stage::Evidence: evidence_stage(m, opts); break;
    case Stage::Evaluate: evaluate_stage(m, opts); break;
    case Stage::Report: report_stage(m); break;
    }
    auto& done = m.stages[name];
    done.complete = true;
    done.finished_at = utc_timestamp();
    save_manifest(m);
    return m;
}

RunManifest Pipeline::run_all(const RunOptions& opts) {
    RunManifest m;
    for (auto s : all_stages()) m = run_stage(s, opts);
    return m;
}

void Pipeline::paraphrase_stage(RunManifest& m, const RunOptions& opts) {
    auto questions = load_dataset(cfg_.dataset, cfg_.kind);
    m.counts.initial = questions.size();

    std::vector<std::string> keys;
    for (const auto& q : questions) keys.push_back(q.id);

    auto rows = run_checkpointed(cfg_.out / "paraphrases.partial.jsonl", keys, opts, cfg_.parallelism,
                                 [&](std::size_t i) {
        QuestionRecord q = questions[i];
        json row;
        try {
            ParaphraseOptions po{cfg_.n, cfg_.max_regen, derive_seed(cfg_.seed, "paraphrase:" + q.id)};
            std::optional<std::string> subject;
            if (q.dataset == Dataset::PopQA && q.template_text)
                subject = template_subject(*q.template_text, q.text);
            if (subject) {
                // one template paraphrase set per relation, reused by every
                // question of that relation through the call cache
                po.seed = derive_seed(cfg_.seed, "template:" + q.template_id.value_or(*q.template_text));
                auto out = paraphrase_text(*gw_, *q.template_text, po, [](const std::string& c) {
                    return c.find("{}") != std::string::npos;
                });
                q.paraphrases.clear();
                for (const auto& t : out.paraphrases) q.paraphrases.push_back(instantiate_template(t, *subject));
                row["template_paraphrases"] = out.paraphrases;
                row["regenerations"] = out.regenerations;
            } else {
                auto out = generate_paraphrases(*gw_, q, po);
                row["regenerations"] = out.regenerations;
            }
            row["status"] = "ok";
            row["reason"] = "";
        } catch (const ExcludedQuestion& e) {
            q.paraphrases.clear();
            row["status"] = "excluded";
            row["reason"] = excluded_reason(e);
        } catch (const UnparseableVerdict& e) {
            q.paraphrases.clear();
            row["status"] = "excluded";
            row["reason"] = excluded_reason(e);
        }
        row["question"] = q;
        return row;
    });
    write_jsonl(cfg_.out / "paraphrases.jsonl", rows);
    m.stages["paraphrase"].records = rows.size();
}

void Pipeline::strength_stage(RunManifest& m, const RunOptions& opts) {
    auto rows = read_paraphrases(cfg_.out);
    std::vector<QuestionRecord> qs;
    for (auto& r : rows)
        if (r.ok) qs.push_back(std::move(r.question));
    std::vector<std::string> keys;
    for (const auto& q : qs) keys.push_back(q.id);

    auto results = run_checkpointed(cfg_.out / "strength.partial.jsonl", keys, opts, cfg_.parallelism,
                                    [&](std::size_t i) {
        const auto& q = qs[i];
        json row{{"question_id", q.id}};
        try {
            auto answers = collect_answers(*gw_, q);
            auto clusters = cluster_answers(*gw_, answers, q.text);
            validate_partition(clusters, answers.answers.size());
            const auto score = memory_strength(clusters);
            row["status"] = "ok";
            row["answers"] = answers.answers;
            row["clusters"] = clusters.clusters;
            row["reason"] = "";
            row["strength"] = strength_json(q.id, clusters, score);
        } catch (const ExcludedQuestion& e) {
            row["status"] = "excluded";
            row["reason"] = excluded_reason(e);
        } catch (const UnparseableVerdict& e) {
            row["status"] = "excluded";
            row["reason"] = excluded_reason(e);
        }
        return row;
    });

    std::vector<json> answers;
    std::vector<json> strengths;
    for (const auto& r : results) {
        json a{{"question_id", r["question_id"]}, {"status", r["status"]}, {"reason", r["reason"]}};
        a["answers"] = r.value("answers", json::array());
        a["clusters"] = r.value("clusters", json::array());
        answers.push_back(std::move(a));
        if (r.contains("strength")) strengths.push_back(r["strength"]);
    }
    write_jsonl(cfg_.out / "answers.jsonl", answers);
    write_jsonl(cfg_.out / "strength.jsonl", strengths);
    m.stages["strength"].records = strengths.size();
}

void Pipeline::conflict_stage(RunManifest& m, const RunOptions& opts) {
    auto rows = read_paraphrases(cfg_.out);
    const auto answers = read_answers(cfg_.out);
    std::vector<QuestionRecord> qs;
    for (auto& r : rows)
        if (r.ok && answers.count(r.question.id)) qs.push_back(std::move(r.question));
    std::vector<std::string> keys;
    for (const auto& q : qs) keys.push_back(q.id);

    auto results = run_checkpointed(cfg_.out / "conflicts.partial.jsonl", keys, opts, cfg_.parallelism,
                                    [&](std::size_t i) {
        const auto& q = qs[i];
        const auto& ans = answers.at(q.id);
        const auto qt = classify_question(q.text);
        ConflictPair pair;
        pair.question_id = q.id;
        pair.status = ConflictStatus::Excluded;
        std::optional<EntityType> et;
        if (q.dataset == Dataset::PopQA) {
            et = entity_type_for(qt);
            pair = ingested_conflict(q, ans);
        } else if (!(et = entity_type_for(qt))) {
            pair.note = "non-processable question type " + std::string(to_string(qt));
        } else {
            try {
                const auto ma = generate_ma(*gw_, q, derive_seed(cfg_.seed, "ma:" + q.id));
                pair = generate_cma(*gw_, q, ma, *et, ans,
                                    CmaOptions{cfg_.cma_attempts, derive_seed(cfg_.seed, "cma:" + q.id)});
            } catch (const ExcludedQuestion& e) {
                pair.note = excluded_reason(e);
            } catch (const UnparseableVerdict& e) {
                pair.note = excluded_reason(e);
            }
        }
        json row = pair;
        row["question"] = q.text;
        row["question_type"] = to_string(qt);
        row["entity_type"] = et ? json(std::string(to_string(*et))) : json();
        row["entity_group"] = entity_group(qt);
        return row;
    });

    m.counts.ma = m.counts.cma = m.counts.filtered = 0;
    for (const auto& r : results) {
        const auto pair = r.get<ConflictPair>();
        if (!pair.ma.empty()) ++m.counts.ma;
        if (pair.status != ConflictStatus::Excluded) ++m.counts.cma;
        if (pair.status == ConflictStatus::Valid) ++m.counts.filtered;
    }
    write_jsonl(cfg_.out / "conflicts.jsonl", results);
    m.stages["conflict"].records = results.size();
}

void Pipeline::evidence_stage(RunManifest& m, const RunOptions& opts) {
    std::vector<ConflictPair> pairs;
    for (const auto& j : read_jsonl(cfg_.out / "conflicts.jsonl")) {
        auto p = j.get<ConflictPair>();
        if (p.status == ConflictStatus::Valid) pairs.push_back(std::move(p));
    }
    std::vector<std::string> keys;
    for (const auto& p : pairs) keys.push_back(p.question_id);

    auto results = run_checkpointed(cfg_.out / "evidence.partial.jsonl", keys, opts, cfg_.parallelism,
                                    [&](std::size_t i) {
        const auto& p = pairs[i];
        json row;
        try {
            auto bundle = build_bundle(*gw_, p.question_id, p.cma, p.ma,
                                       EvidenceOptions{cfg_.evidence_attempts, derive_seed(cfg_.seed, "evidence")});
            row = bundle;
            row["status"] = bundle.in_group2() ? "group2" : bundle.in_group1() ? "group1" : "direct_only";
            row["reason"] = "";
        } catch (const ExcludedQuestion& e) {
            row = EvidenceBundle{p.question_id, "", {}, std::nullopt, std::nullopt, {}};
            row["status"] = "excluded";
            row["reason"] = excluded_reason(e);
        } catch (const UnparseableVerdict& e) {
            row = EvidenceBundle{p.question_id, "", {}, std::nullopt, std::nullopt, {}};
            row["status"] = "excluded";
            row["reason"] = excluded_reason(e);
        }
        return row;
    });

    m.counts.direct = m.counts.indirect_2 = m.counts.indirect_3 = m.counts.group1 = m.counts.group2 = 0;
    for (const auto& r : results) {
        const auto b = r.get<EvidenceBundle>();
        if (!b.direct.empty()) ++m.counts.direct;
        if (!b.in_group1()) continue;
        ++m.counts.group1;
        if (b.indirect_2) ++m.counts.indirect_2;
        if (b.indirect_3) ++m.counts.indirect_3;
        if (b.in_group2()) ++m.counts.group2;
    }
    write_jsonl(cfg_.out / "evidence.jsonl", results);
    m.stages["evidence"].records = results.size();
}

void Pipeline::evaluate_stage(RunManifest& m, const RunOptions& opts) {
    std::map<std::string, ConflictPair> pairs;
    std::map<std::string, std::string> questions;
    for (const auto& j : read_jsonl(cfg_.out / "conflicts.jsonl")) {
        auto p = j.get<ConflictPair>();
        questions[p.question_id] = j.at("question").get<std::string>();
        pairs[p.question_id] = std::move(p);
    }

    struct Item {
        EvidenceBundle bundle;
        StyleVariant variant;
        OptionOrder order;
    };
    std::vector<Item> items;
    std::vector<std::string> keys;
    for (const auto& j : read_jsonl(cfg_.out / "evidence.jsonl")) {
        const auto b = j.get<EvidenceBundle>();
        for (const auto& v : evaluation_variants()) {
            if (std::find(cfg_.styles.begin(), cfg_.styles.end(), v.style) == cfg_.styles.end()) continue;
            if (v.group == 1 ? !b.in_group1() : !b.in_group2()) continue;
            for (auto order : cfg_.orders) {
                items.push_back({b, v, order});
                keys.push_back(b.question_id + "|" + std::to_string(v.group) + "|" + v.style.label() + "|" +
                               std::string(to_string(order)));
            }
        }
    }

    const std::string dataset(to_string(cfg_.kind));
    auto results = run_checkpointed(cfg_.out / "eval.partial.jsonl", keys, opts, cfg_.parallelism,
                                    [&](std::size_t i) {
        const auto& it = items[i];
        const auto& pair = pairs.at(it.bundle.question_id);
        const auto evidence = compose(it.variant.style, it.bundle);
        const auto inst = build_mc(it.bundle.question_id, questions.at(it.bundle.question_id), evidence, pair,
                                   it.order, it.variant.style, it.variant.group);
        return json(evaluate_instance(*gw_, inst, dataset, cfg_.model_label));
    });
    write_jsonl(cfg_.out / "eval.jsonl", results);
    m.stages["evaluate"].records = results.size();
}

void Pipeline::report_stage(RunManifest& m) {
    std::vector<EvalRecord> records;
    for (const auto& j : read_jsonl(cfg_.out / "eval.jsonl")) records.push_back(j.get<EvalRecord>());
    std::map<std::string, StrengthScore> strengths;
    std::vector<double> values;
    for (const auto& j : read_jsonl(cfg_.out / "strength.jsonl")) {
        strengths[j.at("question_id").get<std::string>()] = strength_from_json(j);
        values.push_back(j.at("value").get<double>());
    }
    std::map<std::string, QuestionType> types;
    for (const auto& j : read_jsonl(cfg_.out / "conflicts.jsonl"))
        types[j.at("question_id").get<std::string>()] = parse_question_type(j.at("question_type").get<std::string>());

    const std::vector<std::string> base{"dataset", "model", "group", "style", "sentences", "order"};
    auto with = [&](const char* extra) {
        auto dims = base;
        dims.push_back(extra);
        return dims;
    };
    const auto overall = group_and_report(records, strengths, types, base);
    const auto by_bin = group_and_report(records, strengths, types, with("strength_bin"));
    const auto by_entity = group_and_report(records, strengths, types, with("entity_type"));

    const auto dir = cfg_.out / "report";
    auto emit = [&](const char* name, auto&& fn) {
        std::ostringstream os;
        fn(os);
        write_text_atomic(dir / name, os.str());
    };
    emit("metrics.csv", [&](std::ostream& os) { write_metrics_csv(os, overall); });
    emit("metrics_by_strength.csv", [&](std::ostream& os) { write_metrics_csv(os, by_bin); });
    emit("metrics_by_entity.csv", [&](std::ostream& os) { write_metrics_csv(os, by_entity); });
    emit("ratio_by_bin.csv", [&](std::ostream& os) { write_ratio_by_bin_csv(os, by_bin); });
    emit("strength_scatter.csv", [&](std::ostream& os) { write_strength_scatter_csv(os, by_bin); });
    emit("strength_histogram.csv", [&](std::ostream& os) {
        write_histogram_csv(os, std::string(to_string(cfg_.kind)), cfg_.model_label, values);
    });
    emit("stage_counts.csv", [&](std::ostream& os) {
        write_stage_counts_csv(os, std::string(to_string(cfg_.kind)), cfg_.model_label, m.counts);
    });
    m.stages["report"].records = overall.size();
}

} // namespace faith
