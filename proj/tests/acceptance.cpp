// Acceptance checks, one PASS/FAIL/SKIP line per criterion. Criterion 12
// talks to a live endpoint and never affects the exit status.

#include "faith/config.hpp"
#include "faith/conflict.hpp"
#include "faith/error.hpp"
#include "faith/eval.hpp"
#include "faith/evidence.hpp"
#include "faith/mock_world.hpp"
#include "faith/pipeline.hpp"
#include "faith/serialize.hpp"
#include "faith/strength.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

using namespace faith;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind = Pass;
    std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("faith-accept-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path data(const std::string& name) { return fs::path(FAITH_TEST_DATA) / name; }

// Σ p ln p over the cluster-size distribution, written independently of the
// library formula.
double entropy_oracle(const std::vector<std::size_t>& sizes) {
    const double n = std::accumulate(sizes.begin(), sizes.end(), 0.0);
    double s = 0.0;
    for (auto c : sizes) {
        const double p = static_cast<double>(c) / n;
        s += p * std::log(p);
    }
    return s;
}

// ---------------------------------------------------------------------------

Outcome entropy() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 9;
        const std::size_t labels = 1 + rng() % n;
        std::vector<std::size_t> sizes(labels, 0);
        for (std::size_t i = 0; i < n; ++i) ++sizes[rng() % labels];
        sizes.erase(std::remove(sizes.begin(), sizes.end(), 0u), sizes.end());
        const double got = memory_strength(sizes).value;
        worst = std::max(worst, std::abs(got - entropy_oracle(sizes)));
    }
    if (worst > 1e-9) return fail("max deviation " + fmt(worst));
    for (std::size_t n = 2; n <= 10; ++n) {
        std::vector<std::size_t> one{n};
        std::vector<std::size_t> singles(n, 1);
        if (memory_strength(one).value != 0.0) return fail("single cluster not 0 at n=" + std::to_string(n));
        if (memory_strength(singles).value != -std::log(static_cast<double>(n)))
            return fail("singletons not -ln n at n=" + std::to_string(n));
    }
    const double s7 = memory_strength(std::vector<std::size_t>(7, 1)).value;
    if (std::abs(s7 - (-1.945910)) > 1e-6) return fail("-ln 7 gave " + fmt(s7, 10));
    const double secs = seconds_since(t0);
    if (secs >= 1.0) return fail("took " + fmt(secs) + " s");
    return pass("max deviation " + fmt(worst, 3) + ", -ln7 = " + fmt(s7, 8) + ", " + fmt(secs * 1000, 3) + " ms");
}

StrengthBin bin_oracle(double v) {
    if (v <= -1.0) return StrengthBin::Low;
    if (v <= -0.5) return StrengthBin::MidLow;
    if (v <= -0.25) return StrengthBin::MidHigh;
    return StrengthBin::High;
}

Outcome binning() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 0.0);
    std::vector<double> samples{-2.0, -1.0, -0.5, -0.25, 0.0};
    for (double b : {-1.0, -0.5, -0.25}) {
        samples.push_back(std::nextafter(b, 0.0));
        samples.push_back(std::nextafter(b, -3.0));
    }
    for (int i = 0; i < 10000; ++i) samples.push_back(u(rng));
    std::map<StrengthBin, std::size_t> seen;
    for (double v : samples) {
        const auto got = assign_bin(v);
        if (got != bin_oracle(v)) return fail("value " + fmt(v, 17) + " -> " + std::string(to_string(got)));
        ++seen[got];
    }
    if (assign_bin(-1.0) != StrengthBin::Low || assign_bin(-0.5) != StrengthBin::MidLow ||
        assign_bin(-0.25) != StrengthBin::MidHigh || assign_bin(0.0) != StrengthBin::High)
        return fail("boundary convention");
    if (seen.size() != 4) return fail("not every bin reached");
    return pass(std::to_string(samples.size()) + " values, boundaries -1/-0.5/-0.25/0 -> low/mid_low/mid_high/high");
}

// Canonical form: clusters as sorted index sets, sorted.
std::set<std::set<std::size_t>> canonical(const std::vector<std::vector<std::size_t>>& clusters) {
    std::set<std::set<std::size_t>> out;
    for (const auto& c : clusters) out.insert(std::set<std::size_t>(c.begin(), c.end()));
    return out;
}

std::vector<std::vector<std::size_t>> union_find_oracle(const std::vector<std::string>& answers) {
    std::vector<std::size_t> parent(answers.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = root(parent[x]);
    };
    for (std::size_t i = 0; i < answers.size(); ++i)
        for (std::size_t j = i + 1; j < answers.size(); ++j)
            if (answers[i] == answers[j]) parent[root(j)] = root(i);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < answers.size(); ++i) groups[root(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [r, g] : groups) out.push_back(g);
    return out;
}

Outcome clustering() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(99);
    const std::vector<std::string> alphabet{"Paris", "Lyon", "Nice", "Lille", "Metz", "Brest"};
    auto exact = [](std::string_view, std::string_view a, std::string_view b) {
        return a == b ? JudgeLabel::Same : JudgeLabel::Contradicted;
    };
    for (int trial = 0; trial < 500; ++trial) {
        AnswerSet a{"q" + std::to_string(trial), {}};
        const std::size_t n = 1 + rng() % 12;
        const std::size_t k = 1 + rng() % alphabet.size();
        for (std::size_t i = 0; i < n; ++i) a.answers.push_back(alphabet[rng() % k]);
        const auto got = cluster_answers(a, "q", exact);
        if (canonical(got.clusters) != canonical(union_find_oracle(a.answers)))
            return fail("mismatch on trial " + std::to_string(trial));
    }
    // non-transitive judge: "Same" when lengths differ by at most one, so
    // a~b and b~c need not give a~c
    auto fuzzy = [](std::string_view, std::string_view a, std::string_view b) {
        const auto d = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
        return d <= 1 ? JudgeLabel::Same : JudgeLabel::Contradicted;
    };
    for (int trial = 0; trial < 500; ++trial) {
        AnswerSet a{"adv", {}};
        const std::size_t n = 1 + rng() % 12;
        for (std::size_t i = 0; i < n; ++i) a.answers.push_back(std::string(1 + rng() % 6, 'x'));
        const auto got = cluster_answers(a, "q", fuzzy);
        try {
            validate_partition(got, n);
        } catch (const InvalidPartition& e) {
            return fail(std::string("adversarial judge: ") + e.what());
        }
    }
    const double secs = seconds_since(t0);
    if (secs >= 5.0) return fail("took " + fmt(secs) + " s");
    return pass("500 multisets match the union-find oracle; 500 adversarial partitions valid; " +
                fmt(secs * 1000, 3) + " ms");
}

Outcome typing() {
    const std::vector<std::pair<std::string, QuestionType>> fixture{
        {"how many episodes are in chicago fire season 4", QuestionType::HowMany},
        {"how much does the statue of liberty weigh", QuestionType::HowMuch},
        {"how long did the hundred years war last", QuestionType::HowLong},
        {"how old is the queen of england", QuestionType::HowOld},
        {"how far is it from london to paris", QuestionType::HowFar},
        {"how are leaders of the two parties in congress chosen", QuestionType::How},
        {"who sings does he love me with reba", QuestionType::WhoSings},
        {"who plays the mom in the goldbergs", QuestionType::WhoPlays},
        {"who wrote he ain't heavy he's my brother lyrics", QuestionType::WhoWrites},
        {"who won the super bowl in 2010", QuestionType::WhoWins},
        {"who is the current prime minister of canada", QuestionType::Who},
        {"where is the world's largest ice sheet located today", QuestionType::Where},
        {"when was the last time anyone was on the moon", QuestionType::When},
        {"what year did the titanic sink", QuestionType::WhatYear},
        {"what name was given to the first cloned sheep", QuestionType::WhatName},
        {"what is the setting of the story sorry wrong number", QuestionType::What},
        {"which country has the longest coastline", QuestionType::WhichCountry},
        {"which city is known as the big apple", QuestionType::WhichCity},
        {"which state is mount rushmore in", QuestionType::WhichState},
        {"which year did the berlin wall fall", QuestionType::WhichYear},
        {"which domain of life are humans members of", QuestionType::Which},
        {"why do leaves change color in the fall", QuestionType::Why},
        {"latest season on keeping up with the kardashians", QuestionType::Other},
    };
    std::set<QuestionType> covered;
    for (const auto& [q, expected] : fixture) {
        const auto got = classify_question(q);
        if (got != expected)
            return fail("\"" + q + "\" -> " + std::string(to_string(got)) + ", expected " +
                        std::string(to_string(expected)));
        covered.insert(expected);
    }
    if (covered.size() != all_question_types().size()) return fail("fixture misses a type");
    return pass(std::to_string(fixture.size()) + " questions, " + std::to_string(covered.size()) +
                " types, 100% exact");
}

Outcome entity_map() {
    // one row per key term
    const std::vector<std::pair<std::vector<QuestionType>, EntityType>> rows{
        {{QuestionType::When, QuestionType::WhatYear, QuestionType::WhichYear, QuestionType::HowLong},
         EntityType::Time},
        {{QuestionType::Where, QuestionType::WhichCity, QuestionType::WhichState, QuestionType::WhichCountry},
         EntityType::Location},
        {{QuestionType::Who, QuestionType::WhatName}, EntityType::NameOfPerson},
        {{QuestionType::HowMany, QuestionType::HowMuch}, EntityType::Number},
        {{QuestionType::WhoSings}, EntityType::SingerName},
        {{QuestionType::WhoPlays}, EntityType::PlayerName},
        {{QuestionType::WhoWrites}, EntityType::WriterName},
        {{QuestionType::WhoWins}, EntityType::WinnerName},
        {{QuestionType::HowFar}, EntityType::Distance},
        {{QuestionType::HowOld}, EntityType::Age},
    };
    const std::map<EntityType, std::string> phrases{
        {EntityType::Time, "time"},
        {EntityType::Location, "location"},
        {EntityType::NameOfPerson, "name of person"},
        {EntityType::Number, "number"},
        {EntityType::SingerName, "singer's name"},
        {EntityType::PlayerName, "player's name"},
        {EntityType::WriterName, "writer's name"},
        {EntityType::WinnerName, "winner's name"},
        {EntityType::Distance, "distance"},
        {EntityType::Age, "age"},
    };
    for (const auto& [types, et] : rows) {
        for (auto t : types) {
            const auto got = entity_type_for(t);
            if (!got || *got != et) return fail("row for " + std::string(to_string(t)));
        }
        if (prompt_phrase(et) != phrases.at(et)) return fail("key term " + std::string(prompt_phrase(et)));
    }
    for (auto t : {QuestionType::How, QuestionType::What, QuestionType::Which, QuestionType::Why, QuestionType::Other})
        if (entity_type_for(t)) return fail(std::string(to_string(t)) + " should be non-processable");
    return pass("10 rows match; how/what/which/why/other non-processable");
}

Outcome ratios() {
    const auto r = ratios_from_counts({2, 5, 3});
    if (std::abs(r.r_m - 0.2) > 1e-12 || std::abs(r.r_c - 0.5) > 1e-12 || std::abs(r.r_u - 0.3) > 1e-12)
        return fail("(2,5,3) gave (" + fmt(r.r_m) + ", " + fmt(r.r_c) + ", " + fmt(r.r_u) + ")");

    std::mt19937_64 rng(3);
    std::vector<EvalRecord> records;
    for (int i = 0; i < 97; ++i) {
        EvalRecord e;
        e.question_id = "q" + std::to_string(i);
        e.outcome = static_cast<OptionTag>(rng() % 3);
        records.push_back(e);
    }
    const auto base = compute_ratios(records);
    for (int s = 0; s < 1000; ++s) {
        std::shuffle(records.begin(), records.end(), rng);
        const auto rep = compute_ratios(records);
        const double sum = rep.ratios.r_m + rep.ratios.r_c + rep.ratios.r_u;
        if (std::abs(sum - 1.0) > 1e-12) return fail("sum " + fmt(sum, 17));
        if (rep.ratios.r_m != base.ratios.r_m || rep.ratios.r_c != base.ratios.r_c || rep.ratios.r_u != base.ratios.r_u)
            return fail("shuffle changed the ratios");
    }
    for (int trial = 0; trial < 1000; ++trial) {
        Counts c{rng() % 1000, rng() % 1000, rng() % 1000 + 1};
        const auto q = ratios_from_counts(c);
        if (std::abs(q.r_m + q.r_c + q.r_u - 1.0) > 1e-12) return fail("random counts do not sum to 1");
    }
    return pass("(2,5,3) -> (0.2, 0.5, 0.3); 1000 shuffles invariant; sums within 1e-12");
}

// Mean of the strength of n uniform draws from k answers, by simulation.
double monte_carlo_strength(std::size_t k, std::size_t n, std::size_t draws, std::mt19937_64& rng) {
    double total = 0.0;
    std::vector<std::size_t> counts(k);
    for (std::size_t d = 0; d < draws; ++d) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[rng() % k];
        std::vector<std::size_t> sizes;
        for (auto c : counts)
            if (c) sizes.push_back(c);
        total += entropy_oracle(sizes);
    }
    return total / static_cast<double>(draws);
}

Outcome synthetic_strength() {
    const std::vector<std::size_t> ks{1, 2, 4, 7};
    const std::size_t per_k = 200;
    std::vector<QuestionRecord> questions;
    for (std::size_t k : ks) {
        for (std::size_t i = 0; i < per_k; ++i) {
            QuestionRecord q;
            q.id = "k" + std::to_string(k) + "-" + std::to_string(i);
            std::ostringstream text;
            text << "who designed the clock tower at site " << std::setw(3) << std::setfill('0') << i << " in region "
                 << k << " of the valley";
            q.text = text.str();
            questions.push_back(q);
        }
    }
    MockWorld world(questions, MockConfig{11, MockEvaluee::Realistic, MockReplyFormat::Letter});
    const auto& people = MockWorld::pool(EntityType::NameOfPerson);
    for (std::size_t qi = 0; qi < questions.size(); ++qi) {
        const std::size_t k = ks[qi / per_k];
        std::vector<std::string> planted;
        for (std::size_t j = 0; j < k; ++j) planted.push_back(people[(qi + j) % people.size()]);
        world.plant(questions[qi].text, planted);
    }
    Gateway gw;
    world.bind(gw, {0, 0, 8});

    std::mt19937_64 rng(4242);
    std::ostringstream detail;
    double previous = 1.0;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        const std::size_t k = ks[ki];
        double sum = 0.0;
        std::size_t scored = 0;
        for (std::size_t i = 0; i < per_k; ++i) {
            auto q = questions[ki * per_k + i];
            try {
                generate_paraphrases(gw, q, {7, 5, static_cast<std::int64_t>(ki * per_k + i)});
            } catch (const ExcludedQuestion&) {
                continue;
            }
            const auto answers = collect_answers(gw, q);
            const auto clusters = cluster_answers(gw, answers, q.text);
            sum += memory_strength(clusters).value;
            ++scored;
        }
        if (scored < per_k * 9 / 10) return fail("only " + std::to_string(scored) + " questions scored at k=" +
                                                 std::to_string(k));
        const double mean = sum / static_cast<double>(scored);
        const double oracle = monte_carlo_strength(k, 7, 100000, rng);
        detail << "k=" << k << " mean " << fmt(mean, 4) << " vs " << fmt(oracle, 4) << "; ";
        if (std::abs(mean - oracle) > 0.1) return fail(detail.str() + "outside +-0.1");
        if (mean >= previous) return fail(detail.str() + "not strictly decreasing");
        previous = mean;
    }
    return pass(detail.str() + "strictly decreasing");
}

RunConfig mock_run(const fs::path& out, const std::string& dataset, MockConfig mock) {
    RunConfig cfg;
    cfg.dataset = data(dataset);
    cfg.kind = Dataset::NQ;
    cfg.out = out;
    cfg.model_label = "mock";
    cfg.mock = mock;
    use_mock_roles(cfg);
    validate_config(cfg);
    return cfg;
}

std::vector<EvalRecord> run_and_read(const RunConfig& cfg) {
    auto rt = make_runtime(cfg);
    Pipeline pipe(cfg, rt.gateway);
    pipe.run_all();
    std::vector<EvalRecord> out;
    for (const auto& j : read_jsonl(cfg.out / "eval.jsonl")) out.push_back(j.get<EvalRecord>());
    return out;
}

Outcome faithfulness_wiring() {
    const auto follow = run_and_read(
        mock_run(scratch("follow"), "nq_sample.jsonl", {7, MockEvaluee::EvidenceFollowing, MockReplyFormat::Mixed}));
    const auto cling = run_and_read(
        mock_run(scratch("cling"), "nq_sample.jsonl", {7, MockEvaluee::MemoryClinging, MockReplyFormat::Mixed}));
    if (follow.empty() || cling.empty()) return fail("no evaluation records");
    const auto f = compute_ratios(follow).ratios;
    const auto c = compute_ratios(cling).ratios;
    if (f.r_c != 1.0) return fail("evidence-following R_c = " + fmt(f.r_c));
    if (c.r_m != 1.0) return fail("memory-clinging R_m = " + fmt(c.r_m));
    return pass("R_c = 1 over " + std::to_string(follow.size()) + " records; R_m = 1 over " +
                std::to_string(cling.size()));
}

Outcome style_composition() {
    const std::vector<std::string> subjects{"Dr. Smith", "The U.S. team", "J. K. Rowling", "Mt. Fuji", "Ada Lovelace"};
    std::size_t checked = 0;
    for (int b = 0; b < 20; ++b) {
        const auto& who = subjects[b % subjects.size()];
        const std::string n = std::to_string(1900 + b);
        EvidenceBundle bundle;
        bundle.question_id = "b" + std::to_string(b);
        bundle.direct = who + " finished it in " + n + ".";
        bundle.direct_paraphrases = {"In " + n + ", " + who + " finished it.", "It was finished by " + who + " in " + n + "!"};
        bundle.indirect_2 = "Records from " + n + " confirm it. Critics praised " + who + " at the time.";
        bundle.indirect_3 = "Records from " + n + " confirm it. Critics praised " + who +
                            " at the time. A plaque marks the date?";
        // expected passages, built by hand
        const std::map<std::string, std::string> expected{
            {"direct/1", bundle.direct},
            {"direct/2", bundle.direct + " " + bundle.direct},
            {"direct/3", bundle.direct + " " + bundle.direct + " " + bundle.direct},
            {"direct+paraphrase/2", bundle.direct + " " + bundle.direct_paraphrases[0]},
            {"direct+paraphrase/3",
             bundle.direct + " " + bundle.direct_paraphrases[0] + " " + bundle.direct_paraphrases[1]},
            {"indirect/2", *bundle.indirect_2},
            {"indirect/3", *bundle.indirect_3},
            {"direct+indirect/2", bundle.direct + " Records from " + n + " confirm it."},
            {"direct+indirect/3", bundle.direct + " " + *bundle.indirect_2},
        };
        for (const auto& v : evaluation_variants()) {
            const auto text = compose(v.style, bundle);
            if (text != expected.at(v.style.label())) return fail(v.style.label() + " on bundle " + bundle.question_id);
            if (count_sentences(text) != v.style.sentences)
                return fail(v.style.label() + " has " + std::to_string(count_sentences(text)) + " sentences");
            ++checked;
        }
    }
    if (evaluation_variants().size() != 10) return fail("expected 10 variants");
    return pass(std::to_string(checked) + " compositions over 20 bundles, all counts exact");
}

Outcome order_integrity() {
    const auto records = run_and_read(
        mock_run(scratch("order"), "nq_sample.jsonl", {7, MockEvaluee::Realistic, MockReplyFormat::Text}));
    std::map<std::string, std::map<OptionOrder, OptionTag>> by_instance;
    for (const auto& r : records)
        by_instance[r.question_id + "|" + std::to_string(r.group) + "|" + r.style.label()][r.order] = r.outcome;
    std::size_t pairs = 0;
    std::set<OptionTag> tags;
    for (const auto& [key, outcomes] : by_instance) {
        if (outcomes.size() != 2) return fail(key + " lacks one of the orders");
        if (outcomes.at(OptionOrder::MAFirst) != outcomes.at(OptionOrder::CMAFirst))
            return fail(key + ": tags differ between orders");
        tags.insert(outcomes.at(OptionOrder::MAFirst));
        ++pairs;
    }
    if (pairs == 0) return fail("no instances");
    // letters really move
    ConflictPair p;
    p.ma = "Linda Davis sings it.";
    p.cma = "Brandy Clark sings it.";
    const auto a = build_mc("q", "who sings it", "Brandy Clark sings it.", p, OptionOrder::MAFirst);
    const auto b = build_mc("q", "who sings it", "Brandy Clark sings it.", p, OptionOrder::CMAFirst);
    if (a.tagged(OptionTag::MA).letter == b.tagged(OptionTag::MA).letter) return fail("letters not permuted");
    return pass(std::to_string(pairs) + " instance pairs agree; " + std::to_string(tags.size()) +
                " distinct outcomes seen");
}

Outcome cache_idempotence() {
    const auto cache = scratch("cache") / "cache.jsonl";
    const std::vector<std::string> files{"paraphrases.jsonl", "answers.jsonl",  "strength.jsonl",
                                         "conflicts.jsonl",   "evidence.jsonl", "eval.jsonl",
                                         "report/metrics.csv", "report/stage_counts.csv"};
    auto cfg_a = mock_run(scratch("idem-a"), "nq_sample.jsonl", {});
    cfg_a.cache = cache;
    auto rt_a = make_runtime(cfg_a);
    Pipeline(cfg_a, rt_a.gateway).run_all();
    const auto first_calls = rt_a.gateway->stats().backend_calls;

    auto cfg_b = mock_run(scratch("idem-b"), "nq_sample.jsonl", {});
    cfg_b.cache = cache;
    auto rt_b = make_runtime(cfg_b);
    Pipeline(cfg_b, rt_b.gateway).run_all();
    const auto second_calls = rt_b.gateway->stats().backend_calls;
    if (second_calls != 0 || rt_b.world->calls() != 0)
        return fail("second run made " + std::to_string(second_calls) + " backend calls");
    for (const auto& f : files)
        if (slurp(cfg_a.out / f) != slurp(cfg_b.out / f)) return fail(f + " differs");

    // rerun in place: every stage is already complete
    auto rt_c = make_runtime(cfg_a);
    Pipeline(cfg_a, rt_c.gateway).run_all();
    if (rt_c.gateway->stats().backend_calls != 0) return fail("in-place rerun made calls");
    return pass("first run " + std::to_string(first_calls) + " calls, second run 0; " + std::to_string(files.size()) +
                " outputs byte-identical");
}

Outcome live_smoke() {
    const char* model = std::getenv("FAITH_LIVE_MODEL");
    const char* token_env = std::getenv("FAITH_LIVE_TOKEN_ENV");
    const std::string token_var = token_env ? token_env : "OPENAI_API_KEY";
    const char* token = std::getenv(token_var.c_str());
    if (!model || !token || !*token)
        return {Outcome::Skip, "set FAITH_LIVE_MODEL and " + token_var + " (optional FAITH_LIVE_BASE_URL)"};
    const char* base = std::getenv("FAITH_LIVE_BASE_URL");

    RunConfig cfg;
    cfg.dataset = data("nq_sample.jsonl");
    cfg.kind = Dataset::NQ;
    cfg.out = scratch("live");
    cfg.model_label = model;
    EndpointConfig ep;
    ep.kind = EndpointKind::Chat;
    ep.base_url = base ? base : "https://api.openai.com/v1";
    ep.model = model;
    ep.token_env = token_var;
    for (auto role : {ModelRole::Generator, ModelRole::Evaluee, ModelRole::Judge}) cfg.roles[role] = ep;
    EndpointConfig fallback;
    fallback.kind = EndpointKind::JudgeFallback;
    cfg.roles[ModelRole::Entailer] = fallback;
    cfg.entailment = EntailmentMode::JudgeFallback;
    validate_config(cfg);

    auto rt = make_runtime(cfg);
    const auto m = Pipeline(cfg, rt.gateway).run_all();
    const auto metrics = slurp(cfg.out / "report" / "metrics.csv");
    if (!metrics.starts_with("dataset,model,style,sentences,order,group,R_m,R_c,R_u,n,avg_strength\n"))
        return fail("malformed metrics.csv");
    if (!m.counts.monotone()) return fail("stage counts not monotone");
    return pass(std::to_string(rt.gateway->stats().backend_calls) + " live calls; group1 " +
                std::to_string(m.counts.group1));
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
        bool gating;
    };
    const std::vector<Criterion> criteria{
        {1, "entropy oracle", entropy, true},
        {2, "binning partition", binning, true},
        {3, "clustering", clustering, true},
        {4, "typing fixtures", typing, true},
        {5, "entity map", entity_map, true},
        {6, "ratio metrics", ratios, true},
        {7, "synthetic end-to-end strength", synthetic_strength, true},
        {8, "faithfulness wiring", faithfulness_wiring, true},
        {9, "style composition", style_composition, true},
        {10, "order integrity", order_integrity, true},
        {11, "cache and idempotence", cache_idempotence, true},
        {12, "live smoke (non-gating)", live_smoke, false},
    };
    int gating_failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const char* label = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Skip ? "SKIP" : "FAIL";
        std::cout << label << " criterion " << c.id << " " << c.name << ": " << o.detail << std::endl;
        if (c.gating && o.kind != Outcome::Pass) ++gating_failures;
    }
    return gating_failures == 0 ? 0 : 1;
}
