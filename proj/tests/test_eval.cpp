#include "faith/backends.hpp"
#include "faith/error.hpp"
#include "faith/eval.hpp"
#include "faith/gateway.hpp"
#include "faith/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <random>
#include <sstream>

using namespace faith;

namespace {

ConflictPair pair_for(std::string ma, std::string cma) {
    ConflictPair p;
    p.question_id = "q";
    p.ma = std::move(ma);
    p.cma = std::move(cma);
    p.status = ConflictStatus::Valid;
    return p;
}

const ConflictPair kPair = pair_for("Linda Davis sings it with Reba.", "Brandy Clark sings it with Reba.");

MCInstance instance(OptionOrder order = OptionOrder::MAFirst) {
    return build_mc("q", "who sings does he love me with reba", "Brandy Clark sings it with Reba.", kPair, order);
}

EvalRecord record(const std::string& id, OptionTag outcome, int group = 1,
                  EvidenceStyle style = {EvidenceKind::Direct, 1}, OptionOrder order = OptionOrder::MAFirst) {
    EvalRecord r;
    r.question_id = id;
    r.dataset = "nq";
    r.model = "m";
    r.outcome = outcome;
    r.group = group;
    r.style = style;
    r.order = order;
    return r;
}

} // namespace

TEST_CASE("multiple-choice layout") {
    const auto a = instance(OptionOrder::MAFirst);
    REQUIRE(a.options.size() == 3);
    CHECK(a.option('A').tag == OptionTag::MA);
    CHECK(a.option('B').tag == OptionTag::CMA);
    CHECK(a.option('C').tag == OptionTag::UCT);
    CHECK(a.option('C').text == "Uncertain.");

    const auto b = instance(OptionOrder::CMAFirst);
    CHECK(b.option('A').tag == OptionTag::CMA);
    CHECK(b.option('B').tag == OptionTag::MA);
    CHECK(b.option('C').tag == OptionTag::UCT);

    CHECK(a.prompt.text.find("A: Linda Davis sings it with Reba.\nB: Brandy Clark sings it with Reba.\nC: Uncertain.") !=
          std::string::npos);
    CHECK(b.prompt.text.find("A: Brandy Clark sings it with Reba.\nB: Linda Davis sings it with Reba.\nC: Uncertain.") !=
          std::string::npos);
    CHECK_THROWS_AS(build_mc("q", "question", "  ", kPair, OptionOrder::MAFirst), MissingEvidence);
}

TEST_CASE("parse_choice") {
    const auto inst = instance();
    struct Case {
        const char* raw;
        std::optional<OptionTag> tag;
        ParsePath path;
    };
    const std::vector<Case> cases{
        {"A", OptionTag::MA, ParsePath::LetterPrefix},
        {"B.", OptionTag::CMA, ParsePath::LetterPrefix},
        {"  C: Uncertain.", OptionTag::UCT, ParsePath::LetterPrefix},
        {"(B)", OptionTag::CMA, ParsePath::LetterPrefix},
        {"b) Brandy", OptionTag::CMA, ParsePath::LetterPrefix},
        {"Answer: A", OptionTag::MA, ParsePath::LetterPrefix},
        {"The answer is B.", OptionTag::CMA, ParsePath::LetterPrefix},
        {"I would pick option C here", OptionTag::UCT, ParsePath::LetterPrefix},
        {"Brandy Clark sings it with Reba", OptionTag::CMA, ParsePath::OptionTextMatch},
        {"I believe linda davis sings it with reba.", OptionTag::MA, ParsePath::OptionTextMatch},
        {"uncertain", OptionTag::UCT, ParsePath::OptionTextMatch},
        {"Both options seem plausible to me.", std::nullopt, ParsePath::LetterPrefix},
        {"D", std::nullopt, ParsePath::LetterPrefix},
        {"", std::nullopt, ParsePath::LetterPrefix},
        {"the answer is a city in Texas", std::nullopt, ParsePath::LetterPrefix},
    };
    for (const auto& c : cases) {
        CAPTURE(c.raw);
        const auto got = parse_choice(inst, c.raw);
        REQUIRE(got.has_value() == c.tag.has_value());
        if (got) {
            CHECK(got->outcome == *c.tag);
            CHECK(got->path == c.path);
        }
    }
    // text naming both options is ambiguous
    CHECK_FALSE(parse_choice(inst, "Linda Davis sings it with Reba. Brandy Clark sings it with Reba.").has_value());
}

TEST_CASE("evaluate_instance paths") {
    SUBCASE("direct letter") {
        Gateway gw;
        auto ev = fixed_reply_backend("B");
        gw.bind(ModelRole::Evaluee, ev);
        const auto r = evaluate_instance(gw, instance(), "nq", "m");
        CHECK(r.outcome == OptionTag::CMA);
        CHECK(r.parse_path == ParsePath::LetterPrefix);
        CHECK_FALSE(r.reprompted);
        CHECK(ev->calls() == 1);
    }
    SUBCASE("re-prompt recovers") {
        Gateway gw;
        std::vector<std::string> names;
        gw.bind(ModelRole::Evaluee, std::make_shared<MockBackend>("re", [&](const CompletionRequest& r) {
                    names.push_back(r.prompt.template_name);
                    return r.prompt.template_name == "evaluate_with_evidence_reprompt" ? std::string("A")
                                                                                       : std::string("Hmm, hard to say.");
                }), {0, 0, 1});
        const auto r = evaluate_instance(gw, instance(), "nq", "m");
        CHECK(r.reprompted);
        CHECK(r.outcome == OptionTag::MA);
        CHECK(r.parse_path == ParsePath::LetterPrefix);
        CHECK(r.raw_response == "Hmm, hard to say.");
        CHECK(r.reprompt_response == "A");
        REQUIRE(names.size() == 2);
    }
    SUBCASE("re-prompt fails: uncertain") {
        Gateway gw;
        std::string second;
        gw.bind(ModelRole::Evaluee, std::make_shared<MockBackend>("bad", [&](const CompletionRequest& r) {
                    if (r.prompt.template_name == "evaluate_with_evidence_reprompt") second = r.prompt.text;
                    return std::string("no idea");
                }), {0, 0, 1});
        const auto r = evaluate_instance(gw, instance(), "nq", "m");
        CHECK(r.reprompted);
        CHECK(r.outcome == OptionTag::UCT);
        CHECK(r.parse_path == ParsePath::RepromptedThenUCT);
        CHECK(second.ends_with("\nRespond with a single letter (A, B, C) only."));
    }
}

TEST_CASE("order permutation keeps the chosen answer") {
    // an evaluee that always names the CMA by its text gives the same tag in both orders
    Gateway gw;
    gw.bind(ModelRole::Evaluee, fixed_reply_backend("Brandy Clark sings it with Reba."));
    CHECK(evaluate_instance(gw, instance(OptionOrder::MAFirst), "nq", "m").outcome == OptionTag::CMA);
    CHECK(evaluate_instance(gw, instance(OptionOrder::CMAFirst), "nq", "m").outcome == OptionTag::CMA);
    // a fixed letter maps to different tags
    Gateway g2;
    g2.bind(ModelRole::Evaluee, fixed_reply_backend("A"));
    CHECK(evaluate_instance(g2, instance(OptionOrder::MAFirst), "nq", "m").outcome == OptionTag::MA);
    CHECK(evaluate_instance(g2, instance(OptionOrder::CMAFirst), "nq", "m").outcome == OptionTag::CMA);
}

TEST_CASE("ratios") {
    const auto r = ratios_from_counts({2, 5, 3});
    CHECK(r.r_m == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.r_c == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.r_u == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(ratios_from_counts({}), EmptyGroup);
    CHECK_THROWS_AS(compute_ratios({}), EmptyGroup);

    std::vector<EvalRecord> recs;
    for (int i = 0; i < 2; ++i) recs.push_back(record("a" + std::to_string(i), OptionTag::MA));
    for (int i = 0; i < 5; ++i) recs.push_back(record("b" + std::to_string(i), OptionTag::CMA));
    for (int i = 0; i < 3; ++i) recs.push_back(record("c" + std::to_string(i), OptionTag::UCT));
    std::map<std::string, StrengthScore> strengths{{"a0", {-1.0, 7, StrengthBin::Low}},
                                                   {"b0", {-0.5, 7, StrengthBin::MidLow}}};
    const auto rep = compute_ratios(recs, &strengths);
    CHECK(rep.counts.f_m == 2);
    CHECK(rep.counts.f_c == 5);
    CHECK(rep.counts.f_u == 3);
    REQUIRE(rep.avg_strength.has_value());
    CHECK(*rep.avg_strength == doctest::Approx(-0.75));
    CHECK_FALSE(compute_ratios(recs).avg_strength.has_value());
}

TEST_CASE("ratios sum to one over random groups") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Counts c{rng() % 50, rng() % 50, rng() % 50 + 1};
        const auto r = ratios_from_counts(c);
        CHECK(std::abs(r.r_m + r.r_c + r.r_u - 1.0) < 1e-12);
    }
}

TEST_CASE("grouping") {
    std::vector<EvalRecord> recs{
        record("q1", OptionTag::MA, 1, {EvidenceKind::Direct, 1}),
        record("q1", OptionTag::CMA, 1, {EvidenceKind::Direct, 2}),
        record("q2", OptionTag::CMA, 2, {EvidenceKind::Indirect, 2}),
        record("q2", OptionTag::UCT, 2, {EvidenceKind::Indirect, 3}, OptionOrder::CMAFirst),
    };
    std::map<std::string, StrengthScore> strengths{{"q1", {-0.1, 7, StrengthBin::High}},
                                                   {"q2", {-1.5, 7, StrengthBin::Low}}};
    std::map<std::string, QuestionType> types{{"q1", QuestionType::WhoSings}, {"q2", QuestionType::When}};

    const auto by_group = group_and_report(recs, strengths, types, {"group"});
    REQUIRE(by_group.size() == 2);
    CHECK(by_group[0].keys.evidence_group == "group1");
    CHECK(by_group[0].counts.total() == 2);
    CHECK(by_group[1].keys.style == "*");

    const auto by_bin = group_and_report(recs, strengths, types, {"strength_bin"});
    REQUIRE(by_bin.size() == 2);
    CHECK(by_bin[0].keys.strength_bin == "low");
    CHECK(by_bin[1].keys.strength_bin == "high");

    const auto by_entity = group_and_report(recs, strengths, types, {"entity_type"});
    REQUIRE(by_entity.size() == 2);
    CHECK(by_entity[0].keys.entity_type == "PER");
    CHECK(by_entity[1].keys.entity_type == "TIM");

    const auto fine = group_and_report(recs, strengths, types, {"style", "sentences", "order"});
    CHECK(fine.size() == 4);
    std::size_t total = 0;
    for (const auto& r : fine) total += r.counts.total();
    CHECK(total == recs.size());

    CHECK_THROWS_AS(group_and_report(recs, strengths, types, {"colour"}), UnknownDimension);
    CHECK(group_and_report({}, strengths, types, {"group"}).empty());
}

TEST_CASE("report files") {
    CHECK(percent(0.99556) == "99.56");
    CHECK(percent(1.0) == "100.00");
    CHECK(percent(0.0) == "0.00");

    std::vector<EvalRecord> recs{record("q1", OptionTag::MA), record("q2", OptionTag::CMA)};
    const auto reports = group_and_report(recs, {}, {}, {"dataset", "model", "style", "sentences", "order"});
    std::ostringstream out;
    write_metrics_csv(out, reports);
    CHECK(out.str() == "dataset,model,style,sentences,order,group,R_m,R_c,R_u,n,avg_strength\n"
                       "nq,m,direct,1,ma-first,all,50.00,50.00,0.00,2,\n");

    std::ostringstream hist;
    write_histogram_csv(hist, "nq", "m", {-2.0, -1.9, -0.1, 0.0});
    CHECK(hist.str().starts_with("dataset,model,bin_lo,bin_hi,count\nnq,m,-2.00,-1.75,2\n"));
    CHECK(hist.str().ends_with("nq,m,-0.25,0.00,2\n"));

    StageCounts c{10, 9, 8, 7, 6, 4, 3, 5, 3};
    CHECK(c.monotone());
    c.group2 = 4;
    CHECK_FALSE(c.monotone());
}
