#include "faith/backends.hpp"
#include "faith/conflict.hpp"
#include "faith/error.hpp"
#include "faith/gateway.hpp"

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <vector>

using namespace faith;

namespace {

struct Typed {
    const char* question;
    QuestionType type;
};

// Hand-labelled typing fixture; every type except how_far has a real-looking
// question, how_far gets a constructed one.
const std::vector<Typed> kTyped{
    {"how many episodes are in chicago fire season 4", QuestionType::HowMany},
    {"how much does a gallon of milk weigh", QuestionType::HowMuch},
    {"how long is the great wall of china", QuestionType::HowLong},
    {"how old is the oldest tree in the world", QuestionType::HowOld},
    {"how far is the moon from the earth", QuestionType::HowFar},
    {"how are leaders of the two parties in congress chosen", QuestionType::How},
    {"who sings does he love me with reba", QuestionType::WhoSings},
    {"who sang the theme song for the fresh prince", QuestionType::WhoSings},
    {"who plays the joker in the dark knight", QuestionType::WhoPlays},
    {"who played dumbledore in the first harry potter", QuestionType::WhoPlays},
    {"who wrote the song stand by me", QuestionType::WhoWrites},
    {"who won the first season of american idol", QuestionType::WhoWins},
    {"who is the president of france", QuestionType::Who},
    {"where is the eiffel tower located", QuestionType::Where},
    {"when did the titanic sink", QuestionType::When},
    {"what year did world war 2 end", QuestionType::WhatYear},
    {"what name is given to a baby kangaroo", QuestionType::WhatName},
    {"what is the setting of the story sorry wrong number", QuestionType::What},
    {"which country has the largest population", QuestionType::WhichCountry},
    {"which city hosted the 2012 olympics", QuestionType::WhichCity},
    {"which state is the grand canyon in", QuestionType::WhichState},
    {"which year did the berlin wall fall", QuestionType::WhichYear},
    {"which domain of life are humans members of", QuestionType::Which},
    {"why is the sky blue", QuestionType::Why},
    {"latest season on keeping up with the kardashians", QuestionType::Other},
    {"Who Wrote The Hobbit?", QuestionType::WhoWrites},
};

QuestionRecord nq(std::string id, std::string text) {
    QuestionRecord q;
    q.id = std::move(id);
    q.dataset = Dataset::NQ;
    q.text = std::move(text);
    return q;
}

// Generator that hands out scripted CMA candidates in order.
std::shared_ptr<MockBackend> scripted(std::vector<std::string> replies, std::shared_ptr<std::atomic<int>> idx) {
    return std::make_shared<MockBackend>("scripted", [replies, idx](const CompletionRequest&) {
        const int i = idx->fetch_add(1);
        return replies[std::min<std::size_t>(i, replies.size() - 1)];
    });
}

struct Fixture {
    Gateway gw;
    std::shared_ptr<std::atomic<int>> idx = std::make_shared<std::atomic<int>>(0);

    explicit Fixture(std::vector<std::string> replies) {
        gw.bind(ModelRole::Generator, scripted(std::move(replies), idx), {0, 0, 4});
        gw.bind(ModelRole::Entailer, lexical_entailer_backend(), {0, 0, 4});
    }
};

const std::string kMa = "There are 23 episodes in Chicago Fire season 4.";

} // namespace

TEST_CASE("question typing fixture") {
    for (const auto& t : kTyped) {
        CAPTURE(t.question);
        CHECK(classify_question(t.question) == t.type);
    }
    // every type is covered
    for (auto type : all_question_types()) {
        bool seen = false;
        for (const auto& t : kTyped) seen = seen || t.type == type;
        CAPTURE(to_string(type));
        CHECK(seen);
    }
    CHECK(classify_question("") == QuestionType::Other);
    CHECK(classify_question("   ?") == QuestionType::Other);
}

TEST_CASE("question type names round-trip") {
    for (auto type : all_question_types()) CHECK(parse_question_type(to_string(type)) == type);
    CHECK_THROWS(parse_question_type("whence"));
}

TEST_CASE("entity type map") {
    const std::vector<std::pair<QuestionType, EntityType>> expected{
        {QuestionType::When, EntityType::Time},          {QuestionType::WhatYear, EntityType::Time},
        {QuestionType::WhichYear, EntityType::Time},     {QuestionType::HowLong, EntityType::Time},
        {QuestionType::Where, EntityType::Location},     {QuestionType::WhichCity, EntityType::Location},
        {QuestionType::WhichState, EntityType::Location}, {QuestionType::WhichCountry, EntityType::Location},
        {QuestionType::Who, EntityType::NameOfPerson},   {QuestionType::WhatName, EntityType::NameOfPerson},
        {QuestionType::HowMany, EntityType::Number},     {QuestionType::HowMuch, EntityType::Number},
        {QuestionType::WhoSings, EntityType::SingerName}, {QuestionType::WhoPlays, EntityType::PlayerName},
        {QuestionType::WhoWrites, EntityType::WriterName}, {QuestionType::WhoWins, EntityType::WinnerName},
        {QuestionType::HowFar, EntityType::Distance},    {QuestionType::HowOld, EntityType::Age},
    };
    for (const auto& [qt, et] : expected) {
        CAPTURE(to_string(qt));
        REQUIRE(entity_type_for(qt).has_value());
        CHECK(*entity_type_for(qt) == et);
    }
    for (auto qt : {QuestionType::What, QuestionType::Which, QuestionType::How, QuestionType::Why,
                    QuestionType::Other})
        CHECK_FALSE(entity_type_for(qt).has_value());

    CHECK(prompt_phrase(EntityType::SingerName) == "singer's name");
    CHECK(prompt_phrase(EntityType::NameOfPerson) == "name of person");
    CHECK(entity_group(QuestionType::WhoSings) == "PER");
    CHECK(entity_group(QuestionType::Where) == "LOC");
    CHECK(entity_group(QuestionType::WhatYear) == "TIM");
    CHECK(entity_group(QuestionType::HowMany) == "OTHER");
}

TEST_CASE("alternative entity span") {
    CHECK(identify_alt_entity("there are 23 episodes in Chicago Fire season 4",
                              "there are 15 episodes in Chicago Fire season 4") == "15");
    CHECK(identify_alt_entity("X was born in Paris", "X was born in Lyon in France") == "Lyon in France");
    CHECK(identify_alt_entity("Does He Love You is sung by Reba McEntire and Linda Davis.",
                              "Does He Love You is sung by Reba McEntire and Brandy Clark.") == "Brandy Clark");
    // punctuation and case differences are not a difference
    CHECK_THROWS_AS(identify_alt_entity("It was 1912.", "it was 1912"), NoDifference);
    CHECK_THROWS_AS(identify_alt_entity(kMa, kMa), NoDifference);
    // a deletion leaves nothing new in the CMA
    CHECK_THROWS_AS(identify_alt_entity("born in Lyon in France", "born in France"), NoDifference);
    // tie between two equal-length runs goes to the earliest
    CHECK(identify_alt_entity("a b c d", "x b y d") == "x");
}

TEST_CASE("generate_ma") {
    SUBCASE("popQA uses the ingested answer without a call") {
        Gateway gw;
        auto ev = fixed_reply_backend("should not be used");
        gw.bind(ModelRole::Evaluee, ev);
        QuestionRecord q = nq("pq", "Who was the producer of Titanic?");
        q.dataset = Dataset::PopQA;
        q.ma = " James Cameron produced Titanic. ";
        CHECK(generate_ma(gw, q) == "James Cameron produced Titanic.");
        CHECK(ev->calls() == 0);
    }
    SUBCASE("empty reply is retried once") {
        Gateway gw;
        auto n = std::make_shared<std::atomic<int>>(0);
        gw.bind(ModelRole::Evaluee, scripted({"   ", "The answer is 23."}, n));
        CHECK(generate_ma(gw, nq("q", "how many?")) == "The answer is 23.");
        CHECK(n->load() == 2);
    }
    SUBCASE("two empty replies exclude") {
        Gateway gw;
        gw.bind(ModelRole::Evaluee, fixed_reply_backend(""));
        CHECK_THROWS_AS(generate_ma(gw, nq("q", "how many?")), ExcludedQuestion);
    }
}

TEST_CASE("generate_cma accepts the first contradicting candidate") {
    Fixture f({"Answer: There are 15 episodes in Chicago Fire season 4."});
    const auto q = nq("q1", "how many episodes are in chicago fire season 4");
    AnswerSet answers{"q1", {"23 episodes", "There were 23.", "twenty-three"}};
    const auto p = generate_cma(f.gw, q, kMa, EntityType::Number, answers);
    CHECK(p.status == ConflictStatus::Valid);
    CHECK(p.cma == "There are 15 episodes in Chicago Fire season 4.");
    CHECK(p.alt_entity == "15");
    CHECK(p.checks.contradiction);
    CHECK(p.checks.alt_not_in_question);
    CHECK(p.checks.alt_not_in_answers);
    REQUIRE(p.attempts.size() == 1);
    CHECK(p.attempts[0].ma_to_cma == "contradiction");
    CHECK(p.attempts[0].rejection.empty());
}

TEST_CASE("generate_cma retries rejected candidates") {
    Fixture f({
        kMa,                                                      // unchanged: no contradiction, no difference
        "There are 23 episodes in Chicago Fire season 4 on TV.",  // no contradiction
        "There are 12 episodes in Chicago Fire season 4.",        // alt occurs in the question
        "There are 30 episodes in Chicago Fire season 4.",
    });
    const auto q = nq("q2", "how many episodes are in chicago fire season 4, more than 12");
    const auto p = generate_cma(f.gw, q, kMa, EntityType::Number, {"q2", {}});
    REQUIRE(p.attempts.size() == 4);
    CHECK(p.attempts[0].rejection == "no_difference");
    CHECK(p.attempts[1].rejection == "no_contradiction");
    CHECK(p.attempts[2].rejection == "alt_in_question");
    CHECK(p.attempts[3].rejection.empty());
    CHECK(p.status == ConflictStatus::Valid);
    CHECK(p.alt_entity == "30");
}

TEST_CASE("generate_cma excludes after the attempt budget") {
    Fixture f({kMa});
    const auto q = nq("q3", "how many episodes are in chicago fire season 4");
    const auto p = generate_cma(f.gw, q, kMa, EntityType::Number, {"q3", {}});
    CHECK(p.status == ConflictStatus::Excluded);
    CHECK(p.attempts.size() == 5);
    CHECK(f.idx->load() == 5);
    CHECK(p.cma.empty());

    Fixture g({kMa});
    const auto p2 = generate_cma(g.gw, q, kMa, EntityType::Number, {"q3", {}}, {2, 0});
    CHECK(p2.attempts.size() == 2);
}

TEST_CASE("generate_cma attempts use distinct seeds") {
    Gateway gw;
    std::vector<std::int64_t> seeds;
    std::mutex mu;
    gw.bind(ModelRole::Generator, std::make_shared<MockBackend>("seeds", [&](const CompletionRequest& r) {
                std::lock_guard lock(mu);
                seeds.push_back(r.decode.seed.value_or(-1));
                return std::string(kMa);
            }));
    gw.bind(ModelRole::Entailer, lexical_entailer_backend());
    (void)generate_cma(gw, nq("q", "how many?"), kMa, EntityType::Number, {"q", {}});
    REQUIRE(seeds.size() == 5);
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::unique(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("conflict filter") {
    ConflictPair base;
    base.question_id = "q";
    base.ma = "Does He Love You is sung by Reba McEntire and Linda Davis.";
    base.cma = "Does He Love You is sung by Reba McEntire and Brandy Clark.";
    base.alt_entity = "Brandy Clark";
    base.checks.contradiction = true;
    base.checks.alt_not_in_question = true;

    auto clean = conflict_filter(base, {"q", {"Linda Davis", "Reba and Linda Davis"}});
    CHECK(clean.status == ConflictStatus::Valid);
    CHECK(clean.checks.alt_not_in_answers);

    auto dirty = conflict_filter(base, {"q", {"Linda Davis", "I think it was brandy  clark"}});
    CHECK(dirty.status == ConflictStatus::FilteredOut);
    CHECK_FALSE(dirty.checks.alt_not_in_answers);

    auto none = conflict_filter(base, {"q", {}});
    CHECK(none.status == ConflictStatus::Valid);

    base.alt_entity = "15";
    CHECK(conflict_filter(base, {"q", {"23", "There are 23 episodes."}}).status == ConflictStatus::Valid);
}

TEST_CASE("ingested popQA conflicts") {
    QuestionRecord q = nq("pq-1", "Who was the producer of Titanic?");
    q.dataset = Dataset::PopQA;
    q.ma = "James Cameron was the producer of Titanic.";
    q.cma = "Steven Spielberg was the producer of Titanic.";
    q.alt_entity = "Steven Spielberg";

    auto p = ingested_conflict(q, {"pq-1", {"James Cameron"}});
    CHECK(p.status == ConflictStatus::Valid);
    CHECK(ingested_conflict(q, {"pq-1", {"Steven Spielberg"}}).status == ConflictStatus::FilteredOut);

    q.alt_entity.reset();
    CHECK(ingested_conflict(q, {"pq-1", {}}).alt_entity == "Steven Spielberg");

    q.text = "Was Steven Spielberg the producer of Titanic?";
    CHECK(ingested_conflict(q, {"pq-1", {}}).status == ConflictStatus::Excluded);

    q.cma = q.ma;
    CHECK(ingested_conflict(q, {"pq-1", {}}).status == ConflictStatus::Excluded);
}
