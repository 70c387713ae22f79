#pragma once

#include "faith/gateway.hpp"
#include "faith/strength.hpp"

#include <optional>
#include <string>
#include <vector>

namespace faith {

/// Question types of the two-layer typing tree. `how_far` has no NQ
/// instances but carries the distance entity type.
enum class QuestionType {
    HowMany, HowMuch, HowLong, HowOld, HowFar, How,
    WhoSings, WhoPlays, WhoWrites, WhoWins, Who,
    Where, When,
    WhatYear, WhatName, What,
    WhichCountry, WhichCity, WhichState, WhichYear, Which,
    Why, Other,
};

std::string_view to_string(QuestionType t);
QuestionType parse_question_type(std::string_view s);
std::span<const QuestionType> all_question_types();

enum class EntityType {
    Time, Location, NameOfPerson, Number, SingerName, PlayerName, WriterName, WinnerName, Distance, Age,
};

std::string_view to_string(EntityType e);
/// Phrase substituted into the change-entity prompt ("singer's name").
std::string_view prompt_phrase(EntityType e);

/// Layer 1: leading wh-word (what/when/where/which/who/why/how, else other).
/// Layer 2: (first, second) token bigram refinement.
QuestionType classify_question(std::string_view question);

/// Entity type to substitute; nullopt for non-processable types
/// (how, what, which, why, other).
std::optional<EntityType> entity_type_for(QuestionType t);

/// Coarse answer-entity group used for reporting: PER, LOC, TIM or OTHER.
std::string_view entity_group(QuestionType t);

/// Longest contiguous run of CMA tokens left unmatched by a word-level LCS
/// alignment with the MA (ties go to the earliest). Throws NoDifference when
/// every CMA token aligns.
std::string identify_alt_entity(std::string_view ma, std::string_view cma);

enum class ConflictStatus { Valid, FilteredOut, Excluded };
std::string_view to_string(ConflictStatus s);
ConflictStatus parse_conflict_status(std::string_view s);

struct ConflictChecks {
    bool contradiction = false;
    bool alt_not_in_question = false;
    bool alt_not_in_answers = false;
};

/// One CMA candidate and how it fared.
struct CmaAttempt {
    std::string candidate;
    std::string alt_entity;
    std::string ma_to_cma; ///< entailment label, MA as premise
    std::string cma_to_ma; ///< entailment label, candidate as premise (empty if not asked)
    bool contradiction = false;
    bool alt_not_in_question = false;
    std::string rejection; ///< empty when accepted
};

struct ConflictPair {
    std::string question_id;
    std::string ma;
    std::string cma;
    std::string alt_entity;
    ConflictChecks checks;
    ConflictStatus status = ConflictStatus::Excluded;
    std::vector<CmaAttempt> attempts;
    std::string note;
};

/// Closed-book one-sentence MA. popQA records return their ingested MA
/// without a call. An empty reply is retried once; then ExcludedQuestion.
std::string generate_ma(Gateway& gw, const QuestionRecord& q, std::int64_t seed = 0);

struct CmaOptions {
    int max_attempts = 5;
    std::int64_t seed = 0;
};

/// Generate a CMA by entity substitution and validate it: it must contradict
/// the MA (either entailment direction) and its alternative entity must not
/// occur in the question. The first candidate passing both goes through
/// conflict_filter. Status Excluded when no candidate passes.
ConflictPair generate_cma(Gateway& gw, const QuestionRecord& q, const std::string& ma, EntityType et,
                          const AnswerSet& answers, const CmaOptions& opts = {});

/// popQA path: the ingested pair, checked for alt-not-in-question and
/// filtered against the paraphrase answers.
ConflictPair ingested_conflict(const QuestionRecord& q, const AnswerSet& answers);

/// Sets checks.alt_not_in_answers and downgrades status to FilteredOut when
/// the alternative entity appears in any answer.
ConflictPair conflict_filter(ConflictPair pair, const AnswerSet& answers);

} // namespace faith
