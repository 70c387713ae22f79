#include "faith/conflict.hpp"

#include "faith/digest.hpp"
#include "faith/error.hpp"
#include "faith/text.hpp"

#include <array>
#include <map>

namespace faith {

namespace {

struct TypeName {
    QuestionType type;
    std::string_view name;
};

constexpr std::array<TypeName, 23> kTypeNames{{
    {QuestionType::HowMany, "how_many"},       {QuestionType::HowMuch, "how_much"},
    {QuestionType::HowLong, "how_long"},       {QuestionType::HowOld, "how_old"},
    {QuestionType::HowFar, "how_far"},         {QuestionType::How, "how"},
    {QuestionType::WhoSings, "who_sings"},     {QuestionType::WhoPlays, "who_plays"},
    {QuestionType::WhoWrites, "who_writes"},   {QuestionType::WhoWins, "who_wins"},
    {QuestionType::Who, "who"},                {QuestionType::Where, "where"},
    {QuestionType::When, "when"},              {QuestionType::WhatYear, "what_year"},
    {QuestionType::WhatName, "what_name"},     {QuestionType::What, "what"},
    {QuestionType::WhichCountry, "which_country"}, {QuestionType::WhichCity, "which_city"},
    {QuestionType::WhichState, "which_state"}, {QuestionType::WhichYear, "which_year"},
    {QuestionType::Which, "which"},            {QuestionType::Why, "why"},
    {QuestionType::Other, "other"},
}};

const std::map<std::string, QuestionType>& first_layer() {
    static const std::map<std::string, QuestionType> m{
        {"what", QuestionType::What},   {"when", QuestionType::When}, {"where", QuestionType::Where},
        {"which", QuestionType::Which}, {"who", QuestionType::Who},   {"why", QuestionType::Why},
        {"how", QuestionType::How},
    };
    return m;
}

const std::map<std::pair<std::string, std::string>, QuestionType>& second_layer() {
    static const std::map<std::pair<std::string, std::string>, QuestionType> m{
        {{"how", "many"}, QuestionType::HowMany},
        {{"how", "much"}, QuestionType::HowMuch},
        {{"how", "long"}, QuestionType::HowLong},
        {{"how", "old"}, QuestionType::HowOld},
        {{"how", "far"}, QuestionType::HowFar},
        {{"who", "sings"}, QuestionType::WhoSings},
        {{"who", "sang"}, QuestionType::WhoSings},
        {{"who", "sung"}, QuestionType::WhoSings},
        {{"who", "sing"}, QuestionType::WhoSings},
        {{"who", "plays"}, QuestionType::WhoPlays},
        {{"who", "played"}, QuestionType::WhoPlays},
        {{"who", "play"}, QuestionType::WhoPlays},
        {{"who", "writes"}, QuestionType::WhoWrites},
        {{"who", "wrote"}, QuestionType::WhoWrites},
        {{"who", "written"}, QuestionType::WhoWrites},
        {{"who", "write"}, QuestionType::WhoWrites},
        {{"who", "wins"}, QuestionType::WhoWins},
        {{"who", "won"}, QuestionType::WhoWins},
        {{"who", "win"}, QuestionType::WhoWins},
        {{"what", "year"}, QuestionType::WhatYear},
        {{"what", "name"}, QuestionType::WhatName},
        {{"which", "country"}, QuestionType::WhichCountry},
        {{"which", "city"}, QuestionType::WhichCity},
        {{"which", "state"}, QuestionType::WhichState},
        {{"which", "year"}, QuestionType::WhichYear},
    };
    return m;
}

std::string first_line(std::string_view s) {
    for (const auto& line : text::split_lines(s)) {
        auto t = text::trim(line);
        if (!t.empty()) return t;
    }
    return {};
}

} // namespace

std::string_view to_string(QuestionType t) {
    for (const auto& tn : kTypeNames)
        if (tn.type == t) return tn.name;
    return "other";
}

QuestionType parse_question_type(std::string_view s) {
    for (const auto& tn : kTypeNames)
        if (tn.name == s) return tn.type;
    throw std::invalid_argument("unknown question type: " + std::string(s));
}

std::span<const QuestionType> all_question_types() {
    static const auto types = [] {
        std::array<QuestionType, kTypeNames.size()> out{};
        for (std::size_t i = 0; i < kTypeNames.size(); ++i) out[i] = kTypeNames[i].type;
        return out;
    }();
    return types;
}

std::string_view to_string(EntityType e) {
    switch (e) {
    case EntityType::Time: return "time";
    case EntityType::Location: return "location";
    case EntityType::NameOfPerson: return "name_of_person";
    case EntityType::Number: return "number";
    case EntityType::SingerName: return "singer_name";
    case EntityType::PlayerName: return "player_name";
    case EntityType::WriterName: return "writer_name";
    case EntityType::WinnerName: return "winner_name";
    case EntityType::Distance: return "distance";
    case EntityType::Age: return "age";
    }
    return "?";
}

std::string_view prompt_phrase(EntityType e) {
    switch (e) {
    case EntityType::Time: return "time";
    case EntityType::Location: return "location";
    case EntityType::NameOfPerson: return "name of person";
    case EntityType::Number: return "number";
    case EntityType::SingerName: return "singer's name";
    case EntityType::PlayerName: return "player's name";
    case EntityType::WriterName: return "writer's name";
    case EntityType::WinnerName: return "winner's name";
    case EntityType::Distance: return "distance";
    case EntityType::Age: return "age";
    }
    return "?";
}

QuestionType classify_question(std::string_view question) {
    const auto tokens = text::word_tokens(question);
    if (tokens.empty()) return QuestionType::Other;
    auto l1 = first_layer().find(tokens[0]);
    if (l1 == first_layer().end()) return QuestionType::Other;
    if (tokens.size() >= 2) {
        auto l2 = second_layer().find({tokens[0], tokens[1]});
        if (l2 != second_layer().end()) return l2->second;
    }
    return l1->second;
}

std::optional<EntityType> entity_type_for(QuestionType t) {
    switch (t) {
    case QuestionType::When:
    case QuestionType::WhatYear:
    case QuestionType::WhichYear:
    case QuestionType::HowLong: return EntityType::Time;
    case QuestionType::Where:
    case QuestionType::WhichCity:
    case QuestionType::WhichState:
    case QuestionType::WhichCountry: return EntityType::Location;
    case QuestionType::Who:
    case QuestionType::WhatName: return EntityType::NameOfPerson;
    case QuestionType::HowMany:
    case QuestionType::HowMuch: return EntityType::Number;
    case QuestionType::WhoSings: return EntityType::SingerName;
    case QuestionType::WhoPlays: return EntityType::PlayerName;
    case QuestionType::WhoWrites: return EntityType::WriterName;
    case QuestionType::WhoWins: return EntityType::WinnerName;
    case QuestionType::HowFar: return EntityType::Distance;
    case QuestionType::HowOld: return EntityType::Age;
    case QuestionType::How:
    case QuestionType::What:
    case QuestionType::Which:
    case QuestionType::Why:
    case QuestionType::Other: return std::nullopt;
    }
    return std::nullopt;
}

std::string_view entity_group(QuestionType t) {
    switch (t) {
    case QuestionType::Who:
    case QuestionType::WhatName:
    case QuestionType::WhoWrites:
    case QuestionType::WhoSings:
    case QuestionType::WhoWins:
    case QuestionType::WhoPlays: return "PER";
    case QuestionType::Where:
    case QuestionType::WhichCountry: return "LOC";
    case QuestionType::When:
    case QuestionType::WhatYear:
    case QuestionType::WhichYear: return "TIM";
    default: return "OTHER";
    }
}

std::string identify_alt_entity(std::string_view ma, std::string_view cma) {
    const auto ma_tok = text::split_whitespace(ma);
    const auto cma_tok = text::split_whitespace(cma);
    auto key = [](const std::string& t) { return text::to_lower(text::strip_punct(t)); };
    std::vector<std::string> a, b;
    for (const auto& t : ma_tok) a.push_back(key(t));
    for (const auto& t : cma_tok) b.push_back(key(t));

    const std::size_t m = a.size();
    const std::size_t k = b.size();
    // suffix LCS table
    std::vector<std::vector<std::size_t>> lcs(m + 1, std::vector<std::size_t>(k + 1, 0));
    for (std::size_t i = m; i-- > 0;)
        for (std::size_t j = k; j-- > 0;)
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);

    // Walk the alignment, consuming MA tokens before CMA tokens so CMA
    // tokens match as early as possible and unmatched runs stay contiguous.
    std::vector<bool> matched(k, false);
    std::size_t i = 0, j = 0;
    while (i < m && j < k) {
        if (a[i] == b[j] && lcs[i][j] == lcs[i + 1][j + 1] + 1) {
            matched[j] = true;
            ++i;
            ++j;
        } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
            ++i;
        } else {
            ++j;
        }
    }

    std::size_t best_start = 0, best_len = 0;
    for (std::size_t s = 0; s < k;) {
        if (matched[s]) {
            ++s;
            continue;
        }
        std::size_t e = s;
        while (e < k && !matched[e]) ++e;
        // runs made only of punctuation do not count
        std::size_t content = 0;
        for (std::size_t x = s; x < e; ++x) content += b[x].empty() ? 0 : 1;
        if (content > 0 && e - s > best_len) {
            best_start = s;
            best_len = e - s;
        }
        s = e;
    }
    if (best_len == 0) throw NoDifference("CMA adds no tokens to the MA");

    std::string span;
    for (std::size_t x = best_start; x < best_start + best_len; ++x) {
        if (!span.empty()) span.push_back(' ');
        span += cma_tok[x];
    }
    return text::strip_punct(span);
}

std::string_view to_string(ConflictStatus s) {
    switch (s) {
    case ConflictStatus::Valid: return "valid";
    case ConflictStatus::FilteredOut: return "filtered_out";
    case ConflictStatus::Excluded: return "excluded";
    }
    return "?";
}

ConflictStatus parse_conflict_status(std::string_view s) {
    if (s == "valid") return ConflictStatus::Valid;
    if (s == "filtered_out") return ConflictStatus::FilteredOut;
    if (s == "excluded") return ConflictStatus::Excluded;
    throw std::invalid_argument("unknown conflict status: " + std::string(s));
}

std::string generate_ma(Gateway& gw, const QuestionRecord& q, std::int64_t seed) {
    if (q.dataset == Dataset::PopQA) {
        if (!q.ma || text::trim(*q.ma).empty()) throw ExcludedQuestion("popQA record " + q.id + " has no MA");
        return text::trim(*q.ma);
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::optional<std::int64_t> s;
        if (attempt > 0) s = derive_seed(seed, "ma-retry");
        auto reply = text::trim(gw.call(ModelRole::Evaluee, TemplateId::ClosedBookQA, {{"[Question]", q.text}}, s));
        if (!reply.empty()) return reply;
    }
    throw ExcludedQuestion("empty memory answer for " + q.id);
}

ConflictPair conflict_filter(ConflictPair pair, const AnswerSet& answers) {
    bool clean = true;
    for (const auto& a : answers.answers) {
        if (text::contains_normalized(a, pair.alt_entity)) {
            clean = false;
            break;
        }
    }
    pair.checks.alt_not_in_answers = clean;
    if (!clean) {
        pair.status = ConflictStatus::FilteredOut;
    } else if (pair.checks.contradiction && pair.checks.alt_not_in_question) {
        pair.status = ConflictStatus::Valid;
    }
    return pair;
}

ConflictPair generate_cma(Gateway& gw, const QuestionRecord& q, const std::string& ma, EntityType et,
                          const AnswerSet& answers, const CmaOptions& opts) {
    if (text::trim(ma).empty()) throw std::invalid_argument("empty MA");
    ConflictPair pair;
    pair.question_id = q.id;
    pair.ma = ma;
    pair.status = ConflictStatus::Excluded;

    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        CmaAttempt log;
        const auto seed = derive_seed(opts.seed, q.id + "#cma#" + std::to_string(attempt));
        auto reply = gw.call(ModelRole::Generator, TemplateId::ChangeMaToCma,
                             {{"[CMA]", ma}, {"[entity type]", std::string(prompt_phrase(et))}}, seed);
        log.candidate = first_line(reply);
        if (text::starts_with_ci(log.candidate, "answer:")) log.candidate = text::trim(log.candidate.substr(7));
        if (log.candidate.empty()) {
            log.rejection = "empty";
            pair.attempts.push_back(std::move(log));
            continue;
        }

        const auto forward = gw.entail(ma, log.candidate).label;
        log.ma_to_cma = to_string(forward);
        log.contradiction = forward == EntailmentLabel::Contradiction;
        if (!log.contradiction) {
            const auto backward = gw.entail(log.candidate, ma).label;
            log.cma_to_ma = to_string(backward);
            log.contradiction = backward == EntailmentLabel::Contradiction;
        }

        try {
            log.alt_entity = identify_alt_entity(ma, log.candidate);
        } catch (const NoDifference&) {
            log.rejection = "no_difference";
            pair.attempts.push_back(std::move(log));
            continue;
        }
        log.alt_not_in_question = !text::contains_normalized(q.text, log.alt_entity);

        if (!log.contradiction) {
            log.rejection = "no_contradiction";
        } else if (!log.alt_not_in_question) {
            log.rejection = "alt_in_question";
        } else if (text::contains_normalized(ma, log.alt_entity)) {
            log.rejection = "alt_in_ma";
        }
        const bool accepted = log.rejection.empty();
        pair.attempts.push_back(log);
        if (!accepted) continue;

        pair.cma = log.candidate;
        pair.alt_entity = log.alt_entity;
        pair.checks.contradiction = true;
        pair.checks.alt_not_in_question = true;
        return conflict_filter(std::move(pair), answers);
    }
    pair.note = "no valid CMA after " + std::to_string(opts.max_attempts) + " attempts";
    return pair;
}

ConflictPair ingested_conflict(const QuestionRecord& q, const AnswerSet& answers) {
    ConflictPair pair;
    pair.question_id = q.id;
    pair.status = ConflictStatus::Excluded;
    if (!q.ma || !q.cma) {
        pair.note = "missing ingested MA/CMA";
        return pair;
    }
    pair.ma = *q.ma;
    pair.cma = *q.cma;
    if (q.alt_entity && !q.alt_entity->empty()) {
        pair.alt_entity = *q.alt_entity;
    } else {
        try {
            pair.alt_entity = identify_alt_entity(pair.ma, pair.cma);
        } catch (const NoDifference&) {
            pair.note = "ingested CMA identical to MA";
            return pair;
        }
    }
    pair.checks.contradiction = true; // ingested pairs were validated upstream
    pair.checks.alt_not_in_question = !text::contains_normalized(q.text, pair.alt_entity);
    if (!pair.checks.alt_not_in_question) {
        pair.note = "alternative entity occurs in the question";
        return pair;
    }
    pair.note = "ingested";
    return conflict_filter(std::move(pair), answers);
}

} // namespace faith
