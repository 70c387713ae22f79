#pragma once

#include "faith/conflict.hpp"
#include "faith/evidence.hpp"
#include "faith/gateway.hpp"
#include "faith/strength.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace faith {

enum class OptionOrder { MAFirst, CMAFirst };
enum class OptionTag { MA, CMA, UCT };

std::string_view to_string(OptionOrder o);
OptionOrder parse_order(std::string_view s);
std::string_view to_string(OptionTag t);
OptionTag parse_tag(std::string_view s);

inline constexpr std::string_view kUncertainOption = "Uncertain.";

struct McOption {
    char letter = 'A';
    std::string text;
    OptionTag tag = OptionTag::UCT;
};

/// Multiple-choice instance: MA and CMA in the requested order, the
/// uncertain option always last.
struct MCInstance {
    std::string question_id;
    std::string question;
    std::string evidence;
    EvidenceStyle style;
    int group = 1;
    OptionOrder order = OptionOrder::MAFirst;
    std::vector<McOption> options;
    Prompt prompt;

    const McOption& option(char letter) const;
    const McOption& tagged(OptionTag tag) const;
};

MCInstance build_mc(const std::string& question_id, std::string_view question, std::string_view evidence,
                    const ConflictPair& conflict, OptionOrder order, EvidenceStyle style = {}, int group = 1);

enum class ParsePath { LetterPrefix, OptionTextMatch, RepromptedThenUCT };
std::string_view to_string(ParsePath p);
ParsePath parse_parse_path(std::string_view s);

struct ParsedChoice {
    OptionTag outcome;
    ParsePath path;
};

/// Letter first (leading "A", "A:", "A.", "A)", "(A)", or "answer is A" /
/// "option A"), then a unique option-text match. nullopt when neither works.
std::optional<ParsedChoice> parse_choice(const MCInstance& inst, std::string_view raw);

struct EvalRecord {
    std::string question_id;
    std::string dataset;
    std::string model;
    EvidenceStyle style;
    int group = 1;
    OptionOrder order = OptionOrder::MAFirst;
    OptionTag outcome = OptionTag::UCT;
    std::string raw_response;
    std::string reprompt_response;
    ParsePath parse_path = ParsePath::LetterPrefix;
    bool reprompted = false;
};

/// Ask the evaluee; on an unparseable reply re-prompt once for a single
/// letter, and fall back to UCT if that fails too.
EvalRecord evaluate_instance(Gateway& gw, const MCInstance& inst, std::string_view dataset, std::string_view model);

struct Counts {
    std::size_t f_m = 0;
    std::size_t f_c = 0;
    std::size_t f_u = 0;
    std::size_t total() const { return f_m + f_c + f_u; }
};

struct Ratios {
    double r_m = 0.0;
    double r_c = 0.0;
    double r_u = 0.0;
};

/// Group identity; "*" marks a dimension the report aggregates over.
struct GroupKeys {
    std::string dataset = "*";
    std::string model = "*";
    std::string evidence_group = "*";
    std::string style = "*";
    std::string sentences = "*";
    std::string order = "*";
    std::string strength_bin = "*";
    std::string entity_type = "*";
};

struct MetricsReport {
    GroupKeys keys;
    Counts counts;
    Ratios ratios;
    std::optional<double> avg_strength;
};

Ratios ratios_from_counts(const Counts& c);

/// Counts and ratios over one group of records; avg_strength over the
/// records whose question has a strength entry. Throws EmptyGroup.
MetricsReport compute_ratios(const std::vector<EvalRecord>& records,
                             const std::map<std::string, StrengthScore>* strengths = nullptr);

/// Known grouping dimensions: dataset, model, group, style, sentences,
/// order, strength_bin, entity_type.
const std::vector<std::string>& known_dimensions();

/// One report per distinct combination of `dims`, in a stable order.
/// `question_types` feeds the entity_type dimension (PER/LOC/TIM/OTHER).
std::vector<MetricsReport> group_and_report(const std::vector<EvalRecord>& records,
                                            const std::map<std::string, StrengthScore>& strengths,
                                            const std::map<std::string, QuestionType>& question_types,
                                            const std::vector<std::string>& dims);

} // namespace faith
