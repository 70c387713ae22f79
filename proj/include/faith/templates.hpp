#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace faith {

/// The prompt set used throughout the pipeline, numbered in pipeline order.
enum class TemplateId {
    QuestionParaphrase = 1,
    QuestionEquivalence = 2,
    AnswerConsistency = 3,
    ClosedBookQA = 4,
    ChangeMaToCma = 5,
    DirectEvidence = 6,
    IndirectEvidence = 7,
    EvaluateWithEvidence = 8,
};

struct PromptTemplate {
    TemplateId id;
    std::string_view name;
    std::string_view text;
    std::vector<std::string_view> placeholders;
};

/// Bumped whenever any template text changes; part of every cache key.
inline constexpr std::string_view kTemplateVersion = "prompts-v1";

const PromptTemplate& prompt_template(TemplateId id);
std::span<const PromptTemplate> all_templates();

/// A fully rendered prompt plus the values that went into it. Mock
/// backends read `fields`; real backends only see `text`.
struct Prompt {
    std::string template_name;
    std::string template_version{kTemplateVersion};
    std::string text;
    std::map<std::string, std::string> fields;
};

/// Substitute every placeholder of `id` from `fields` (keyed by the
/// placeholder token, e.g. "[Question]"). Missing keys throw
/// TemplateUnfilled.
Prompt render(TemplateId id, const std::map<std::string, std::string>& fields);

/// Evaluation prompt: the option block "A: [option 1] / B: [option 2] / ..."
/// expands to one "X: text" line per option.
Prompt render_evaluation(std::string_view evidence, std::string_view question,
                         std::span<const std::string> option_texts);

/// Free-form prompt that does not come from the table (re-asks, entailment
/// pairs for classifier endpoints).
Prompt raw_prompt(std::string_view name, std::string text,
                  std::map<std::string, std::string> fields = {});

/// Throws TemplateUnfilled if `text` still contains a placeholder token of
/// the named template (or of any template when the name is unknown).
void ensure_filled(std::string_view template_name, std::string_view text);

} // namespace faith
