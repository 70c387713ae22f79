#include "faith/templates.hpp"

#include "faith/error.hpp"
#include "faith/text.hpp"

#include <array>

namespace faith {

namespace {

const std::array<PromptTemplate, 8>& registry() {
    static const std::array<PromptTemplate, 8> kTemplates{{
        {TemplateId::QuestionParaphrase, "question_paraphrase",
         "Generate 7 meaningful paraphrases for the following question: [Question]. Read the question carefully.\n"
         "Paraphrases:",
         {"[Question]"}},
        {TemplateId::QuestionEquivalence, "question_equivalence",
         "Determine whether the paraphrased question describes the same thing as the original question, and give "
         "\"Contradicted\" if they are not the same, otherwise give \"Same\" as the result.\n"
         "Q1: [Paraphrased Q1]\n"
         "Q2: [Paraphrased Q2]\n"
         "Keep the answer short and concise.",
         {"[Paraphrased Q1]", "[Paraphrased Q2]"}},
        {TemplateId::AnswerConsistency, "answer_consistency",
         "Determine whether the answer 'A1' is 'Contradicted' or 'Same' with the answer 'A2' for the question 'Q'. "
         "You need to check whether the two answers exactly have the same answer to the question. The answer could "
         "be person, name, place, time, number, genre, occupation, sport, entity, digit, or arithmetical results. If "
         "the two answers are the same, give \"Same\", otherwise give \"Contradicted\" as the result.\n"
         "Q: [question]\n"
         "A1: [LLM answer 1]\n"
         "A2: [LLM answer 2]\n"
         "Keep the answer short and concise.",
         {"[question]", "[LLM answer 1]", "[LLM answer 2]"}},
        {TemplateId::ClosedBookQA, "closed_book_qa",
         "Answer the question with one sentence with object and subject only. Give a statement that is most likely "
         "to be true directly.\n"
         "\n"
         "Question:\n"
         "[Question]\n"
         "Answer:",
         {"[Question]"}},
        {TemplateId::ChangeMaToCma, "change_ma_to_cma",
         "Context:\n"
         "[CMA]\n"
         "Change the [entity type] part of the context. When multiple parts need to be changed, only choose one part "
         "to change.\n"
         "Answer:",
         {"[CMA]", "[entity type]"}},
        {TemplateId::DirectEvidence, "direct_evidence",
         "Please paraphrase the following sentence by changing the terms, order, and phrases, but keep the meaning "
         "the same.\n"
         "\n"
         "Sentence: [CMA]",
         {"[CMA]"}},
        {TemplateId::IndirectEvidence, "indirect_evidence",
         "Given a claim, please write a short piece of detailed evidence to support it. Please ignore the correctness "
         "of the claim. You can make up fake content and supporting evidence but it should be as realistic as "
         "possible.\n"
         "Claim:\n"
         "[counter memory answer]\n"
         "Evidence:\n"
         "Give the answer in [2 or 3] sentences directly.",
         {"[counter memory answer]", "[2 or 3]"}},
        {TemplateId::EvaluateWithEvidence, "evaluate_with_evidence",
         "According to the given information, choose the best choice from the following options.\n"
         "Information: [evidence]\n"
         "Question: [question]\n"
         "Option:\n"
         "A: [option 1]\n"
         "B: [option 2]\n"
         "...\n"
         "Answer:",
         {"[evidence]", "[question]", "[option 1]", "[option 2]"}},
    }};
    return kTemplates;
}

constexpr std::string_view kOptionBlock = "A: [option 1]\nB: [option 2]\n...\n";

std::string substitute(std::string_view text, const std::vector<std::string_view>& placeholders,
                       const std::map<std::string, std::string>& fields, std::string_view name) {
    // Single left-to-right pass so substituted values are never rescanned.
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t best = std::string_view::npos;
        std::string_view hit;
        for (auto ph : placeholders) {
            const auto at = text.find(ph, pos);
            if (at != std::string_view::npos && (best == std::string_view::npos || at < best)) {
                best = at;
                hit = ph;
            }
        }
        if (best == std::string_view::npos) {
            out.append(text.substr(pos));
            break;
        }
        out.append(text.substr(pos, best - pos));
        auto it = fields.find(std::string(hit));
        if (it == fields.end())
            throw TemplateUnfilled("template '" + std::string(name) + "' missing value for " + std::string(hit));
        out.append(it->second);
        pos = best + hit.size();
    }
    return out;
}

} // namespace

const PromptTemplate& prompt_template(TemplateId id) {
    return registry()[static_cast<std::size_t>(id) - 1];
}

std::span<const PromptTemplate> all_templates() { return registry(); }

Prompt render(TemplateId id, const std::map<std::string, std::string>& fields) {
    const auto& tpl = prompt_template(id);
    Prompt p;
    p.template_name = std::string(tpl.name);
    p.text = substitute(tpl.text, tpl.placeholders, fields, tpl.name);
    p.fields = fields;
    return p;
}

Prompt render_evaluation(std::string_view evidence, std::string_view question,
                         std::span<const std::string> option_texts) {
    const auto& tpl = prompt_template(TemplateId::EvaluateWithEvidence);
    std::string block;
    std::map<std::string, std::string> fields{{"[evidence]", std::string(evidence)},
                                              {"[question]", std::string(question)}};
    for (std::size_t i = 0; i < option_texts.size(); ++i) {
        const char letter = static_cast<char>('A' + i);
        block += std::string(1, letter) + ": " + option_texts[i] + "\n";
        fields["[option " + std::to_string(i + 1) + "]"] = option_texts[i];
    }
    std::string body(tpl.text);
    const auto at = body.find(kOptionBlock);
    body.replace(at, kOptionBlock.size(), "[options]\n");

    Prompt p;
    p.template_name = std::string(tpl.name);
    if (!block.empty()) block.pop_back();
    p.text = substitute(body, {"[evidence]", "[question]", "[options]"},
                        {{"[evidence]", std::string(evidence)},
                         {"[question]", std::string(question)},
                         {"[options]", block}},
                        tpl.name);
    p.fields = std::move(fields);
    return p;
}

Prompt raw_prompt(std::string_view name, std::string text, std::map<std::string, std::string> fields) {
    Prompt p;
    p.template_name = std::string(name);
    p.text = std::move(text);
    p.fields = std::move(fields);
    return p;
}

void ensure_filled(std::string_view template_name, std::string_view text) {
    auto check = [&](const PromptTemplate& tpl) {
        for (auto ph : tpl.placeholders) {
            if (text.find(ph) != std::string_view::npos)
                throw TemplateUnfilled("prompt still contains placeholder " + std::string(ph));
        }
    };
    for (const auto& tpl : registry()) {
        if (tpl.name == template_name) {
            check(tpl);
            return;
        }
    }
    for (const auto& tpl : registry()) check(tpl);
}

} // namespace faith
