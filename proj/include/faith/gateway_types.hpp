#pragma once

#include "faith/templates.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace faith {

enum class ModelRole { Generator, Evaluee, Judge, Entailer };

std::string_view to_string(ModelRole r);
ModelRole parse_role(std::string_view s);

struct DecodeParams {
    double temperature = 0.0;
    int max_tokens = 256;
    std::optional<std::int64_t> seed;
};

/// Measurement roles decode greedily; the generator samples at 1.0.
DecodeParams default_decode(ModelRole role);

struct CompletionRequest {
    ModelRole role = ModelRole::Generator;
    Prompt prompt;
    DecodeParams decode;
};

enum class EntailmentLabel { Entailment, Neutral, Contradiction };
enum class JudgeLabel { Same, Contradicted };

std::string_view to_string(EntailmentLabel l);
std::string_view to_string(JudgeLabel l);

struct EntailmentVerdict {
    EntailmentLabel label;
    std::string raw;
};

struct JudgeVerdict {
    JudgeLabel label;
    std::string raw;
};

/// Keyword scan: earliest whole-word occurrence of "same"/"contradicted".
std::optional<JudgeLabel> parse_judge_label(std::string_view raw);

/// Keyword scan over "entailment"/"neutral"/"contradiction".
std::optional<EntailmentLabel> parse_entailment_label(std::string_view raw);

} // namespace faith
