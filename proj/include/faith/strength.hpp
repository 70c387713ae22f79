#pragma once

#include "faith/gateway.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace faith {

enum class Dataset { PopQA, NQ };
std::string_view to_string(Dataset d);
Dataset parse_dataset(std::string_view s);

/// A source question. For popQA, `template_id` is the relation type and
/// `template_text` its question template with "{}" for the subject.
struct QuestionRecord {
    std::string id;
    Dataset dataset = Dataset::NQ;
    std::string text;
    std::optional<std::string> template_id;
    std::optional<std::string> template_text;
    std::optional<std::string> gold_answer;
    std::optional<std::string> substitution_category;
    std::optional<std::string> ma;         ///< popQA: ingested memory answer
    std::optional<std::string> cma;        ///< popQA: ingested counter-memory answer
    std::optional<std::string> alt_entity; ///< popQA: known alternative entity, when given
    std::vector<std::string> paraphrases;
};

struct AnswerSet {
    std::string question_id;
    std::vector<std::string> answers; ///< paraphrase order
};

/// Partition of answer indices (0-based) into consistency clusters,
/// clusters in creation order, members in insertion order.
struct ClusterSet {
    std::string question_id;
    std::vector<std::vector<std::size_t>> clusters;

    std::vector<std::size_t> sizes() const;
    std::size_t n() const;
};

enum class StrengthBin { Low, MidLow, MidHigh, High };
std::string_view to_string(StrengthBin b);
StrengthBin parse_bin(std::string_view s);
inline constexpr std::array<StrengthBin, 4> kAllBins{StrengthBin::Low, StrengthBin::MidLow, StrengthBin::MidHigh,
                                                     StrengthBin::High};

struct StrengthScore {
    double value = 0.0;
    std::size_t n = 0;
    std::optional<StrengthBin> bin; ///< empty when value < -2 (only possible for n >= 8)
};

// -- paraphrasing -----------------------------------------------------------

struct ParaphraseOptions {
    std::size_t n = 7;
    int max_regen = 5;
    std::int64_t seed = 0;
};

struct ParaphraseOutcome {
    std::vector<std::string> paraphrases;
    int regenerations = 0; ///< rejected candidates across all slots
};

/// Pull candidate paraphrases out of a generator reply: one per line, list
/// markers ("1.", "2)", "-", "*") and wrapping quotes removed, header lines
/// ending in ':' dropped.
std::vector<std::string> parse_paraphrase_list(std::string_view reply);

/// Fill `opts.n` slots with paraphrases of `original`, each judged Same by
/// the equivalence judge. A rejected slot is refilled individually; once a
/// slot has been rejected more than max_regen times ExcludedQuestion is
/// thrown. `accept` adds an extra structural check (used for popQA
/// templates, which must keep their subject slot).
ParaphraseOutcome paraphrase_text(Gateway& gw, std::string_view original, const ParaphraseOptions& opts,
                                  const std::function<bool(const std::string&)>& accept = {});

/// Paraphrase a question record in place (NQ: the question itself).
ParaphraseOutcome generate_paraphrases(Gateway& gw, QuestionRecord& q, const ParaphraseOptions& opts);

/// popQA: subject of `question` under `template_text` ("{}" slot), if the
/// question instantiates the template.
std::optional<std::string> template_subject(std::string_view template_text, std::string_view question);
std::string instantiate_template(std::string_view template_text, std::string_view subject);

// -- answering and clustering -----------------------------------------------

/// Closed-book Evaluee answer for every paraphrase, in order. A slot whose
/// call fails after retries raises ExcludedQuestion.
AnswerSet collect_answers(Gateway& gw, const QuestionRecord& q);

using ConsistencyJudge = std::function<JudgeLabel(std::string_view question, std::string_view earlier,
                                                  std::string_view candidate)>;

/// Incremental clustering: answer i joins the first cluster (creation order)
/// holding a member judged Same with it; otherwise it opens a new cluster.
ClusterSet cluster_answers(const AnswerSet& a, std::string_view question, const ConsistencyJudge& judge);

/// Same, judged through the gateway's answer-consistency prompt.
ClusterSet cluster_answers(Gateway& gw, const AnswerSet& a, std::string_view question);

// -- scoring ----------------------------------------------------------------

/// Negative entropy of the cluster-size distribution, natural log.
/// Throws InvalidPartition for empty or zero-sized input.
StrengthScore memory_strength(std::span<const std::size_t> sizes);
StrengthScore memory_strength(const ClusterSet& c);

/// low [-2,-1], mid_low (-1,-0.5], mid_high (-0.5,-0.25], high (-0.25,0].
StrengthBin assign_bin(double value);

/// Throws InvalidPartition unless `c` is a disjoint, complete cover of 0..n-1.
void validate_partition(const ClusterSet& c, std::size_t n);

/// Eight equal-width bins over [-2, 0]; values outside are clamped to the
/// end bins.
std::array<std::size_t, 8> strength_histogram(std::span<const double> values);

} // namespace faith
