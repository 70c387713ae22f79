#pragma once

#include "faith/gateway.hpp"

#include <optional>
#include <string>
#include <vector>

namespace faith {

enum class EvidenceKind { Direct, DirectPlusParaphrase, Indirect, DirectPlusIndirect };
std::string_view to_string(EvidenceKind k);
EvidenceKind parse_evidence_kind(std::string_view s);

/// Presentation style: kind plus the number of sentences it spans.
struct EvidenceStyle {
    EvidenceKind kind = EvidenceKind::Direct;
    int sentences = 1;

    bool valid() const;
    std::string label() const; ///< e.g. "direct+paraphrase/3"
    friend bool operator==(const EvidenceStyle&, const EvidenceStyle&) = default;
};

/// The nine distinct styles.
const std::vector<EvidenceStyle>& all_styles();
EvidenceStyle parse_style(std::string_view label);

/// A style as evaluated inside one comparison group. Direct/1 appears in
/// both groups as each group's baseline, giving ten evaluated variants.
struct StyleVariant {
    int group = 1;
    EvidenceStyle style;
};
const std::vector<StyleVariant>& evaluation_variants();

/// Which comparison group a style belongs to: 1 for Direct and
/// Direct+Paraphrase, 2 for Indirect and Direct+Indirect.
int style_group(EvidenceKind k);

struct GateRecord {
    std::string target;   ///< "direct", "paraphrase1", "indirect_2", ...
    int attempt = 0;
    std::string check;    ///< gate name
    std::string verdict;  ///< label or pass/fail
    bool passed = false;
};

struct EvidenceBundle {
    std::string question_id;
    std::string direct;
    std::vector<std::string> direct_paraphrases;
    std::optional<std::string> indirect_2;
    std::optional<std::string> indirect_3;
    std::vector<GateRecord> gate_ledger;

    bool in_group1() const { return !direct.empty() && direct_paraphrases.size() >= 2; }
    bool in_group2() const { return in_group1() && indirect_2 && indirect_3; }
};

/// Sentence splitter behind count_sentences. Terminators are . ! ? followed
/// by whitespace, a closing quote/bracket, or end of text. A '.' after a
/// listed abbreviation, or after a single capital letter followed by another
/// initial or a capitalized word, does not end a sentence. A trailing
/// fragment without a terminator is its own sentence.
std::vector<std::string> split_sentences(std::string_view text);
int count_sentences(std::string_view text);

struct EvidenceOptions {
    int max_attempts = 5;
    std::int64_t seed = 0;
};

/// CMA paraphrase that mutually entails the CMA and is a single sentence.
/// `avoid` lists texts the result must differ from (normalized). Throws
/// ExcludedQuestion after max_attempts.
std::string generate_direct(Gateway& gw, const std::string& cma, const EvidenceOptions& opts,
                            std::vector<GateRecord>* ledger = nullptr, std::string_view target = "direct",
                            const std::vector<std::string>& avoid = {});

/// k-sentence evidence (k in {2,3}) that entails the CMA and does not entail
/// the MA. Throws ExcludedQuestion after max_attempts.
std::string generate_indirect(Gateway& gw, const std::string& cma, const std::string& ma, int k,
                              const EvidenceOptions& opts, std::vector<GateRecord>* ledger = nullptr);

/// Direct evidence, two distinct CMA paraphrases, then both indirect
/// variants. Throws ExcludedQuestion if the direct evidence fails. When a
/// paraphrase fails the bundle keeps only the direct evidence; missing
/// indirect variants are left empty.
EvidenceBundle build_bundle(Gateway& gw, const std::string& question_id, const std::string& cma,
                            const std::string& ma, const EvidenceOptions& opts);

/// Assemble the evidence passage for `style`; sentences joined with one
/// space. Throws MissingComponent when the bundle lacks a needed part.
std::string compose(const EvidenceStyle& style, const EvidenceBundle& bundle);

} // namespace faith
