#include "faith/evidence.hpp"

#include "faith/digest.hpp"
#include "faith/error.hpp"
#include "faith/text.hpp"

#include <array>
#include <cctype>
#include <set>

namespace faith {

std::string_view to_string(EvidenceKind k) {
    switch (k) {
    case EvidenceKind::Direct: return "direct";
    case EvidenceKind::DirectPlusParaphrase: return "direct+paraphrase";
    case EvidenceKind::Indirect: return "indirect";
    case EvidenceKind::DirectPlusIndirect: return "direct+indirect";
    }
    return "?";
}

EvidenceKind parse_evidence_kind(std::string_view s) {
    for (auto k : {EvidenceKind::Direct, EvidenceKind::DirectPlusParaphrase, EvidenceKind::Indirect,
                   EvidenceKind::DirectPlusIndirect})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown evidence kind: " + std::string(s));
}

bool EvidenceStyle::valid() const {
    if (kind == EvidenceKind::Direct) return sentences >= 1 && sentences <= 3;
    return sentences == 2 || sentences == 3;
}

std::string EvidenceStyle::label() const { return std::string(to_string(kind)) + "/" + std::to_string(sentences); }

const std::vector<EvidenceStyle>& all_styles() {
    static const std::vector<EvidenceStyle> styles{
        {EvidenceKind::Direct, 1},
        {EvidenceKind::Direct, 2},
        {EvidenceKind::Direct, 3},
        {EvidenceKind::DirectPlusParaphrase, 2},
        {EvidenceKind::DirectPlusParaphrase, 3},
        {EvidenceKind::Indirect, 2},
        {EvidenceKind::Indirect, 3},
        {EvidenceKind::DirectPlusIndirect, 2},
        {EvidenceKind::DirectPlusIndirect, 3},
    };
    return styles;
}

EvidenceStyle parse_style(std::string_view label) {
    const auto slash = label.find('/');
    if (slash == std::string_view::npos) throw std::invalid_argument("style needs kind/sentences: " + std::string(label));
    EvidenceStyle s{parse_evidence_kind(label.substr(0, slash)), std::stoi(std::string(label.substr(slash + 1)))};
    if (!s.valid()) throw std::invalid_argument("invalid sentence count for style: " + std::string(label));
    return s;
}

const std::vector<StyleVariant>& evaluation_variants() {
    static const std::vector<StyleVariant> variants{
        {1, {EvidenceKind::Direct, 1}},
        {1, {EvidenceKind::Direct, 2}},
        {1, {EvidenceKind::Direct, 3}},
        {1, {EvidenceKind::DirectPlusParaphrase, 2}},
        {1, {EvidenceKind::DirectPlusParaphrase, 3}},
        {2, {EvidenceKind::Direct, 1}},
        {2, {EvidenceKind::Indirect, 2}},
        {2, {EvidenceKind::Indirect, 3}},
        {2, {EvidenceKind::DirectPlusIndirect, 2}},
        {2, {EvidenceKind::DirectPlusIndirect, 3}},
    };
    return variants;
}

int style_group(EvidenceKind k) {
    return (k == EvidenceKind::Direct || k == EvidenceKind::DirectPlusParaphrase) ? 1 : 2;
}

// ---------------------------------------------------------------------------

namespace {

bool is_abbreviation(std::string_view word) {
    static const std::set<std::string> kAbbrev{
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt", "vs", "etc", "inc", "ltd", "co", "corp",
        "no", "gen", "col", "lt", "sgt", "capt", "rev", "hon", "gov", "sen", "rep", "e.g", "i.e", "u.s",
        "u.k", "jan", "feb", "mar", "apr", "aug", "sept", "sep", "oct", "nov", "dec", "approx", "est", "ft",
    };
    return kAbbrev.contains(text::to_lower(word));
}

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// Word immediately before position `dot` (exclusive), without leading
// punctuation.
std::string_view word_before(std::string_view s, std::size_t dot) {
    std::size_t b = dot;
    while (b > 0 && !std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    auto w = s.substr(b, dot - b);
    while (!w.empty() && !std::isalnum(static_cast<unsigned char>(w.front()))) w.remove_prefix(1);
    return w;
}

// Next whitespace-delimited token starting at or after `pos`.
std::string_view token_after(std::string_view s, std::size_t pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    std::size_t e = pos;
    while (e < s.size() && !std::isspace(static_cast<unsigned char>(s[e]))) ++e;
    return s.substr(pos, e - pos);
}

bool is_initial_token(std::string_view t) {
    return t.size() == 2 && std::isupper(static_cast<unsigned char>(t[0])) && t[1] == '.';
}

bool is_capitalized_word(std::string_view t) {
    std::size_t letters = 0;
    for (char c : t) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            ++letters;
        else
            break;
    }
    return letters >= 2 && std::isupper(static_cast<unsigned char>(t[0]));
}

} // namespace

std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t end = i + 1;
        while (end < s.size() && (s[end] == '.' || s[end] == '!' || s[end] == '?')) ++end;
        while (end < s.size() && is_closer(s[end])) ++end;
        const bool boundary = end >= s.size() || std::isspace(static_cast<unsigned char>(s[end]));
        bool terminal = boundary;
        if (terminal && c == '.' && end == i + 1) {
            const auto word = word_before(s, i);
            if (is_abbreviation(word)) {
                terminal = false;
            } else if (word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0]))) {
                const auto next = token_after(s, end);
                if (is_initial_token(next) || is_capitalized_word(next)) terminal = false;
            }
        }
        if (terminal) {
            auto sentence = text::trim(s.substr(start, end - start));
            if (!sentence.empty()) out.push_back(std::move(sentence));
            start = end;
        }
        i = end;
    }
    auto tail = text::trim(s.substr(std::min(start, s.size())));
    if (!tail.empty()) out.push_back(std::move(tail));
    return out;
}

int count_sentences(std::string_view s) { return static_cast<int>(split_sentences(s).size()); }

// ---------------------------------------------------------------------------

namespace {

void record(std::vector<GateRecord>* ledger, std::string_view target, int attempt, std::string check,
            std::string verdict, bool passed) {
    if (ledger) ledger->push_back({std::string(target), attempt, std::move(check), std::move(verdict), passed});
}

std::string clean_generation(std::string_view reply) {
    // Collapse line breaks: evidence is a single passage.
    std::string t = text::trim(reply);
    for (std::string_view prefix : {"Evidence:", "Paraphrase:", "Sentence:", "Answer:"})
        if (text::starts_with_ci(t, prefix)) t = text::trim(t.substr(prefix.size()));
    std::string out;
    for (const auto& w : text::split_whitespace(t)) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    if (!out.empty()) {
        std::size_t at = out.size();
        while (at > 0 && is_closer(out[at - 1])) --at;
        const char last = at > 0 ? out[at - 1] : '.';
        if (last != '.' && last != '!' && last != '?') out.push_back('.');
    }
    return out;
}

} // namespace

std::string generate_direct(Gateway& gw, const std::string& cma, const EvidenceOptions& opts,
                            std::vector<GateRecord>* ledger, std::string_view target,
                            const std::vector<std::string>& avoid) {
    if (text::trim(cma).empty()) throw std::invalid_argument("empty CMA");
    std::set<std::string> avoided;
    for (const auto& a : avoid) avoided.insert(text::normalize(a));

    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        const auto seed = derive_seed(opts.seed, std::string(target) + "#" + std::to_string(attempt));
        const auto cand = clean_generation(gw.call(ModelRole::Generator, TemplateId::DirectEvidence, {{"[CMA]", cma}}, seed));
        if (cand.empty()) {
            record(ledger, target, attempt, "non_empty", "fail", false);
            continue;
        }
        if (avoided.contains(text::normalize(cand))) {
            record(ledger, target, attempt, "distinct", "fail", false);
            continue;
        }
        const int sentences = count_sentences(cand);
        // also require that the sentence stays separate when repeated
        const bool one = sentences == 1 && count_sentences(cand + " " + cand) == 2;
        record(ledger, target, attempt, "sentences==1", std::to_string(sentences), one);
        if (!one) continue;
        const auto fwd = gw.entail(cma, cand).label;
        const bool fwd_ok = fwd == EntailmentLabel::Entailment;
        record(ledger, target, attempt, "entail(cma,evidence)", std::string(to_string(fwd)), fwd_ok);
        if (!fwd_ok) continue;
        const auto back = gw.entail(cand, cma).label;
        const bool back_ok = back == EntailmentLabel::Entailment;
        record(ledger, target, attempt, "entail(evidence,cma)", std::string(to_string(back)), back_ok);
        if (back_ok) return cand;
    }
    throw ExcludedQuestion("no direct evidence passed the gates after " + std::to_string(opts.max_attempts) +
                           " attempts");
}

std::string generate_indirect(Gateway& gw, const std::string& cma, const std::string& ma, int k,
                              const EvidenceOptions& opts, std::vector<GateRecord>* ledger) {
    if (k != 2 && k != 3) throw std::invalid_argument("indirect evidence length must be 2 or 3");
    const std::string target = "indirect_" + std::to_string(k);
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        const auto seed = derive_seed(opts.seed, target + "#" + std::to_string(attempt));
        const auto cand = clean_generation(gw.call(ModelRole::Generator, TemplateId::IndirectEvidence,
                                                   {{"[counter memory answer]", cma}, {"[2 or 3]", std::to_string(k)}},
                                                   seed));
        const int sentences = count_sentences(cand);
        const bool len_ok = sentences == k;
        record(ledger, target, attempt, "sentences==" + std::to_string(k), std::to_string(sentences), len_ok);
        if (!len_ok) continue;
        const auto supports = gw.entail(cand, cma).label;
        const bool sup_ok = supports == EntailmentLabel::Entailment;
        record(ledger, target, attempt, "entail(evidence,cma)", std::string(to_string(supports)), sup_ok);
        if (!sup_ok) continue;
        const auto vs_ma = gw.entail(cand, ma).label;
        const bool ma_ok = vs_ma != EntailmentLabel::Entailment;
        record(ledger, target, attempt, "not entail(evidence,ma)", std::string(to_string(vs_ma)), ma_ok);
        if (ma_ok) return cand;
    }
    throw ExcludedQuestion(target + " failed the gates after " + std::to_string(opts.max_attempts) + " attempts");
}

EvidenceBundle build_bundle(Gateway& gw, const std::string& question_id, const std::string& cma,
                            const std::string& ma, const EvidenceOptions& opts) {
    EvidenceBundle b;
    b.question_id = question_id;
    EvidenceOptions o = opts;
    o.seed = derive_seed(opts.seed, question_id);

    b.direct = generate_direct(gw, cma, o, &b.gate_ledger, "direct");
    std::vector<std::string> avoid{b.direct};
    try {
        for (int p = 1; p <= 2; ++p) {
            auto para = generate_direct(gw, cma, o, &b.gate_ledger, "paraphrase" + std::to_string(p), avoid);
            avoid.push_back(para);
            b.direct_paraphrases.push_back(std::move(para));
        }
    } catch (const ExcludedQuestion&) {
        return b; // direct only: outside both groups
    }
    for (int k : {2, 3}) {
        try {
            auto ind = generate_indirect(gw, cma, ma, k, o, &b.gate_ledger);
            (k == 2 ? b.indirect_2 : b.indirect_3) = std::move(ind);
        } catch (const ExcludedQuestion&) {
            // recorded in the ledger; the question just leaves group 2
        }
    }
    return b;
}

std::string compose(const EvidenceStyle& style, const EvidenceBundle& bundle) {
    if (!style.valid()) throw std::invalid_argument("invalid evidence style " + style.label());
    auto need = [&](bool ok, std::string_view what) {
        if (!ok) throw MissingComponent("bundle " + bundle.question_id + " lacks " + std::string(what) +
                                        " for style " + style.label());
    };
    std::vector<std::string> parts;
    switch (style.kind) {
    case EvidenceKind::Direct:
        need(!bundle.direct.empty(), "direct evidence");
        parts.assign(static_cast<std::size_t>(style.sentences), bundle.direct);
        break;
    case EvidenceKind::DirectPlusParaphrase:
        need(!bundle.direct.empty(), "direct evidence");
        need(bundle.direct_paraphrases.size() >= static_cast<std::size_t>(style.sentences - 1), "CMA paraphrases");
        parts.push_back(bundle.direct);
        for (int i = 0; i < style.sentences - 1; ++i) parts.push_back(bundle.direct_paraphrases[i]);
        break;
    case EvidenceKind::Indirect: {
        const auto& ind = style.sentences == 2 ? bundle.indirect_2 : bundle.indirect_3;
        need(ind.has_value(), "indirect_" + std::to_string(style.sentences));
        parts.push_back(*ind);
        break;
    }
    case EvidenceKind::DirectPlusIndirect: {
        need(!bundle.direct.empty(), "direct evidence");
        need(bundle.indirect_2.has_value(), "indirect_2");
        const auto sentences = split_sentences(*bundle.indirect_2);
        need(sentences.size() >= static_cast<std::size_t>(style.sentences - 1), "indirect_2 sentences");
        parts.push_back(bundle.direct);
        for (int i = 0; i < style.sentences - 1; ++i) parts.push_back(sentences[i]);
        break;
    }
    }
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out.push_back(' ');
        out += text::trim(p);
    }
    return out;
}

} // namespace faith
