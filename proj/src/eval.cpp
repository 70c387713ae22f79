#include "faith/eval.hpp"

#include "faith/error.hpp"
#include "faith/text.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace faith {

std::string_view to_string(OptionOrder o) { return o == OptionOrder::MAFirst ? "ma-first" : "cma-first"; }

OptionOrder parse_order(std::string_view s) {
    const auto l = text::to_lower(s);
    if (l == "ma-first" || l == "mafirst" || l == "ma_first") return OptionOrder::MAFirst;
    if (l == "cma-first" || l == "cmafirst" || l == "cma_first") return OptionOrder::CMAFirst;
    throw std::invalid_argument("unknown option order: " + std::string(s));
}

std::string_view to_string(OptionTag t) {
    switch (t) {
    case OptionTag::MA: return "MA";
    case OptionTag::CMA: return "CMA";
    case OptionTag::UCT: return "UCT";
    }
    return "?";
}

OptionTag parse_tag(std::string_view s) {
    if (s == "MA") return OptionTag::MA;
    if (s == "CMA") return OptionTag::CMA;
    if (s == "UCT") return OptionTag::UCT;
    throw std::invalid_argument("unknown option tag: " + std::string(s));
}

std::string_view to_string(ParsePath p) {
    switch (p) {
    case ParsePath::LetterPrefix: return "letter_prefix";
    case ParsePath::OptionTextMatch: return "option_text_match";
    case ParsePath::RepromptedThenUCT: return "reprompted_then_uct";
    }
    return "?";
}

ParsePath parse_parse_path(std::string_view s) {
    for (auto p : {ParsePath::LetterPrefix, ParsePath::OptionTextMatch, ParsePath::RepromptedThenUCT})
        if (to_string(p) == s) return p;
    throw std::invalid_argument("unknown parse path: " + std::string(s));
}

const McOption& MCInstance::option(char letter) const {
    for (const auto& o : options)
        if (o.letter == letter) return o;
    throw std::out_of_range(std::string("no option ") + letter);
}

const McOption& MCInstance::tagged(OptionTag tag) const {
    for (const auto& o : options)
        if (o.tag == tag) return o;
    throw std::out_of_range("no option tagged " + std::string(to_string(tag)));
}

MCInstance build_mc(const std::string& question_id, std::string_view question, std::string_view evidence,
                    const ConflictPair& conflict, OptionOrder order, EvidenceStyle style, int group) {
    if (text::trim(evidence).empty()) throw MissingEvidence("no evidence for question " + question_id);
    MCInstance inst;
    inst.question_id = question_id;
    inst.question = std::string(question);
    inst.evidence = std::string(evidence);
    inst.style = style;
    inst.group = group;
    inst.order = order;
    const McOption ma{'A', conflict.ma, OptionTag::MA};
    const McOption cma{'A', conflict.cma, OptionTag::CMA};
    inst.options = order == OptionOrder::MAFirst ? std::vector<McOption>{ma, cma} : std::vector<McOption>{cma, ma};
    inst.options.push_back({'A', std::string(kUncertainOption), OptionTag::UCT});
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < inst.options.size(); ++i) {
        inst.options[i].letter = static_cast<char>('A' + i);
        texts.push_back(inst.options[i].text);
    }
    inst.prompt = render_evaluation(evidence, question, texts);
    return inst;
}

namespace {

std::optional<char> letter_choice(const MCInstance& inst, std::string_view raw) {
    const char last = static_cast<char>('A' + inst.options.size() - 1);
    auto valid = [&](char c) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return c >= 'A' && c <= last ? std::optional<char>(c) : std::nullopt;
    };
    std::string t = text::trim(raw);
    for (std::string_view prefix : {"answer:", "option:", "option", "choice:"}) {
        if (text::starts_with_ci(t, prefix)) {
            t = text::trim(std::string_view(t).substr(prefix.size()));
            break;
        }
    }
    if (!t.empty()) {
        std::size_t i = 0;
        const bool paren = t[0] == '(';
        if (paren) ++i;
        if (i < t.size()) {
            if (auto c = valid(t[i])) {
                const std::size_t after = i + 1;
                if (after == t.size()) return c;
                const char d = t[after];
                if (paren ? d == ')' : (d == ':' || d == '.' || d == ')' || d == ',')) return c;
            }
        }
    }
    // letter must be uppercase here so "the answer is a city" does not read as A
    static const std::regex kPhrase(
        R"((?:[Aa]nswer|[Oo]ption|[Cc]hoice)\s*(?:is|would be|:)?\s*:?\s*\(?([A-Z])\)?(?![A-Za-z]))");
    std::smatch m;
    const std::string s(raw);
    if (std::regex_search(s, m, kPhrase)) return valid(m[1].str()[0]);
    return std::nullopt;
}

std::optional<OptionTag> text_choice(const MCInstance& inst, std::string_view raw) {
    const auto hay = text::normalize(raw);
    std::optional<OptionTag> found;
    int hits = 0;
    for (const auto& o : inst.options) {
        const auto needle = text::normalize(text::strip_punct(o.text));
        if (!needle.empty() && hay.find(needle) != std::string::npos) {
            found = o.tag;
            ++hits;
        }
    }
    return hits == 1 ? found : std::nullopt;
}

} // namespace

std::optional<ParsedChoice> parse_choice(const MCInstance& inst, std::string_view raw) {
    if (auto letter = letter_choice(inst, raw)) return ParsedChoice{inst.option(*letter).tag, ParsePath::LetterPrefix};
    if (auto tag = text_choice(inst, raw)) return ParsedChoice{*tag, ParsePath::OptionTextMatch};
    return std::nullopt;
}

EvalRecord evaluate_instance(Gateway& gw, const MCInstance& inst, std::string_view dataset, std::string_view model) {
    EvalRecord rec;
    rec.question_id = inst.question_id;
    rec.dataset = std::string(dataset);
    rec.model = std::string(model);
    rec.style = inst.style;
    rec.group = inst.group;
    rec.order = inst.order;

    CompletionRequest req{ModelRole::Evaluee, inst.prompt, default_decode(ModelRole::Evaluee)};
    rec.raw_response = gw.complete(req);
    if (auto parsed = parse_choice(inst, rec.raw_response)) {
        rec.outcome = parsed->outcome;
        rec.parse_path = parsed->path;
        return rec;
    }

    rec.reprompted = true;
    std::string letters;
    for (const auto& o : inst.options) letters += std::string(letters.empty() ? "" : ", ") + o.letter;
    CompletionRequest again{ModelRole::Evaluee,
                            raw_prompt("evaluate_with_evidence_reprompt",
                                       inst.prompt.text + "\nRespond with a single letter (" + letters + ") only.",
                                       inst.prompt.fields),
                            default_decode(ModelRole::Evaluee)};
    rec.reprompt_response = gw.complete(again);
    if (auto parsed = parse_choice(inst, rec.reprompt_response)) {
        rec.outcome = parsed->outcome;
        rec.parse_path = parsed->path;
    } else {
        rec.outcome = OptionTag::UCT;
        rec.parse_path = ParsePath::RepromptedThenUCT;
    }
    return rec;
}

// ---------------------------------------------------------------------------

Ratios ratios_from_counts(const Counts& c) {
    const double total = static_cast<double>(c.total());
    if (c.total() == 0) throw EmptyGroup("no records in group");
    Ratios r;
    r.r_m = static_cast<double>(c.f_m) / total;
    r.r_c = static_cast<double>(c.f_c) / total;
    r.r_u = static_cast<double>(c.f_u) / total;
    return r;
}

MetricsReport compute_ratios(const std::vector<EvalRecord>& records,
                             const std::map<std::string, StrengthScore>* strengths) {
    if (records.empty()) throw EmptyGroup("no records in group");
    MetricsReport rep;
    double strength_sum = 0.0;
    std::size_t strength_n = 0;
    for (const auto& r : records) {
        switch (r.outcome) {
        case OptionTag::MA: ++rep.counts.f_m; break;
        case OptionTag::CMA: ++rep.counts.f_c; break;
        case OptionTag::UCT: ++rep.counts.f_u; break;
        }
        if (strengths) {
            auto it = strengths->find(r.question_id);
            if (it != strengths->end()) {
                strength_sum += it->second.value;
                ++strength_n;
            }
        }
    }
    rep.ratios = ratios_from_counts(rep.counts);
    if (strength_n > 0) rep.avg_strength = strength_sum / static_cast<double>(strength_n);
    return rep;
}

const std::vector<std::string>& known_dimensions() {
    static const std::vector<std::string> dims{"dataset", "model",        "group",      "style",
                                               "sentences", "order",      "strength_bin", "entity_type"};
    return dims;
}

namespace {

// (rank, label) so bins, styles and orders sort in their natural order.
using SortKey = std::vector<std::pair<int, std::string>>;

std::pair<int, std::string> dim_value(const std::string& dim, const EvalRecord& r,
                                      const std::map<std::string, StrengthScore>& strengths,
                                      const std::map<std::string, QuestionType>& types) {
    if (dim == "dataset") return {0, r.dataset};
    if (dim == "model") return {0, r.model};
    if (dim == "group") return {r.group, "group" + std::to_string(r.group)};
    if (dim == "style") return {static_cast<int>(r.style.kind), std::string(to_string(r.style.kind))};
    if (dim == "sentences") return {r.style.sentences, std::to_string(r.style.sentences)};
    if (dim == "order") return {static_cast<int>(r.order), std::string(to_string(r.order))};
    if (dim == "strength_bin") {
        auto it = strengths.find(r.question_id);
        if (it == strengths.end() || !it->second.bin) return {9, "none"};
        return {static_cast<int>(*it->second.bin), std::string(to_string(*it->second.bin))};
    }
    if (dim == "entity_type") {
        auto it = types.find(r.question_id);
        const std::string g(it == types.end() ? "OTHER" : entity_group(it->second));
        const int rank = g == "PER" ? 0 : g == "LOC" ? 1 : g == "TIM" ? 2 : 3;
        return {rank, g};
    }
    throw UnknownDimension("unknown report dimension: " + dim);
}

void assign_key(GroupKeys& k, const std::string& dim, const std::string& value) {
    if (dim == "dataset") k.dataset = value;
    else if (dim == "model") k.model = value;
    else if (dim == "group") k.evidence_group = value;
    else if (dim == "style") k.style = value;
    else if (dim == "sentences") k.sentences = value;
    else if (dim == "order") k.order = value;
    else if (dim == "strength_bin") k.strength_bin = value;
    else if (dim == "entity_type") k.entity_type = value;
}

} // namespace

std::vector<MetricsReport> group_and_report(const std::vector<EvalRecord>& records,
                                            const std::map<std::string, StrengthScore>& strengths,
                                            const std::map<std::string, QuestionType>& question_types,
                                            const std::vector<std::string>& dims) {
    for (const auto& d : dims)
        if (std::find(known_dimensions().begin(), known_dimensions().end(), d) == known_dimensions().end())
            throw UnknownDimension("unknown report dimension: " + d);

    std::map<SortKey, std::vector<EvalRecord>> groups;
    for (const auto& r : records) {
        SortKey key;
        for (const auto& d : dims) key.push_back(dim_value(d, r, strengths, question_types));
        groups[key].push_back(r);
    }
    std::vector<MetricsReport> out;
    for (const auto& [key, members] : groups) {
        auto rep = compute_ratios(members, &strengths);
        for (std::size_t i = 0; i < dims.size(); ++i) assign_key(rep.keys, dims[i], key[i].second);
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace faith
