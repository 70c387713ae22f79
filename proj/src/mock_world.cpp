#include "faith/mock_world.hpp"

#include "faith/conflict.hpp"
#include "faith/digest.hpp"
#include "faith/error.hpp"
#include "faith/eval.hpp"
#include "faith/evidence.hpp"
#include "faith/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace faith {

namespace {

const std::array<std::string_view, 12> kPrefixes{
    "Can you tell me ", "Do you know ",    "I would like to know ", "Please tell me ",
    "Quick question: ", "Tell me, ",       "I wonder ",             "Could you say ",
    "Help me out: ",    "Any idea ",       "Let me ask: ",          "Out of curiosity, ",
};

const std::array<std::string_view, 6> kDirectLeads{
    "In fact: ", "It is well documented: ", "Records agree: ", "Put simply: ", "As sources state: ", "Notably: ",
};

const std::array<std::string_view, 5> kSupport{
    "Several independent sources report this.",
    "The record has been cited many times since.",
    "Historians regard the matter as settled.",
    "Contemporary accounts describe it in detail.",
    "Later reviews repeated the same finding.",
};

std::string lower_first(std::string_view q) {
    std::string s(q);
    if (s.size() >= 2 && std::isupper(static_cast<unsigned char>(s[0])) &&
        std::islower(static_cast<unsigned char>(s[1])))
        s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

std::string field(const CompletionRequest& req, const std::string& key) {
    auto it = req.prompt.fields.find(key);
    return it == req.prompt.fields.end() ? std::string{} : it->second;
}

std::string fields_blob(const CompletionRequest& req) {
    std::string blob = req.prompt.template_name;
    for (const auto& [k, v] : req.prompt.fields) blob += "\x1f" + k + "=" + v;
    if (req.decode.seed) blob += "\x1fseed=" + std::to_string(*req.decode.seed);
    return blob;
}

std::string answer_sentence(std::string_view entity) { return "The answer is " + std::string(entity) + "."; }

} // namespace

std::string question_stem(std::string_view question) {
    auto s = text::normalize(question);
    while (!s.empty() && std::ispunct(static_cast<unsigned char>(s.back()))) s.pop_back();
    return text::trim(s);
}

const std::vector<std::string>& MockWorld::pool(std::optional<EntityType> et) {
    static const std::vector<std::string> people{"Mark Lowry", "Ada Lovelace", "Carl Weber", "Nina Simone",
                                                 "Otto Hahn",  "Rosa Parks",   "Ivan Petrov", "Lena Ford",
                                                 "Hugo Brandt", "Maya Chen",   "Omar Haddad", "Tess Rowe"};
    static const std::vector<std::string> places{"Lyon",  "Paris", "Madrid", "Oslo",  "Cairo",  "Lima",
                                                 "Quebec", "Perth", "Dublin", "Nairobi", "Osaka", "Vienna"};
    static const std::vector<std::string> years{"1912", "1947", "1969", "1984", "1776", "2003",
                                                "1850", "1999", "1929", "1066", "1815", "1603"};
    static const std::vector<std::string> numbers{"12", "27", "45", "3", "150", "8", "64", "19", "230", "5", "91", "36"};
    static const std::vector<std::string> distances{"12 miles", "300 kilometers", "45 miles", "7 kilometers",
                                                    "220 miles", "18 kilometers", "90 miles", "1200 kilometers"};
    static const std::vector<std::string> ages{"34 years", "52 years", "19 years", "71 years",
                                               "28 years", "63 years", "45 years", "87 years"};
    static const std::vector<std::string> other{"Orion", "Kestrel", "Tundra", "Basalt", "Marigold", "Falcon",
                                                "Granite", "Juniper", "Solstice", "Harbor", "Cobalt", "Meridian"};
    if (!et) return other;
    switch (*et) {
    case EntityType::Time: return years;
    case EntityType::Location: return places;
    case EntityType::Number: return numbers;
    case EntityType::Distance: return distances;
    case EntityType::Age: return ages;
    default: return people;
    }
}

MockWorld::MockWorld(const std::vector<QuestionRecord>& questions, MockConfig cfg)
    : MockWorld(questions, cfg, Rates{}) {}

MockWorld::MockWorld(const std::vector<QuestionRecord>& questions, MockConfig cfg, Rates rates)
    : cfg_(cfg), rates_(rates) {
    static constexpr std::array<std::size_t, 4> kSizes{1, 2, 4, 7};
    for (const auto& q : questions) {
        const auto stem = question_stem(q.text);
        if (stem.empty() || find(stem)) continue;
        const auto& src = pool(entity_type_for(classify_question(q.text)));
        const std::size_t k = kSizes[hash("k", stem) % kSizes.size()];
        // k distinct entities from a hashed starting point
        const std::size_t start = hash("start", stem) % src.size();
        Entry e{stem, {}};
        for (std::size_t i = 0; i < k; ++i) e.entities.push_back(src[(start + i * 5) % src.size()]);
        entries_.push_back(std::move(e));
    }
}

void MockWorld::plant(const std::string& question, std::vector<std::string> entities) {
    if (entities.empty()) throw std::invalid_argument("plant needs at least one entity");
    const auto stem = question_stem(question);
    for (auto& e : entries_) {
        if (e.stem == stem) {
            e.entities = std::move(entities);
            return;
        }
    }
    entries_.push_back(Entry{stem, std::move(entities)});
}

const MockWorld::Entry* MockWorld::find(std::string_view text) const {
    const auto norm = text::normalize(text);
    const Entry* best = nullptr;
    for (const auto& e : entries_) {
        if (norm.find(e.stem) != std::string::npos && (!best || e.stem.size() > best->stem.size())) best = &e;
    }
    return best;
}

std::vector<std::string> MockWorld::planted(std::string_view text) const {
    const auto* e = find(text);
    return e ? e->entities : std::vector<std::string>{};
}

std::uint64_t MockWorld::hash(std::string_view purpose, std::string_view content) const {
    // FNV alone leaves the low bits poorly mixed for near-identical inputs,
    // and callers take them modulo small counts; finish with a 64-bit mixer
    std::uint64_t h = fnv1a64(std::to_string(cfg_.seed) + "\x1e" + std::string(purpose) + "\x1e" + std::string(content));
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

double MockWorld::unit(std::string_view purpose, std::string_view content) const {
    return static_cast<double>(hash(purpose, content) >> 11) * 0x1.0p-53;
}

// -- generator --------------------------------------------------------------

std::string MockWorld::generator(const CompletionRequest& req) const {
    const auto& name = req.prompt.template_name;
    const auto blob = fields_blob(req);

    if (name == "question_paraphrase") {
        const auto q = field(req, "[Question]");
        const std::size_t start = hash("para-start", blob) % kPrefixes.size();
        std::string reply = "Paraphrases:\n";
        for (std::size_t i = 0; i < 7; ++i) {
            std::string line;
            if (unit("para-bad#" + std::to_string(i), blob) < rates_.bad_paraphrase) {
                line = "What is the weather like today?";
            } else {
                line = std::string(kPrefixes[(start + i) % kPrefixes.size()]) + lower_first(q);
            }
            reply += std::to_string(i + 1) + ". " + line + "\n";
        }
        return reply;
    }

    if (name == "change_ma_to_cma") {
        const auto context = field(req, "[CMA]");
        if (unit("cma-unchanged", blob) < rates_.cma_unchanged) return "Answer: " + context;
        // locate the longest pool entity inside the context
        std::string found;
        std::optional<EntityType> found_type;
        const std::array<std::optional<EntityType>, 7> kinds{
            EntityType::NameOfPerson, EntityType::Location, EntityType::Time, EntityType::Number,
            EntityType::Distance,     EntityType::Age,      std::nullopt};
        for (const auto& kind : kinds) {
            for (const auto& ent : pool(kind)) {
                if (context.find(ent) != std::string::npos && ent.size() > found.size()) {
                    found = ent;
                    found_type = kind;
                }
            }
        }
        if (found.empty()) return "Answer: " + context;
        const auto& src = pool(found_type);
        std::string replacement;
        for (std::size_t step = hash("cma-pick", blob) % src.size(), tries = 0; tries < src.size(); ++tries) {
            const auto& cand = src[(step + tries) % src.size()];
            if (cand != found && context.find(cand) == std::string::npos) {
                replacement = cand;
                break;
            }
        }
        return "Answer: " + text::replace_all(context, found, replacement);
    }

    if (name == "direct_evidence") {
        const auto cma = field(req, "[CMA]");
        auto out = std::string(kDirectLeads[hash("direct-lead", blob) % kDirectLeads.size()]) + cma;
        if (unit("direct-extra", blob) < rates_.direct_extra_sentence) out += " " + std::string(kSupport[0]);
        return out;
    }

    if (name == "indirect_evidence") {
        const auto cma = field(req, "[counter memory answer]");
        int k = 2;
        try {
            k = std::stoi(field(req, "[2 or 3]"));
        } catch (const std::exception&) {
        }
        if (unit("indirect-length", blob) < rates_.indirect_wrong_length) ++k;
        std::string out = std::string(kDirectLeads[hash("indirect-lead", blob) % kDirectLeads.size()]) + cma;
        const std::size_t start = hash("indirect-support", blob) % kSupport.size();
        for (int i = 1; i < k; ++i) out += " " + std::string(kSupport[(start + i) % kSupport.size()]);
        return out;
    }

    return "I can help with that.";
}

// -- evaluee ----------------------------------------------------------------

std::string MockWorld::choose_option(const CompletionRequest& req) const {
    const auto question = field(req, "[question]");
    const auto evidence = field(req, "[evidence]");
    std::vector<std::string> options;
    for (int i = 1;; ++i) {
        auto it = req.prompt.fields.find("[option " + std::to_string(i) + "]");
        if (it == req.prompt.fields.end()) break;
        options.push_back(it->second);
    }
    if (options.empty()) return "";

    // CMA option: the conflicting option the evidence supports
    std::optional<std::size_t> cma_idx;
    std::optional<std::size_t> ma_idx;
    std::optional<std::size_t> uct_idx;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (options[i] == kUncertainOption) {
            uct_idx = i;
        } else if (!cma_idx && lexical_entailment(evidence, options[i]) == EntailmentLabel::Entailment) {
            cma_idx = i;
        }
    }
    for (std::size_t i = 0; i < options.size(); ++i)
        if (i != cma_idx && i != uct_idx && !ma_idx) ma_idx = i;
    if (!cma_idx) cma_idx = ma_idx;

    std::size_t pick = *cma_idx;
    switch (cfg_.evaluee) {
    case MockEvaluee::EvidenceFollowing: pick = *cma_idx; break;
    case MockEvaluee::MemoryClinging: pick = ma_idx.value_or(*cma_idx); break;
    case MockEvaluee::Realistic: {
        const auto k = std::max<std::size_t>(1, planted(question).size());
        const double base = k <= 1 ? 0.45 : k == 2 ? 0.30 : k <= 4 ? 0.18 : 0.10;
        const int sentences = std::max(1, count_sentences(evidence));
        const double p_ma = base * std::max(0.4, 1.0 - 0.15 * (sentences - 1));
        const double p_uct = k <= 1 ? 0.03 : 0.06;
        // keyed on content only, so option order cannot change the choice
        const double u = unit("mc", question + "\x1f" + evidence);
        if (u < p_ma && ma_idx) pick = *ma_idx;
        else if (u < p_ma + p_uct && uct_idx) pick = *uct_idx;
        break;
    }
    }
    return std::string(1, static_cast<char>('A' + pick)) + "\x1f" + options[pick];
}

std::string MockWorld::evaluee(const CompletionRequest& req) const {
    const auto& name = req.prompt.template_name;

    if (name == "closed_book_qa") {
        const auto q = field(req, "[Question]");
        const auto* e = find(q);
        if (!e) {
            const auto& src = pool(std::nullopt);
            return answer_sentence(src[hash("unknown", q) % src.size()]);
        }
        const auto idx = hash("answer", fields_blob(req)) % e->entities.size();
        return answer_sentence(e->entities[idx]);
    }

    if (name == "evaluate_with_evidence" || name == "evaluate_with_evidence_reprompt") {
        const auto choice = choose_option(req);
        if (choice.empty()) return "Uncertain.";
        const std::string letter = choice.substr(0, 1);
        const std::string text = choice.substr(2);
        if (name == "evaluate_with_evidence_reprompt") return letter;
        switch (cfg_.reply_format) {
        case MockReplyFormat::Letter: return letter;
        case MockReplyFormat::Text: return text;
        case MockReplyFormat::Mixed: break;
        }
        const auto content = field(req, "[question]") + "\x1f" + field(req, "[evidence]");
        if (unit("mc-garble", content) < rates_.unparseable_choice) return "Both options seem plausible to me.";
        switch (hash("mc-format", content) % 5) {
        case 0: return letter;
        case 1: return "Answer: " + letter;
        case 2: return "(" + letter + ")";
        case 3: return "The answer is " + letter + ".";
        default: return text;
        }
    }

    return "I do not know.";
}

// -- judge / entailer -------------------------------------------------------

std::string MockWorld::judge(const CompletionRequest& req) const {
    const auto& name = req.prompt.template_name;
    if (name == "question_equivalence") {
        const auto stem = question_stem(field(req, "[Paraphrased Q1]"));
        const auto other = text::normalize(field(req, "[Paraphrased Q2]"));
        return (!stem.empty() && other.find(stem) != std::string::npos) ? "Same" : "Contradicted";
    }
    if (name == "answer_consistency") {
        const auto a1 = field(req, "[LLM answer 1]");
        const auto a2 = field(req, "[LLM answer 2]");
        const bool same = text::normalize(a1) == text::normalize(a2) ||
                          (lexical_entailment(a1, a2) == EntailmentLabel::Entailment &&
                           lexical_entailment(a2, a1) == EntailmentLabel::Entailment);
        return same ? "Same" : "Contradicted";
    }
    return "Same";
}

std::string MockWorld::entailer(const CompletionRequest& req) const {
    const auto p = field(req, "premise");
    const auto h = field(req, "hypothesis");
    return std::string(to_string(lexical_entailment(p, h)));
}

void MockWorld::bind(Gateway& gw, ModelRole role, EndpointOptions opts) {
    using Fn = std::string (MockWorld::*)(const CompletionRequest&) const;
    Fn fn = &MockWorld::generator;
    switch (role) {
    case ModelRole::Generator: fn = &MockWorld::generator; break;
    case ModelRole::Evaluee: fn = &MockWorld::evaluee; break;
    case ModelRole::Judge: fn = &MockWorld::judge; break;
    case ModelRole::Entailer: fn = &MockWorld::entailer; break;
    }
    auto backend = std::make_shared<MockBackend>(
        std::string(to_string(role)) + "/seed=" + std::to_string(cfg_.seed) + "/" +
            std::string(to_string(cfg_.evaluee)) + "/" + std::string(to_string(cfg_.reply_format)),
        [this, fn](const CompletionRequest& req) { return (this->*fn)(req); });
    backends_[role] = backend;
    gw.bind(role, backend, opts);
}

void MockWorld::bind(Gateway& gw, EndpointOptions opts) {
    for (auto role : {ModelRole::Generator, ModelRole::Evaluee, ModelRole::Judge, ModelRole::Entailer})
        bind(gw, role, opts);
    gw.set_entailment_mode(EntailmentMode::Classifier);
}

std::size_t MockWorld::calls() const {
    std::size_t total = 0;
    for (const auto& [_, b] : backends_) total += b->calls();
    return total;
}

std::shared_ptr<MockBackend> MockWorld::backend(ModelRole role) const {
    auto it = backends_.find(role);
    return it == backends_.end() ? nullptr : it->second;
}

} // namespace faith
