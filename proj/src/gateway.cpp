#include "faith/gateway.hpp"

#include "faith/error.hpp"
#include "faith/text.hpp"

#include <array>
#include <cctype>
#include <thread>

namespace faith {

std::string_view to_string(ModelRole r) {
    switch (r) {
    case ModelRole::Generator: return "generator";
    case ModelRole::Evaluee: return "evaluee";
    case ModelRole::Judge: return "judge";
    case ModelRole::Entailer: return "entailer";
    }
    return "?";
}

ModelRole parse_role(std::string_view s) {
    const auto l = text::to_lower(s);
    if (l == "generator") return ModelRole::Generator;
    if (l == "evaluee") return ModelRole::Evaluee;
    if (l == "judge") return ModelRole::Judge;
    if (l == "entailer") return ModelRole::Entailer;
    throw ConfigError("unknown model role: " + std::string(s));
}

DecodeParams default_decode(ModelRole role) {
    DecodeParams d;
    d.temperature = role == ModelRole::Generator ? 1.0 : 0.0;
    d.max_tokens = role == ModelRole::Generator ? 512 : 256;
    return d;
}

std::string_view to_string(EntailmentLabel l) {
    switch (l) {
    case EntailmentLabel::Entailment: return "entailment";
    case EntailmentLabel::Neutral: return "neutral";
    case EntailmentLabel::Contradiction: return "contradiction";
    }
    return "?";
}

std::string_view to_string(JudgeLabel l) { return l == JudgeLabel::Same ? "Same" : "Contradicted"; }

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Position of the first whole-word, case-insensitive occurrence of `word`.
std::size_t find_word(const std::string& lowered, std::string_view word) {
    std::size_t pos = 0;
    while ((pos = lowered.find(word, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !word_char(lowered[pos - 1]);
        const std::size_t end = pos + word.size();
        const bool right_ok = end >= lowered.size() || !word_char(lowered[end]);
        if (left_ok && right_ok) return pos;
        ++pos;
    }
    return std::string::npos;
}

template <typename Label, std::size_t N>
std::optional<Label> earliest(std::string_view raw, const std::array<std::pair<std::string_view, Label>, N>& keys) {
    const std::string lowered = text::to_lower(raw);
    std::optional<Label> best;
    std::size_t best_pos = std::string::npos;
    for (const auto& [word, label] : keys) {
        const auto at = find_word(lowered, word);
        if (at < best_pos) {
            best_pos = at;
            best = label;
        }
    }
    return best;
}

} // namespace

std::optional<JudgeLabel> parse_judge_label(std::string_view raw) {
    static constexpr std::array<std::pair<std::string_view, JudgeLabel>, 2> kKeys{{
        {"same", JudgeLabel::Same},
        {"contradicted", JudgeLabel::Contradicted},
    }};
    return earliest(raw, kKeys);
}

std::optional<EntailmentLabel> parse_entailment_label(std::string_view raw) {
    static constexpr std::array<std::pair<std::string_view, EntailmentLabel>, 3> kKeys{{
        {"entailment", EntailmentLabel::Entailment},
        {"neutral", EntailmentLabel::Neutral},
        {"contradiction", EntailmentLabel::Contradiction},
    }};
    return earliest(raw, kKeys);
}

struct Gateway::Endpoint {
    std::shared_ptr<Backend> backend;
    EndpointOptions opts;
    std::string identity;

    std::mutex mu;
    std::condition_variable cv;
    int in_flight = 0;

    void acquire() {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return in_flight < std::max(1, opts.parallelism); });
        ++in_flight;
    }
    void release() {
        {
            std::lock_guard lock(mu);
            --in_flight;
        }
        cv.notify_one();
    }
};

Gateway::Gateway(std::shared_ptr<CallCache> cache) : cache_(std::move(cache)) {}
Gateway::~Gateway() = default;

void Gateway::bind(ModelRole role, std::shared_ptr<Backend> backend, EndpointOptions opts) {
    auto ep = std::make_unique<Endpoint>();
    ep->identity = backend->identity();
    ep->backend = std::move(backend);
    ep->opts = opts;
    endpoints_[role] = std::move(ep);
}

bool Gateway::has(ModelRole role) const { return endpoints_.contains(role); }

Gateway::Endpoint& Gateway::endpoint(ModelRole role) const {
    auto it = endpoints_.find(role);
    if (it == endpoints_.end())
        throw EndpointUnavailable("no endpoint configured for role " + std::string(to_string(role)));
    return *it->second;
}

std::string Gateway::endpoint_identity(ModelRole role) const { return endpoint(role).identity; }

std::string_view Gateway::entailment_fidelity() const {
    return entailment_mode_ == EntailmentMode::Classifier ? "classifier" : "judge-fallback";
}

std::string Gateway::complete(const CompletionRequest& req) {
    if (text::trim(req.prompt.text).empty()) throw TemplateUnfilled("empty prompt");
    ensure_filled(req.prompt.template_name, req.prompt.text);
    auto& ep = endpoint(req.role);
    const std::string key = cache_key(req, ep.identity);
    if (auto hit = cache_->get(key)) {
        ++cache_hits_;
        return *hit;
    }

    std::string reply;
    for (int attempt = 0;; ++attempt) {
        ep.acquire();
        try {
            ++backend_calls_;
            reply = ep.backend->send(req);
            ep.release();
            break;
        } catch (const TransportError& e) {
            ep.release();
            if (attempt >= ep.opts.max_retries)
                throw EndpointUnavailable(std::string(to_string(req.role)) + " endpoint failed after " +
                                          std::to_string(attempt + 1) + " attempts: " + e.what());
            ++retries_;
            if (ep.opts.backoff_ms > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(ep.opts.backoff_ms << attempt));
        } catch (...) {
            ep.release();
            throw;
        }
    }
    cache_->put(key, reply, req.prompt.template_version);
    return reply;
}

std::string Gateway::call(ModelRole role, TemplateId id, const std::map<std::string, std::string>& fields,
                          std::optional<std::int64_t> seed) {
    CompletionRequest req{role, render(id, fields), default_decode(role)};
    req.decode.seed = seed;
    return complete(req);
}

JudgeVerdict Gateway::judged(CompletionRequest req) {
    std::string first = complete(req);
    if (auto l = parse_judge_label(first)) return {*l, first};
    req.decode.seed = req.decode.seed.value_or(0) + 1;
    std::string second = complete(req);
    if (auto l = parse_judge_label(second)) return {*l, second};
    throw UnparseableVerdict("judge output has neither 'Same' nor 'Contradicted': \"" + first + "\" / \"" +
                             second + "\"");
}

JudgeVerdict Gateway::judge_equivalence(std::string_view q1, std::string_view q2) {
    if (text::trim(q1).empty() || text::trim(q2).empty()) throw std::invalid_argument("empty question");
    CompletionRequest req{ModelRole::Judge,
                          render(TemplateId::QuestionEquivalence,
                                 {{"[Paraphrased Q1]", std::string(q1)}, {"[Paraphrased Q2]", std::string(q2)}}),
                          default_decode(ModelRole::Judge)};
    return judged(std::move(req));
}

JudgeVerdict Gateway::judge_answer_consistency(std::string_view q, std::string_view a1, std::string_view a2) {
    if (text::trim(q).empty() || text::trim(a1).empty() || text::trim(a2).empty())
        throw std::invalid_argument("empty question or answer");
    CompletionRequest req{ModelRole::Judge,
                          render(TemplateId::AnswerConsistency, {{"[question]", std::string(q)},
                                                                 {"[LLM answer 1]", std::string(a1)},
                                                                 {"[LLM answer 2]", std::string(a2)}}),
                          default_decode(ModelRole::Judge)};
    return judged(std::move(req));
}

EntailmentVerdict Gateway::entail(std::string_view premise, std::string_view hypothesis) {
    if (text::trim(premise).empty() || text::trim(hypothesis).empty())
        throw std::invalid_argument("empty premise or hypothesis");
    if (entailment_mode_ == EntailmentMode::JudgeFallback) {
        auto v = judge_equivalence(premise, hypothesis);
        return {v.label == JudgeLabel::Same ? EntailmentLabel::Entailment : EntailmentLabel::Contradiction, v.raw};
    }
    CompletionRequest req{ModelRole::Entailer,
                          raw_prompt("entailment_pair",
                                     "premise: " + std::string(premise) + "\nhypothesis: " + std::string(hypothesis),
                                     {{"premise", std::string(premise)}, {"hypothesis", std::string(hypothesis)}}),
                          default_decode(ModelRole::Entailer)};
    std::string first = complete(req);
    if (auto l = parse_entailment_label(first)) return {*l, first};
    req.decode.seed = req.decode.seed.value_or(0) + 1;
    std::string second = complete(req);
    if (auto l = parse_entailment_label(second)) return {*l, second};
    throw UnparseableVerdict("entailment output has no label: \"" + first + "\" / \"" + second + "\"");
}

GatewayStats Gateway::stats() const { return {backend_calls_.load(), cache_hits_.load(), retries_.load()}; }

} // namespace faith
