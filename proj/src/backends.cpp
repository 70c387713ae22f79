#include "faith/backends.hpp"

#include "faith/error.hpp"
#include "faith/text.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cctype>
#include <set>

namespace faith {

namespace {

struct SplitUrl {
    std::string origin; // scheme://host[:port]
    std::string path;   // without trailing slash
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    if (path_start == std::string::npos) {
        out.origin = url;
    } else {
        out.origin = url.substr(0, path_start);
        out.path = url.substr(path_start);
    }
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
    return out;
}

std::string post_json(const HttpEndpoint& ep, const std::string& full_path_url, const std::string& body) {
    const auto url = split_url(full_path_url);
    httplib::Client cli(url.origin);
    cli.set_connection_timeout(ep.timeout);
    cli.set_read_timeout(ep.timeout);
    httplib::Headers headers;
    if (!ep.api_token.empty()) headers.emplace("Authorization", "Bearer " + ep.api_token);
    auto res = cli.Post(url.path.empty() ? "/" : url.path, headers, body, "application/json");
    if (!res) throw TransportError("HTTP transport error: " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
        throw TransportError("HTTP " + std::to_string(res->status) + " from " + url.origin);
    if (res->status != 200)
        throw EndpointUnavailable("HTTP " + std::to_string(res->status) + " from " + url.origin + ": " +
                                  res->body.substr(0, 200));
    return res->body;
}

} // namespace

ChatBackend::ChatBackend(HttpEndpoint ep) : ep_(std::move(ep)) {}

std::string ChatBackend::identity() const { return "chat:" + ep_.base_url + "#" + ep_.model; }

std::string ChatBackend::request_body(const CompletionRequest& req) const {
    nlohmann::json body{
        {"model", ep_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", req.prompt.text}}})},
        {"temperature", req.decode.temperature},
        {"max_tokens", req.decode.max_tokens},
    };
    if (req.decode.seed) body["seed"] = *req.decode.seed;
    return body.dump();
}

std::string ChatBackend::parse_response(std::string_view body) {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) throw TransportError("malformed JSON in chat response");
    try {
        const auto& content = j.at("choices").at(0).at("message").at("content");
        return content.is_null() ? std::string{} : content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw EndpointUnavailable(std::string("chat response missing choices[0].message.content: ") + e.what());
    }
}

std::string ChatBackend::send(const CompletionRequest& req) {
    return parse_response(post_json(ep_, ep_.base_url + "/chat/completions", request_body(req)));
}

ClassifierBackend::ClassifierBackend(HttpEndpoint ep) : ep_(std::move(ep)) {}

std::string ClassifierBackend::identity() const { return "nli:" + ep_.base_url + "#" + ep_.model; }

std::string ClassifierBackend::request_body(std::string_view premise, std::string_view hypothesis) {
    return nlohmann::json{{"premise", premise}, {"hypothesis", hypothesis}}.dump();
}

std::string ClassifierBackend::parse_response(std::string_view body) {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.contains("label") || !j["label"].is_string())
        throw EndpointUnavailable("classifier response missing string field 'label'");
    return j["label"].get<std::string>();
}

std::string ClassifierBackend::send(const CompletionRequest& req) {
    const auto& f = req.prompt.fields;
    auto p = f.find("premise");
    auto h = f.find("hypothesis");
    if (p == f.end() || h == f.end()) throw EndpointUnavailable("classifier endpoint needs premise/hypothesis");
    return parse_response(post_json(ep_, ep_.base_url, request_body(p->second, h->second)));
}

MockBackend::MockBackend(std::string name, Handler handler)
    : name_(std::move(name)), handler_(std::move(handler)) {}

std::string MockBackend::send(const CompletionRequest& req) {
    ++calls_;
    return handler_(req);
}

std::shared_ptr<MockBackend> fixed_reply_backend(std::string reply) {
    return std::make_shared<MockBackend>("fixed:" + reply, [reply](const CompletionRequest&) { return reply; });
}

namespace {

std::set<std::string> key_tokens(std::string_view s) {
    std::set<std::string> keys;
    bool sentence_start = true;
    for (const auto& raw : text::split_whitespace(s)) {
        const std::string tok = text::strip_punct(raw);
        if (!tok.empty()) {
            const unsigned char c0 = static_cast<unsigned char>(tok[0]);
            const bool numeric = std::isdigit(c0) != 0;
            const bool capital = std::isupper(c0) != 0;
            if (numeric || (capital && !sentence_start)) keys.insert(text::to_lower(tok));
            sentence_start = false;
        }
        const char last = raw.empty() ? ' ' : raw.back();
        if (last == '.' || last == '!' || last == '?' || last == ':') sentence_start = true;
    }
    return keys;
}

} // namespace

EntailmentLabel lexical_entailment(std::string_view premise, std::string_view hypothesis) {
    if (text::normalize(premise) == text::normalize(hypothesis)) return EntailmentLabel::Entailment;
    const auto p = key_tokens(premise);
    const auto h = key_tokens(hypothesis);
    bool h_extra = false;
    bool p_extra = false;
    for (const auto& k : h) h_extra = h_extra || !p.contains(k);
    for (const auto& k : p) p_extra = p_extra || !h.contains(k);
    if (!h_extra) return h.empty() ? EntailmentLabel::Neutral : EntailmentLabel::Entailment;
    return p_extra ? EntailmentLabel::Contradiction : EntailmentLabel::Neutral;
}

std::shared_ptr<MockBackend> lexical_entailer_backend() {
    return std::make_shared<MockBackend>("lexical-nli", [](const CompletionRequest& req) {
        const auto& f = req.prompt.fields;
        auto p = f.find("premise");
        auto h = f.find("hypothesis");
        if (p == f.end() || h == f.end()) return std::string("neutral");
        return std::string(to_string(lexical_entailment(p->second, h->second)));
    });
}

} // namespace faith
