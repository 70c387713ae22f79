#pragma once

#include "faith/gateway_types.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>

namespace faith {

/// A transport that turns one request into raw response text. Transient
/// failures throw TransportError; anything else is treated as fatal.
class Backend {
public:
    virtual ~Backend() = default;
    /// Stable description of the endpoint; part of the cache key.
    virtual std::string identity() const = 0;
    virtual std::string send(const CompletionRequest& req) = 0;
};

struct HttpEndpoint {
    std::string base_url; ///< e.g. https://api.openai.com/v1
    std::string model;
    std::string api_token;
    std::chrono::seconds timeout{60};
};

/// OpenAI-compatible chat completions: POST {base_url}/chat/completions.
class ChatBackend final : public Backend {
public:
    explicit ChatBackend(HttpEndpoint ep);
    std::string identity() const override;
    std::string send(const CompletionRequest& req) override;

    /// Body sent for `req`; exposed so the wire format can be tested offline.
    std::string request_body(const CompletionRequest& req) const;
    /// Extracts choices[0].message.content.
    static std::string parse_response(std::string_view body);

private:
    HttpEndpoint ep_;
};

/// Three-way NLI classifier: POST {base_url} with {premise, hypothesis};
/// reply {label, scores}. Returns the label string.
class ClassifierBackend final : public Backend {
public:
    explicit ClassifierBackend(HttpEndpoint ep);
    std::string identity() const override;
    std::string send(const CompletionRequest& req) override;

    static std::string request_body(std::string_view premise, std::string_view hypothesis);
    static std::string parse_response(std::string_view body);

private:
    HttpEndpoint ep_;
};

/// In-process backend driven by a handler. Counts calls so tests can assert
/// that cached replays never reach it.
class MockBackend final : public Backend {
public:
    using Handler = std::function<std::string(const CompletionRequest&)>;

    MockBackend(std::string name, Handler handler);
    std::string identity() const override { return "mock:" + name_; }
    std::string send(const CompletionRequest& req) override;

    std::size_t calls() const { return calls_.load(); }

private:
    std::string name_;
    Handler handler_;
    std::atomic<std::size_t> calls_{0};
};

std::shared_ptr<MockBackend> fixed_reply_backend(std::string reply);

/// Offline entailment heuristic over key tokens (numbers and capitalized
/// words that do not open a sentence). Hypothesis keys all present in the
/// premise -> Entailment; each side has keys the other lacks -> Contradiction;
/// otherwise Neutral. Identical strings always entail.
EntailmentLabel lexical_entailment(std::string_view premise, std::string_view hypothesis);

/// Mock entailer wrapping lexical_entailment; reads the premise/hypothesis
/// fields of classifier requests.
std::shared_ptr<MockBackend> lexical_entailer_backend();

} // namespace faith
