#pragma once

#include "faith/backends.hpp"
#include "faith/cache.hpp"
#include "faith/gateway_types.hpp"

#include <atomic>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>

namespace faith {

struct EndpointOptions {
    int max_retries = 3;       ///< retries after the first attempt
    int backoff_ms = 500;      ///< doubled after every failed attempt
    int parallelism = 4;       ///< max in-flight calls on this endpoint
};

/// Which adapter answers entailment queries. The judge fallback cannot emit
/// Neutral and is reported as lower fidelity.
enum class EntailmentMode { Classifier, JudgeFallback };

struct GatewayStats {
    std::size_t backend_calls = 0;
    std::size_t cache_hits = 0;
    std::size_t retries = 0;
};

/// Single entry point for every model call. Thread-safe.
class Gateway {
public:
    explicit Gateway(std::shared_ptr<CallCache> cache = std::make_shared<CallCache>());
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    void bind(ModelRole role, std::shared_ptr<Backend> backend, EndpointOptions opts = {});
    bool has(ModelRole role) const;
    std::string endpoint_identity(ModelRole role) const;

    void set_entailment_mode(EntailmentMode mode) { entailment_mode_ = mode; }
    EntailmentMode entailment_mode() const { return entailment_mode_; }
    std::string_view entailment_fidelity() const;

    /// Cached, retried, bounded call. Throws TemplateUnfilled before any
    /// transport activity if a placeholder is left in the prompt.
    std::string complete(const CompletionRequest& req);

    /// Convenience: render `id` and call `role` with its default decode
    /// params and the given seed.
    std::string call(ModelRole role, TemplateId id, const std::map<std::string, std::string>& fields,
                     std::optional<std::int64_t> seed = std::nullopt);

    JudgeVerdict judge_equivalence(std::string_view q1, std::string_view q2);
    JudgeVerdict judge_answer_consistency(std::string_view q, std::string_view a1, std::string_view a2);
    EntailmentVerdict entail(std::string_view premise, std::string_view hypothesis);

    GatewayStats stats() const;
    CallCache& cache() { return *cache_; }

private:
    struct Endpoint;

    Endpoint& endpoint(ModelRole role) const;
    JudgeVerdict judged(CompletionRequest req);

    std::shared_ptr<CallCache> cache_;
    std::map<ModelRole, std::unique_ptr<Endpoint>> endpoints_;
    EntailmentMode entailment_mode_ = EntailmentMode::Classifier;
    std::atomic<std::size_t> backend_calls_{0};
    std::atomic<std::size_t> cache_hits_{0};
    std::atomic<std::size_t> retries_{0};
};

} // namespace faith
