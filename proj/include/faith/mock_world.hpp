#pragma once

#include "faith/backends.hpp"
#include "faith/config.hpp"
#include "faith/gateway.hpp"
#include "faith/strength.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace faith {

/// Offline stand-in for all four model roles. Every reply is a pure function
/// of (world seed, request content), so runs are reproducible regardless of
/// scheduling.
///
/// Each known question gets k planted answers (k drawn from {1, 2, 4, 7}
/// unless set with plant()); the closed-book evaluee answers a paraphrase
/// with one of them, chosen uniformly by hashing the paraphrase. Paraphrase,
/// CMA and evidence generators occasionally produce candidates that the
/// gates must reject.
class MockWorld {
public:
    struct Rates {
        double bad_paraphrase = 0.05;
        double cma_unchanged = 0.10;
        double direct_extra_sentence = 0.10;
        double indirect_wrong_length = 0.10;
        double unparseable_choice = 0.04;
    };

    MockWorld(const std::vector<QuestionRecord>& questions, MockConfig cfg);
    MockWorld(const std::vector<QuestionRecord>& questions, MockConfig cfg, Rates rates);

    /// Replace the planted answer entities of `question`.
    void plant(const std::string& question, std::vector<std::string> entities);
    /// Planted entities for the question matching `text` (paraphrases match
    /// by containing the question stem); empty if unknown.
    std::vector<std::string> planted(std::string_view text) const;

    std::string generator(const CompletionRequest& req) const;
    std::string evaluee(const CompletionRequest& req) const;
    std::string judge(const CompletionRequest& req) const;
    std::string entailer(const CompletionRequest& req) const;

    /// Bind the four roles of `gw` to mock backends. Backend identities carry
    /// the world seed and evaluee settings so cached replies never cross worlds.
    void bind(Gateway& gw, EndpointOptions opts = {});
    void bind(Gateway& gw, ModelRole role, EndpointOptions opts = {});
    std::size_t calls() const;
    std::shared_ptr<MockBackend> backend(ModelRole role) const;

    /// Entity pool the world draws planted and substitute entities from.
    static const std::vector<std::string>& pool(std::optional<EntityType> et);

private:
    struct Entry {
        std::string stem;
        std::vector<std::string> entities;
    };

    const Entry* find(std::string_view text) const;
    double unit(std::string_view purpose, std::string_view content) const;
    std::uint64_t hash(std::string_view purpose, std::string_view content) const;
    std::string choose_option(const CompletionRequest& req) const;

    MockConfig cfg_;
    Rates rates_;
    std::vector<Entry> entries_;
    std::map<ModelRole, std::shared_ptr<MockBackend>> backends_;
};

/// Question stem used for matching: normalized, trailing punctuation removed.
std::string question_stem(std::string_view question);

} // namespace faith
