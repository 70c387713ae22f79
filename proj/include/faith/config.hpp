#pragma once

#include "faith/eval.hpp"
#include "faith/evidence.hpp"
#include "faith/gateway.hpp"
#include "faith/strength.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace faith {

// -- minimal TOML reader ----------------------------------------------------

/// Values supported by the config reader: strings, integers, floats, booleans
/// and flat arrays of those.
struct TomlValue {
    using Scalar = std::variant<std::string, std::int64_t, double, bool>;
    std::variant<Scalar, std::vector<Scalar>> value;

    std::string as_string() const;
    std::int64_t as_int() const;
    double as_double() const;
    bool as_bool() const;
    std::vector<std::string> as_string_list() const;
};

/// Keys are flattened to "section.sub.key"; keys before any header have no
/// prefix. Supports [tables], dotted headers, # comments, basic and literal
/// strings, numbers, booleans and arrays (which may span lines).
using TomlTable = std::map<std::string, TomlValue>;
TomlTable parse_toml(std::string_view text);
TomlTable load_toml(const std::filesystem::path& path);

// -- run configuration ------------------------------------------------------

enum class EndpointKind { Chat, Classifier, Mock, JudgeFallback };
std::string_view to_string(EndpointKind k);
EndpointKind parse_endpoint_kind(std::string_view s);

struct EndpointConfig {
    EndpointKind kind = EndpointKind::Mock;
    std::string base_url;
    std::string model;
    std::string token_env = "OPENAI_API_KEY";
    int max_retries = 3;
    int backoff_ms = 500;
    int parallelism = 4;
    int timeout_s = 60;

    /// Part of the config digest: kind, url and model only.
    std::string identity() const;
};

/// "mock", "judge-fallback", "classifier:<url>", "chat:<url>@<model>" or
/// "<url>@<model>".
EndpointConfig parse_endpoint_spec(std::string_view spec);
/// "<role>=<endpoint>" as given to --model-role.
std::pair<ModelRole, EndpointConfig> parse_model_role(std::string_view arg);

enum class MockEvaluee { Realistic, EvidenceFollowing, MemoryClinging };
enum class MockReplyFormat { Mixed, Letter, Text };
std::string_view to_string(MockEvaluee m);
MockEvaluee parse_mock_evaluee(std::string_view s);
std::string_view to_string(MockReplyFormat f);
MockReplyFormat parse_mock_reply_format(std::string_view s);

struct MockConfig {
    std::int64_t seed = 7;
    MockEvaluee evaluee = MockEvaluee::Realistic;
    MockReplyFormat reply_format = MockReplyFormat::Mixed;
};

struct RunConfig {
    std::filesystem::path dataset;
    Dataset kind = Dataset::NQ;
    std::map<ModelRole, EndpointConfig> roles;
    EntailmentMode entailment = EntailmentMode::Classifier;
    std::size_t n = 7;
    int max_regen = 5;
    int cma_attempts = 5;
    int evidence_attempts = 5;
    std::vector<EvidenceStyle> styles = all_styles();
    std::vector<OptionOrder> orders{OptionOrder::MAFirst, OptionOrder::CMAFirst};
    int parallelism = 4;
    std::filesystem::path cache;  ///< empty: <out>/cache.jsonl
    std::filesystem::path out = "run";
    std::int64_t seed = 0;
    std::string model_label = "model";
    MockConfig mock;

    std::filesystem::path cache_path() const { return cache.empty() ? out / "cache.jsonl" : cache; }
};

/// Defaults overlaid with the file's [run], [role.<name>], [stage.<name>]
/// and [mock] sections.
RunConfig config_from_toml(const TomlTable& t);
RunConfig load_config(const std::filesystem::path& path);

/// Every role bound to the mock backend.
void use_mock_roles(RunConfig& cfg);

/// Throws ConfigError on n < 2, max_regen < 1, an unreadable dataset, an
/// uncreatable output directory, a missing role or an empty style/order
/// list. `needs_dataset` is false for stages that only read upstream files.
void validate_config(const RunConfig& cfg, bool needs_dataset = true);

/// SHA-256 over everything that changes stage outputs: dataset content,
/// kind, endpoint identities, n, limits, styles, orders, seeds, mock
/// settings and model label. Parallelism, retries, cache and output paths
/// are excluded.
std::string config_digest(const RunConfig& cfg);

} // namespace faith
