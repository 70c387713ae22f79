#pragma once

#include "faith/config.hpp"
#include "faith/error.hpp"
#include "faith/gateway.hpp"
#include "faith/mock_world.hpp"
#include "faith/report.hpp"

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace faith {

enum class Stage { Paraphrase, Strength, Conflict, Evidence, Evaluate, Report };
std::string_view to_string(Stage s);
Stage parse_stage(std::string_view s);
const std::vector<Stage>& all_stages();

/// Raised by the interrupt test hook; the partial checkpoint stays on disk.
class Interrupted : public Error { using Error::Error; };

struct StageStatus {
    bool complete = false;
    std::size_t records = 0;
    std::string started_at;
    std::string finished_at;
};

struct RunManifest {
    std::string run_id;
    std::string config_digest;
    StageCounts counts;
    std::map<std::string, StageStatus> stages;
    std::string entailment_fidelity = "classifier";
    std::string created_at;
    std::string updated_at;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

/// Read <dir>/manifest.json; nullopt if absent.
std::optional<RunManifest> read_manifest(const std::filesystem::path& dir);

struct RunOptions {
    bool resume = false;
    /// Test hook: stop scheduling after this many questions were
    /// checkpointed in this invocation, then throw Interrupted.
    std::optional<std::size_t> interrupt_after;
    /// When set to true (e.g. from a signal handler), workers finish the item
    /// in hand and the stage throws Interrupted.
    const std::atomic<bool>* cancel = nullptr;
};

/// A gateway wired to the endpoints of `cfg`. Mock roles are served by a
/// MockWorld built from the dataset; real roles read their token from the
/// configured environment variable.
struct Runtime {
    std::shared_ptr<Gateway> gateway;
    std::shared_ptr<MockWorld> world; ///< null when no role is mocked
};
Runtime make_runtime(const RunConfig& cfg);

/// Stage files under the output directory. Every stage reads only the files
/// of earlier stages.
///   paraphrase -> paraphrases.jsonl
///   strength   -> answers.jsonl, strength.jsonl
///   conflict   -> conflicts.jsonl
///   evidence   -> evidence.jsonl
///   evaluate   -> eval.jsonl
///   report     -> report/*.csv
class Pipeline {
public:
    Pipeline(RunConfig cfg, std::shared_ptr<Gateway> gw);

    /// Runs one stage. A stage already completed under the same config
    /// digest is a no-op. Throws MissingUpstream, ConfigMismatch.
    RunManifest run_stage(Stage stage, const RunOptions& opts = {});
    /// Every stage in order, skipping completed ones.
    RunManifest run_all(const RunOptions& opts = {});

    const RunConfig& config() const { return cfg_; }
    const std::string& digest() const { return digest_; }

private:
    RunManifest load_or_init_manifest() const;
    void save_manifest(RunManifest& m) const;

    void paraphrase_stage(RunManifest& m, const RunOptions& opts);
    void strength_stage(RunManifest& m, const RunOptions& opts);
    void conflict_stage(RunManifest& m, const RunOptions& opts);
    void evidence_stage(RunManifest& m, const RunOptions& opts);
    void evaluate_stage(RunManifest& m, const RunOptions& opts);
    void report_stage(RunManifest& m);

    RunConfig cfg_;
    std::shared_ptr<Gateway> gw_;
    std::string digest_;
};

/// Read a JSONL file into objects; throws SchemaViolation on a bad line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

} // namespace faith
