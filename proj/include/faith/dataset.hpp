#pragma once

#include "faith/strength.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace faith {

struct SchemaProblem {
    std::size_t line = 0;
    std::string message;
};

struct DatasetSummary {
    Dataset kind = Dataset::NQ;
    std::size_t records = 0;
    std::vector<std::string> duplicate_ids;
    std::vector<std::size_t> duplicate_lines; ///< parallel to duplicate_ids
    std::vector<SchemaProblem> problems; ///< missing/mistyped fields, bad JSON

    bool ok() const { return problems.empty() && duplicate_ids.empty(); }
};

/// Schema check of an ingestion file without throwing on content problems.
/// NQ lines: {id, question, gold_answer?, substitution_category?}.
/// popQA lines: {id, question, relation_type, template, ma, cma, alt_entity?}.
DatasetSummary summarize_dataset(const std::filesystem::path& path, Dataset kind);

/// summarize_dataset, then SchemaViolation (first offending line) if any
/// field is missing or malformed. Duplicates are reported, not fatal.
DatasetSummary validate_dataset(const std::filesystem::path& path, Dataset kind);

/// Parse an ingestion file; throws SchemaViolation on any problem including
/// duplicate ids.
std::vector<QuestionRecord> load_dataset(const std::filesystem::path& path, Dataset kind);

} // namespace faith
