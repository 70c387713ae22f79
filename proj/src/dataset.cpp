#include "faith/dataset.hpp"

#include "faith/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>

namespace faith {

namespace {

using nlohmann::json;

const std::set<std::string> kSubstitutionCategories{"PER", "DAT", "NUM", "ORG", "LOC"};

std::optional<std::string> optional_string(const json& j, const char* field) {
    if (!j.contains(field) || j[field].is_null()) return std::nullopt;
    return j[field].get<std::string>();
}

// Returns the problems of one parsed line.
std::vector<std::string> check_line(const json& j, Dataset kind) {
    std::vector<std::string> out;
    if (!j.is_object()) return {"line is not a JSON object"};
    auto require = [&](const char* field) {
        if (!j.contains(field)) out.push_back(std::string("missing field '") + field + "'");
        else if (!j[field].is_string()) out.push_back(std::string("field '") + field + "' must be a string");
        else if (j[field].get<std::string>().empty()) out.push_back(std::string("field '") + field + "' is empty");
    };
    auto optional = [&](const char* field) {
        if (j.contains(field) && !j[field].is_null() && !j[field].is_string())
            out.push_back(std::string("field '") + field + "' must be a string");
    };
    require("id");
    require("question");
    if (kind == Dataset::NQ) {
        optional("gold_answer");
        optional("substitution_category");
        if (j.contains("substitution_category") && j["substitution_category"].is_string() &&
            !kSubstitutionCategories.contains(j["substitution_category"].get<std::string>()))
            out.push_back("substitution_category must be one of PER, DAT, NUM, ORG, LOC");
    } else {
        require("relation_type");
        require("template");
        require("ma");
        require("cma");
        optional("alt_entity");
    }
    return out;
}

template <typename OnRecord>
DatasetSummary scan(const std::filesystem::path& path, Dataset kind, OnRecord&& on_record) {
    std::ifstream in(path);
    if (!in) throw SchemaViolation("cannot open dataset " + path.string(), 0);
    DatasetSummary s;
    s.kind = kind;
    std::set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            s.problems.push_back({lineno, "malformed JSON"});
            continue;
        }
        auto problems = check_line(j, kind);
        for (auto& p : problems) s.problems.push_back({lineno, std::move(p)});
        if (!problems.empty()) continue;
        ++s.records;
        const auto id = j["id"].get<std::string>();
        if (!ids.insert(id).second) {
            s.duplicate_ids.push_back(id);
            s.duplicate_lines.push_back(lineno);
            continue;
        }
        on_record(j, lineno);
    }
    return s;
}

} // namespace

DatasetSummary summarize_dataset(const std::filesystem::path& path, Dataset kind) {
    return scan(path, kind, [](const json&, std::size_t) {});
}

DatasetSummary validate_dataset(const std::filesystem::path& path, Dataset kind) {
    auto s = summarize_dataset(path, kind);
    if (!s.problems.empty()) throw SchemaViolation(s.problems.front().message, s.problems.front().line);
    return s;
}

std::vector<QuestionRecord> load_dataset(const std::filesystem::path& path, Dataset kind) {
    std::vector<QuestionRecord> out;
    auto s = scan(path, kind, [&](const json& j, std::size_t) {
        QuestionRecord q;
        q.id = j["id"].get<std::string>();
        q.dataset = kind;
        q.text = j["question"].get<std::string>();
        if (kind == Dataset::NQ) {
            q.gold_answer = optional_string(j, "gold_answer");
            q.substitution_category = optional_string(j, "substitution_category");
        } else {
            q.template_id = j["relation_type"].get<std::string>();
            q.template_text = j["template"].get<std::string>();
            q.ma = j["ma"].get<std::string>();
            q.cma = j["cma"].get<std::string>();
            q.alt_entity = optional_string(j, "alt_entity");
        }
        out.push_back(std::move(q));
    });
    if (!s.problems.empty()) throw SchemaViolation(s.problems.front().message, s.problems.front().line);
    if (!s.duplicate_ids.empty()) throw SchemaViolation("duplicate id '" + s.duplicate_ids.front() + "'", s.duplicate_lines.front());
    return out;
}

} // namespace faith
