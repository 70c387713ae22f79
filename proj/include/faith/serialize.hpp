#pragma once

#include "faith/conflict.hpp"
#include "faith/eval.hpp"
#include "faith/evidence.hpp"
#include "faith/strength.hpp"

#include <json.hpp>

// nlohmann::json adapters for every record written to stage outputs.
namespace faith {

void to_json(nlohmann::json& j, const QuestionRecord& q);
void from_json(const nlohmann::json& j, QuestionRecord& q);

void to_json(nlohmann::json& j, const ClusterSet& c);
void from_json(const nlohmann::json& j, ClusterSet& c);

/// {question_id, sizes, value, bin, n}
nlohmann::json strength_json(const std::string& question_id, const ClusterSet& c, const StrengthScore& s);
StrengthScore strength_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const CmaAttempt& a);
void from_json(const nlohmann::json& j, CmaAttempt& a);
void to_json(nlohmann::json& j, const ConflictPair& p);
void from_json(const nlohmann::json& j, ConflictPair& p);

void to_json(nlohmann::json& j, const GateRecord& g);
void from_json(const nlohmann::json& j, GateRecord& g);
void to_json(nlohmann::json& j, const EvidenceBundle& b);
void from_json(const nlohmann::json& j, EvidenceBundle& b);

void to_json(nlohmann::json& j, const EvalRecord& r);
void from_json(const nlohmann::json& j, EvalRecord& r);

} // namespace faith
