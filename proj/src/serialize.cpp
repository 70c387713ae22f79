#include "faith/serialize.hpp"

namespace faith {

using nlohmann::json;

namespace {

template <typename T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <typename T>
void get_opt(const json& j, const char* key, std::optional<T>& v) {
    if (j.contains(key) && !j[key].is_null()) v = j[key].get<T>();
    else v.reset();
}

} // namespace

void to_json(json& j, const QuestionRecord& q) {
    j = json{{"id", q.id}, {"dataset", to_string(q.dataset)}, {"question", q.text}, {"paraphrases", q.paraphrases}};
    put_opt(j, "template_id", q.template_id);
    put_opt(j, "template", q.template_text);
    put_opt(j, "gold_answer", q.gold_answer);
    put_opt(j, "substitution_category", q.substitution_category);
    put_opt(j, "ma", q.ma);
    put_opt(j, "cma", q.cma);
    put_opt(j, "alt_entity", q.alt_entity);
}

void from_json(const json& j, QuestionRecord& q) {
    q.id = j.at("id").get<std::string>();
    q.dataset = parse_dataset(j.at("dataset").get<std::string>());
    q.text = j.at("question").get<std::string>();
    q.paraphrases = j.value("paraphrases", std::vector<std::string>{});
    get_opt(j, "template_id", q.template_id);
    get_opt(j, "template", q.template_text);
    get_opt(j, "gold_answer", q.gold_answer);
    get_opt(j, "substitution_category", q.substitution_category);
    get_opt(j, "ma", q.ma);
    get_opt(j, "cma", q.cma);
    get_opt(j, "alt_entity", q.alt_entity);
}

void to_json(json& j, const ClusterSet& c) {
    j = json{{"question_id", c.question_id}, {"clusters", c.clusters}};
}

void from_json(const json& j, ClusterSet& c) {
    c.question_id = j.at("question_id").get<std::string>();
    c.clusters = j.at("clusters").get<std::vector<std::vector<std::size_t>>>();
}

json strength_json(const std::string& question_id, const ClusterSet& c, const StrengthScore& s) {
    json j{{"question_id", question_id}, {"sizes", c.sizes()}, {"value", s.value}, {"n", s.n}};
    j["bin"] = s.bin ? json(std::string(to_string(*s.bin))) : json();
    return j;
}

StrengthScore strength_from_json(const json& j) {
    StrengthScore s;
    s.value = j.at("value").get<double>();
    s.n = j.at("n").get<std::size_t>();
    if (j.contains("bin") && !j["bin"].is_null()) s.bin = parse_bin(j["bin"].get<std::string>());
    return s;
}

void to_json(json& j, const CmaAttempt& a) {
    j = json{{"candidate", a.candidate},
             {"alt_entity", a.alt_entity},
             {"ma_to_cma", a.ma_to_cma},
             {"cma_to_ma", a.cma_to_ma},
             {"contradiction", a.contradiction},
             {"alt_not_in_question", a.alt_not_in_question},
             {"rejection", a.rejection}};
}

void from_json(const json& j, CmaAttempt& a) {
    a.candidate = j.at("candidate").get<std::string>();
    a.alt_entity = j.at("alt_entity").get<std::string>();
    a.ma_to_cma = j.at("ma_to_cma").get<std::string>();
    a.cma_to_ma = j.at("cma_to_ma").get<std::string>();
    a.contradiction = j.at("contradiction").get<bool>();
    a.alt_not_in_question = j.at("alt_not_in_question").get<bool>();
    a.rejection = j.at("rejection").get<std::string>();
}

void to_json(json& j, const ConflictPair& p) {
    j = json{{"question_id", p.question_id},
             {"ma", p.ma},
             {"cma", p.cma},
             {"alt_entity", p.alt_entity},
             {"checks",
              {{"contradiction", p.checks.contradiction},
               {"alt_not_in_question", p.checks.alt_not_in_question},
               {"alt_not_in_answers", p.checks.alt_not_in_answers}}},
             {"status", to_string(p.status)},
             {"attempts", p.attempts},
             {"note", p.note}};
}

void from_json(const json& j, ConflictPair& p) {
    p.question_id = j.at("question_id").get<std::string>();
    p.ma = j.at("ma").get<std::string>();
    p.cma = j.at("cma").get<std::string>();
    p.alt_entity = j.at("alt_entity").get<std::string>();
    const auto& c = j.at("checks");
    p.checks.contradiction = c.at("contradiction").get<bool>();
    p.checks.alt_not_in_question = c.at("alt_not_in_question").get<bool>();
    p.checks.alt_not_in_answers = c.at("alt_not_in_answers").get<bool>();
    p.status = parse_conflict_status(j.at("status").get<std::string>());
    p.attempts = j.value("attempts", std::vector<CmaAttempt>{});
    p.note = j.value("note", std::string{});
}

void to_json(json& j, const GateRecord& g) {
    j = json{{"target", g.target}, {"attempt", g.attempt}, {"check", g.check}, {"verdict", g.verdict},
             {"passed", g.passed}};
}

void from_json(const json& j, GateRecord& g) {
    g.target = j.at("target").get<std::string>();
    g.attempt = j.at("attempt").get<int>();
    g.check = j.at("check").get<std::string>();
    g.verdict = j.at("verdict").get<std::string>();
    g.passed = j.at("passed").get<bool>();
}

void to_json(json& j, const EvidenceBundle& b) {
    j = json{{"question_id", b.question_id},
             {"direct", b.direct},
             {"direct_paraphrases", b.direct_paraphrases},
             {"gate_ledger", b.gate_ledger}};
    j["indirect_2"] = b.indirect_2 ? json(*b.indirect_2) : json();
    j["indirect_3"] = b.indirect_3 ? json(*b.indirect_3) : json();
}

void from_json(const json& j, EvidenceBundle& b) {
    b.question_id = j.at("question_id").get<std::string>();
    b.direct = j.at("direct").get<std::string>();
    b.direct_paraphrases = j.at("direct_paraphrases").get<std::vector<std::string>>();
    get_opt(j, "indirect_2", b.indirect_2);
    get_opt(j, "indirect_3", b.indirect_3);
    b.gate_ledger = j.value("gate_ledger", std::vector<GateRecord>{});
}

void to_json(json& j, const EvalRecord& r) {
    j = json{{"question_id", r.question_id},
             {"dataset", r.dataset},
             {"model", r.model},
             {"style", to_string(r.style.kind)},
             {"sentences", r.style.sentences},
             {"group", r.group},
             {"order", to_string(r.order)},
             {"outcome", to_string(r.outcome)},
             {"raw_response", r.raw_response},
             {"parse_path", to_string(r.parse_path)},
             {"reprompted", r.reprompted}};
    if (r.reprompted) j["reprompt_response"] = r.reprompt_response;
}

void from_json(const json& j, EvalRecord& r) {
    r.question_id = j.at("question_id").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.style.kind = parse_evidence_kind(j.at("style").get<std::string>());
    r.style.sentences = j.at("sentences").get<int>();
    r.group = j.at("group").get<int>();
    r.order = parse_order(j.at("order").get<std::string>());
    r.outcome = parse_tag(j.at("outcome").get<std::string>());
    r.raw_response = j.at("raw_response").get<std::string>();
    r.parse_path = parse_parse_path(j.at("parse_path").get<std::string>());
    r.reprompted = j.value("reprompted", false);
    r.reprompt_response = j.value("reprompt_response", std::string{});
}

} // namespace faith
