#include "faith/strength.hpp"

#include "faith/digest.hpp"
#include "faith/error.hpp"
#include "faith/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <set>

namespace faith {

std::string_view to_string(Dataset d) { return d == Dataset::PopQA ? "popqa" : "nq"; }

Dataset parse_dataset(std::string_view s) {
    const auto l = text::to_lower(s);
    if (l == "popqa") return Dataset::PopQA;
    if (l == "nq") return Dataset::NQ;
    throw ConfigError("unknown dataset kind: " + std::string(s));
}

std::string_view to_string(StrengthBin b) {
    switch (b) {
    case StrengthBin::Low: return "low";
    case StrengthBin::MidLow: return "mid_low";
    case StrengthBin::MidHigh: return "mid_high";
    case StrengthBin::High: return "high";
    }
    return "?";
}

StrengthBin parse_bin(std::string_view s) {
    for (auto b : kAllBins)
        if (to_string(b) == s) return b;
    throw std::invalid_argument("unknown strength bin: " + std::string(s));
}

std::vector<std::size_t> ClusterSet::sizes() const {
    std::vector<std::size_t> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) out.push_back(c.size());
    return out;
}

std::size_t ClusterSet::n() const {
    std::size_t total = 0;
    for (const auto& c : clusters) total += c.size();
    return total;
}

// ---------------------------------------------------------------------------

std::vector<std::string> parse_paraphrase_list(std::string_view reply) {
    std::vector<std::string> out;
    for (const auto& raw : text::split_lines(reply)) {
        std::string line = text::trim(raw);
        if (line.empty()) continue;
        // list markers: "1." "1)" "(1)" "-" "*" "•"
        std::size_t i = 0;
        if (line[0] == '(') ++i;
        std::size_t digits = i;
        while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
        if (digits > i && digits < line.size() && (line[digits] == '.' || line[digits] == ')' || line[digits] == ':')) {
            line = text::trim(std::string_view(line).substr(digits + 1));
        } else if (line[0] == '-' || line[0] == '*') {
            line = text::trim(std::string_view(line).substr(1));
        } else if (line.rfind("\xE2\x80\xA2", 0) == 0) {
            line = text::trim(std::string_view(line).substr(3));
        }
        if (line.size() >= 2 && (line.front() == '"' || line.front() == '\'') && line.back() == line.front())
            line = line.substr(1, line.size() - 2);
        line = text::trim(line);
        if (line.empty() || line.back() == ':') continue;
        out.push_back(std::move(line));
    }
    return out;
}

ParaphraseOutcome paraphrase_text(Gateway& gw, std::string_view original, const ParaphraseOptions& opts,
                                  const std::function<bool(const std::string&)>& accept) {
    if (opts.n < 2) throw std::invalid_argument("paraphrase count must be >= 2");
    ParaphraseOutcome out;
    std::deque<std::string> pool;
    std::set<std::string> seen; // normalized candidates already drawn
    int batch = 0;

    auto refill = [&] {
        const auto seed = derive_seed(opts.seed, "paraphrase#" + std::to_string(batch++));
        const auto reply = gw.call(ModelRole::Generator, TemplateId::QuestionParaphrase,
                                   {{"[Question]", std::string(original)}}, seed);
        for (auto& cand : parse_paraphrase_list(reply)) {
            if (seen.insert(text::normalize(cand)).second) pool.push_back(std::move(cand));
        }
    };

    for (std::size_t slot = 0; slot < opts.n; ++slot) {
        int failures = 0;
        while (true) {
            if (pool.empty()) refill();
            bool ok = false;
            if (!pool.empty()) {
                std::string cand = std::move(pool.front());
                pool.pop_front();
                ok = (!accept || accept(cand)) &&
                     gw.judge_equivalence(original, cand).label == JudgeLabel::Same;
                if (ok) {
                    out.paraphrases.push_back(std::move(cand));
                    break;
                }
            }
            ++failures;
            ++out.regenerations;
            if (failures > opts.max_regen)
                throw ExcludedQuestion("no equivalent paraphrase for slot " + std::to_string(slot + 1) + " after " +
                                       std::to_string(failures) + " candidates");
        }
    }
    return out;
}

std::optional<std::string> template_subject(std::string_view template_text, std::string_view question) {
    const auto slot = template_text.find("{}");
    if (slot == std::string_view::npos) return std::nullopt;
    const auto prefix = template_text.substr(0, slot);
    const auto suffix = template_text.substr(slot + 2);
    if (question.size() < prefix.size() + suffix.size()) return std::nullopt;
    if (question.substr(0, prefix.size()) != prefix) return std::nullopt;
    if (question.substr(question.size() - suffix.size()) != suffix) return std::nullopt;
    return std::string(question.substr(prefix.size(), question.size() - prefix.size() - suffix.size()));
}

std::string instantiate_template(std::string_view template_text, std::string_view subject) {
    std::string out(template_text);
    const auto slot = out.find("{}");
    if (slot != std::string::npos) out.replace(slot, 2, subject);
    return out;
}

ParaphraseOutcome generate_paraphrases(Gateway& gw, QuestionRecord& q, const ParaphraseOptions& opts) {
    auto out = paraphrase_text(gw, q.text, opts);
    q.paraphrases = out.paraphrases;
    return out;
}

// ---------------------------------------------------------------------------

AnswerSet collect_answers(Gateway& gw, const QuestionRecord& q) {
    if (q.paraphrases.empty()) throw std::invalid_argument("question " + q.id + " has no paraphrases");
    AnswerSet a{q.id, {}};
    a.answers.reserve(q.paraphrases.size());
    for (std::size_t i = 0; i < q.paraphrases.size(); ++i) {
        try {
            a.answers.push_back(
                text::trim(gw.call(ModelRole::Evaluee, TemplateId::ClosedBookQA, {{"[Question]", q.paraphrases[i]}})));
        } catch (const EndpointUnavailable& e) {
            throw ExcludedQuestion("answer slot " + std::to_string(i + 1) + " failed: " + e.what());
        }
    }
    return a;
}

ClusterSet cluster_answers(const AnswerSet& a, std::string_view question, const ConsistencyJudge& judge) {
    ClusterSet cs{a.question_id, {}};
    for (std::size_t i = 0; i < a.answers.size(); ++i) {
        bool placed = false;
        for (auto& cluster : cs.clusters) {
            for (std::size_t j : cluster) {
                if (judge(question, a.answers[j], a.answers[i]) == JudgeLabel::Same) {
                    cluster.push_back(i);
                    placed = true;
                    break;
                }
            }
            if (placed) break;
        }
        if (!placed) cs.clusters.push_back({i});
    }
    return cs;
}

ClusterSet cluster_answers(Gateway& gw, const AnswerSet& a, std::string_view question) {
    return cluster_answers(a, question, [&gw](std::string_view q, std::string_view x, std::string_view y) {
        // identical strings are trivially consistent; skip the call
        if (text::normalize(x) == text::normalize(y)) return JudgeLabel::Same;
        return gw.judge_answer_consistency(q, x, y).label;
    });
}

// ---------------------------------------------------------------------------

StrengthScore memory_strength(std::span<const std::size_t> sizes) {
    if (sizes.empty()) throw InvalidPartition("no clusters");
    std::size_t n = 0;
    for (auto s : sizes) {
        if (s == 0) throw InvalidPartition("empty cluster");
        n += s;
    }
    // sum (c/n) ln(c/n) == sum (c/n) ln c - ln n; this form makes both
    // extremes exact (all-singleton terms vanish, single cluster cancels).
    const double dn = static_cast<double>(n);
    double acc = 0.0;
    for (auto s : sizes) {
        const double c = static_cast<double>(s);
        acc += (c / dn) * std::log(c);
    }
    StrengthScore score;
    score.n = n;
    score.value = std::min(0.0, acc - std::log(dn));
    if (score.value >= -2.0) score.bin = assign_bin(score.value);
    return score;
}

StrengthScore memory_strength(const ClusterSet& c) {
    const auto sizes = c.sizes();
    return memory_strength(std::span<const std::size_t>(sizes));
}

StrengthBin assign_bin(double value) {
    if (!(value >= -2.0 && value <= 0.0)) throw OutOfRange("strength value outside [-2, 0]: " + std::to_string(value));
    if (value <= -1.0) return StrengthBin::Low;
    if (value <= -0.5) return StrengthBin::MidLow;
    if (value <= -0.25) return StrengthBin::MidHigh;
    return StrengthBin::High;
}

void validate_partition(const ClusterSet& c, std::size_t n) {
    std::vector<bool> seen(n, false);
    std::size_t total = 0;
    for (const auto& cluster : c.clusters) {
        if (cluster.empty()) throw InvalidPartition("empty cluster");
        for (auto i : cluster) {
            if (i >= n || seen[i]) throw InvalidPartition("index repeated or out of range");
            seen[i] = true;
            ++total;
        }
    }
    if (total != n) throw InvalidPartition("sizes do not sum to n");
}

std::array<std::size_t, 8> strength_histogram(std::span<const double> values) {
    std::array<std::size_t, 8> bins{};
    for (double v : values) {
        const double pos = (v + 2.0) / 0.25;
        const auto idx = static_cast<std::ptrdiff_t>(std::floor(pos));
        bins[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, 7))]++;
    }
    return bins;
}

} // namespace faith
