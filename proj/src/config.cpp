#include "faith/config.hpp"

#include "faith/digest.hpp"
#include "faith/error.hpp"
#include "faith/text.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace faith {

namespace {

using Scalar = TomlValue::Scalar;

[[noreturn]] void toml_error(std::size_t line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;
    std::size_t line = 0;
    /// Remaining lines, for arrays that span several lines.
    const std::vector<std::string>* lines = nullptr;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }

    /// Skip blanks, comments and line breaks; false at end of input.
    bool skip_blank_lines() {
        while (true) {
            skip_ws();
            if (!done() && peek() != '#') return true;
            if (!lines || line >= lines->size()) return false;
            s = (*lines)[line++];
            pos = 0;
        }
    }
};

std::string parse_basic_string(Cursor& c) {
    ++c.pos; // opening quote
    std::string out;
    while (!c.done() && c.peek() != '"') {
        char ch = c.s[c.pos++];
        if (ch == '\\') {
            if (c.done()) toml_error(c.line, "dangling escape");
            const char e = c.s[c.pos++];
            switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            default: toml_error(c.line, std::string("unsupported escape \\") + e);
            }
        } else {
            out += ch;
        }
    }
    if (c.done()) toml_error(c.line, "unterminated string");
    ++c.pos;
    return out;
}

std::string parse_literal_string(Cursor& c) {
    ++c.pos;
    const auto end = c.s.find('\'', c.pos);
    if (end == std::string_view::npos) toml_error(c.line, "unterminated string");
    std::string out(c.s.substr(c.pos, end - c.pos));
    c.pos = end + 1;
    return out;
}

Scalar parse_scalar(Cursor& c) {
    c.skip_ws();
    if (c.peek() == '"') return parse_basic_string(c);
    if (c.peek() == '\'') return parse_literal_string(c);
    const auto start = c.pos;
    while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#' && c.peek() != ' ' &&
           c.peek() != '\t')
        ++c.pos;
    std::string tok(c.s.substr(start, c.pos - start));
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string digits;
    for (char ch : tok)
        if (ch != '_') digits += ch;
    std::int64_t iv = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), iv);
    if (ec == std::errc{} && p == digits.data() + digits.size() && !digits.empty()) return iv;
    try {
        std::size_t used = 0;
        const double dv = std::stod(digits, &used);
        if (used == digits.size()) return dv;
    } catch (const std::exception&) {
    }
    toml_error(c.line, "cannot parse value '" + tok + "'");
}

TomlValue parse_value(Cursor& c) {
    c.skip_ws();
    if (c.peek() != '[') return TomlValue{parse_scalar(c)};
    ++c.pos;
    std::vector<Scalar> items;
    while (true) {
        if (!c.skip_blank_lines()) toml_error(c.line, "unterminated array");
        if (c.peek() == ']') {
            ++c.pos;
            break;
        }
        items.push_back(parse_scalar(c));
        if (!c.skip_blank_lines()) toml_error(c.line, "unterminated array");
        if (c.peek() == ',') ++c.pos;
        else if (c.peek() != ']') toml_error(c.line, "expected ',' or ']' in array");
    }
    return TomlValue{std::move(items)};
}

std::string bare_key(std::string_view k, std::size_t line) {
    auto key = text::trim(k);
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (key.empty()) toml_error(line, "empty key");
    for (char ch : key) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.'))
            toml_error(line, "invalid key '" + key + "'");
    }
    return key;
}

template <typename T>
const T& scalar_as(const TomlValue& v, const char* what) {
    const auto* s = std::get_if<Scalar>(&v.value);
    if (!s) throw ConfigError(std::string("expected ") + what + ", got array");
    const auto* t = std::get_if<T>(s);
    if (!t) throw ConfigError(std::string("expected ") + what);
    return *t;
}

} // namespace

std::string TomlValue::as_string() const { return scalar_as<std::string>(*this, "string"); }
std::int64_t TomlValue::as_int() const { return scalar_as<std::int64_t>(*this, "integer"); }
bool TomlValue::as_bool() const { return scalar_as<bool>(*this, "boolean"); }

double TomlValue::as_double() const {
    if (const auto* s = std::get_if<Scalar>(&value)) {
        if (const auto* i = std::get_if<std::int64_t>(s)) return static_cast<double>(*i);
    }
    return scalar_as<double>(*this, "number");
}

std::vector<std::string> TomlValue::as_string_list() const {
    if (const auto* s = std::get_if<Scalar>(&value)) {
        // a single comma-separated string is accepted too
        const auto* str = std::get_if<std::string>(s);
        if (!str) throw ConfigError("expected string list");
        std::vector<std::string> out;
        std::stringstream ss(*str);
        for (std::string item; std::getline(ss, item, ',');) {
            item = text::trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }
    std::vector<std::string> out;
    for (const auto& item : std::get<std::vector<Scalar>>(value)) {
        const auto* str = std::get_if<std::string>(&item);
        if (!str) throw ConfigError("expected string list");
        out.push_back(*str);
    }
    return out;
}

TomlTable parse_toml(std::string_view text) {
    TomlTable table;
    std::string section;
    const auto lines = text::split_lines(text);
    std::size_t next = 0;
    while (next < lines.size()) {
        const std::string& raw = lines[next];
        const std::size_t lineno = ++next;
        Cursor c{raw, 0, lineno, &lines};
        c.skip_ws();
        if (c.done() || c.peek() == '#') continue;
        if (c.peek() == '[') {
            const auto close = raw.find(']', c.pos);
            if (close == std::string::npos) toml_error(lineno, "unterminated table header");
            section = bare_key(std::string_view(raw).substr(c.pos + 1, close - c.pos - 1), lineno);
            const auto rest = text::trim(std::string_view(raw).substr(close + 1));
            if (!rest.empty() && rest[0] != '#') toml_error(lineno, "trailing characters after header");
            continue;
        }
        const auto eq = raw.find('=');
        if (eq == std::string::npos) toml_error(lineno, "expected key = value");
        const auto key = bare_key(std::string_view(raw).substr(0, eq), lineno);
        c.pos = eq + 1;
        auto value = parse_value(c);
        next = c.line; // a multi-line array consumed further lines
        c.skip_ws();
        if (!c.done() && c.peek() != '#') toml_error(c.line, "trailing characters after value");
        const auto full = section.empty() ? key : section + "." + key;
        if (table.count(full)) toml_error(lineno, "duplicate key '" + full + "'");
        table.emplace(full, std::move(value));
    }
    return table;
}

TomlTable load_toml(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_toml(ss.str());
}

// ---------------------------------------------------------------------------

std::string_view to_string(EndpointKind k) {
    switch (k) {
    case EndpointKind::Chat: return "chat";
    case EndpointKind::Classifier: return "classifier";
    case EndpointKind::Mock: return "mock";
    case EndpointKind::JudgeFallback: return "judge-fallback";
    }
    return "?";
}

EndpointKind parse_endpoint_kind(std::string_view s) {
    for (auto k : {EndpointKind::Chat, EndpointKind::Classifier, EndpointKind::Mock, EndpointKind::JudgeFallback})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown endpoint kind '" + std::string(s) + "'");
}

std::string EndpointConfig::identity() const {
    return std::string(to_string(kind)) + "|" + base_url + "|" + model;
}

EndpointConfig parse_endpoint_spec(std::string_view spec) {
    EndpointConfig ep;
    const auto s = text::trim(spec);
    if (s == "mock") {
        ep.kind = EndpointKind::Mock;
        return ep;
    }
    if (s == "judge-fallback") {
        ep.kind = EndpointKind::JudgeFallback;
        return ep;
    }
    std::string rest = s;
    if (text::starts_with_ci(rest, "classifier:")) {
        ep.kind = EndpointKind::Classifier;
        ep.base_url = rest.substr(11);
        if (ep.base_url.empty()) throw ConfigError("classifier endpoint needs a URL");
        return ep;
    }
    if (text::starts_with_ci(rest, "chat:")) rest = rest.substr(5);
    const auto at = rest.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 == rest.size())
        throw ConfigError("endpoint '" + s + "' is not of the form <url>@<model>");
    ep.kind = EndpointKind::Chat;
    ep.base_url = rest.substr(0, at);
    ep.model = rest.substr(at + 1);
    return ep;
}

std::pair<ModelRole, EndpointConfig> parse_model_role(std::string_view arg) {
    const auto eq = arg.find('=');
    if (eq == std::string_view::npos) throw ConfigError("--model-role expects <role>=<endpoint>");
    ModelRole role;
    try {
        role = parse_role(text::trim(arg.substr(0, eq)));
    } catch (const std::exception&) {
        throw ConfigError("unknown role '" + text::trim(arg.substr(0, eq)) + "'");
    }
    return {role, parse_endpoint_spec(arg.substr(eq + 1))};
}

std::string_view to_string(MockEvaluee m) {
    switch (m) {
    case MockEvaluee::Realistic: return "realistic";
    case MockEvaluee::EvidenceFollowing: return "evidence-following";
    case MockEvaluee::MemoryClinging: return "memory-clinging";
    }
    return "?";
}

MockEvaluee parse_mock_evaluee(std::string_view s) {
    for (auto m : {MockEvaluee::Realistic, MockEvaluee::EvidenceFollowing, MockEvaluee::MemoryClinging})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown mock evaluee '" + std::string(s) + "'");
}

std::string_view to_string(MockReplyFormat f) {
    switch (f) {
    case MockReplyFormat::Mixed: return "mixed";
    case MockReplyFormat::Letter: return "letter";
    case MockReplyFormat::Text: return "text";
    }
    return "?";
}

MockReplyFormat parse_mock_reply_format(std::string_view s) {
    for (auto f : {MockReplyFormat::Mixed, MockReplyFormat::Letter, MockReplyFormat::Text})
        if (to_string(f) == s) return f;
    throw ConfigError("unknown mock reply format '" + std::string(s) + "'");
}

RunConfig config_from_toml(const TomlTable& t) {
    RunConfig cfg;
    std::set<std::string> used;
    auto get = [&](const std::string& key) -> const TomlValue* {
        auto it = t.find(key);
        if (it == t.end()) return nullptr;
        used.insert(key);
        return &it->second;
    };
    auto wrap = [](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            throw ConfigError(key + ": " + e.what());
        } catch (const std::exception& e) {
            throw ConfigError(key + ": " + e.what());
        }
    };

    if (auto v = get("run.dataset")) wrap("run.dataset", [&] { cfg.dataset = v->as_string(); });
    if (auto v = get("run.kind")) wrap("run.kind", [&] { cfg.kind = parse_dataset(v->as_string()); });
    if (auto v = get("run.n")) wrap("run.n", [&] { cfg.n = static_cast<std::size_t>(std::max<std::int64_t>(0, v->as_int())); });
    if (auto v = get("run.max_regen")) wrap("run.max_regen", [&] { cfg.max_regen = static_cast<int>(v->as_int()); });
    if (auto v = get("run.parallelism")) wrap("run.parallelism", [&] { cfg.parallelism = static_cast<int>(v->as_int()); });
    if (auto v = get("run.cache")) wrap("run.cache", [&] { cfg.cache = v->as_string(); });
    if (auto v = get("run.out")) wrap("run.out", [&] { cfg.out = v->as_string(); });
    if (auto v = get("run.seed")) wrap("run.seed", [&] { cfg.seed = v->as_int(); });
    if (auto v = get("run.model_label")) wrap("run.model_label", [&] { cfg.model_label = v->as_string(); });
    if (auto v = get("run.styles")) wrap("run.styles", [&] {
        cfg.styles.clear();
        for (const auto& s : v->as_string_list()) cfg.styles.push_back(parse_style(s));
    });
    if (auto v = get("run.orders")) wrap("run.orders", [&] {
        cfg.orders.clear();
        for (const auto& s : v->as_string_list()) cfg.orders.push_back(parse_order(s));
    });
    if (auto v = get("stage.conflict.max_attempts"))
        wrap("stage.conflict.max_attempts", [&] { cfg.cma_attempts = static_cast<int>(v->as_int()); });
    if (auto v = get("stage.evidence.max_attempts"))
        wrap("stage.evidence.max_attempts", [&] { cfg.evidence_attempts = static_cast<int>(v->as_int()); });

    for (auto role : {ModelRole::Generator, ModelRole::Evaluee, ModelRole::Judge, ModelRole::Entailer}) {
        const auto prefix = "role." + std::string(to_string(role)) + ".";
        bool any = false;
        for (const auto& [k, _] : t) any = any || k.rfind(prefix, 0) == 0;
        if (!any) continue;
        EndpointConfig ep;
        auto key = [&](const char* k) { return prefix + k; };
        if (auto v = get(key("kind"))) wrap(key("kind"), [&] { ep.kind = parse_endpoint_kind(v->as_string()); });
        if (auto v = get(key("base_url"))) wrap(key("base_url"), [&] { ep.base_url = v->as_string(); });
        if (auto v = get(key("model"))) wrap(key("model"), [&] { ep.model = v->as_string(); });
        if (auto v = get(key("token_env"))) wrap(key("token_env"), [&] { ep.token_env = v->as_string(); });
        if (auto v = get(key("max_retries"))) wrap(key("max_retries"), [&] { ep.max_retries = static_cast<int>(v->as_int()); });
        if (auto v = get(key("backoff_ms"))) wrap(key("backoff_ms"), [&] { ep.backoff_ms = static_cast<int>(v->as_int()); });
        if (auto v = get(key("parallelism"))) wrap(key("parallelism"), [&] { ep.parallelism = static_cast<int>(v->as_int()); });
        if (auto v = get(key("timeout_s"))) wrap(key("timeout_s"), [&] { ep.timeout_s = static_cast<int>(v->as_int()); });
        cfg.roles[role] = ep;
    }
    if (cfg.roles.count(ModelRole::Entailer) && cfg.roles[ModelRole::Entailer].kind == EndpointKind::JudgeFallback)
        cfg.entailment = EntailmentMode::JudgeFallback;

    if (auto v = get("mock.seed")) wrap("mock.seed", [&] { cfg.mock.seed = v->as_int(); });
    if (auto v = get("mock.evaluee")) wrap("mock.evaluee", [&] { cfg.mock.evaluee = parse_mock_evaluee(v->as_string()); });
    if (auto v = get("mock.reply_format"))
        wrap("mock.reply_format", [&] { cfg.mock.reply_format = parse_mock_reply_format(v->as_string()); });

    for (const auto& [k, _] : t) {
        if (!used.count(k)) throw ConfigError("unknown config key '" + k + "'");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return config_from_toml(load_toml(path)); }

void use_mock_roles(RunConfig& cfg) {
    for (auto role : {ModelRole::Generator, ModelRole::Evaluee, ModelRole::Judge, ModelRole::Entailer})
        cfg.roles[role] = EndpointConfig{};
    cfg.entailment = EntailmentMode::Classifier;
}

void validate_config(const RunConfig& cfg, bool needs_dataset) {
    if (cfg.n < 2) throw ConfigError("n must be >= 2 (got " + std::to_string(cfg.n) + ")");
    if (cfg.max_regen < 1) throw ConfigError("max_regen must be >= 1");
    if (cfg.cma_attempts < 1 || cfg.evidence_attempts < 1) throw ConfigError("attempt limits must be >= 1");
    if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");
    if (cfg.styles.empty()) throw ConfigError("no evidence styles selected");
    if (cfg.orders.empty()) throw ConfigError("no option orders selected");
    if (needs_dataset) {
        std::error_code ec;
        if (cfg.dataset.empty() || !std::filesystem::is_regular_file(cfg.dataset, ec))
            throw ConfigError("dataset '" + cfg.dataset.string() + "' is not a readable file");
    }
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw ConfigError("cannot create output directory '" + cfg.out.string() + "': " + ec.message());
    for (auto role : {ModelRole::Generator, ModelRole::Evaluee, ModelRole::Judge, ModelRole::Entailer}) {
        if (!cfg.roles.count(role)) throw ConfigError("no endpoint configured for role " + std::string(to_string(role)));
    }
    if (cfg.roles.at(ModelRole::Entailer).kind == EndpointKind::Chat)
        throw ConfigError("entailer must be a classifier, mock or judge-fallback endpoint");
}

std::string config_digest(const RunConfig& cfg) {
    nlohmann::json j;
    std::string content;
    if (!cfg.dataset.empty()) {
        std::ifstream in(cfg.dataset, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        content = sha256_hex(ss.str());
    }
    j["dataset"] = content;
    j["kind"] = to_string(cfg.kind);
    for (const auto& [role, ep] : cfg.roles) j["roles"][std::string(to_string(role))] = ep.identity();
    j["entailment"] = cfg.entailment == EntailmentMode::Classifier ? "classifier" : "judge-fallback";
    j["n"] = cfg.n;
    j["max_regen"] = cfg.max_regen;
    j["cma_attempts"] = cfg.cma_attempts;
    j["evidence_attempts"] = cfg.evidence_attempts;
    for (const auto& s : cfg.styles) j["styles"].push_back(s.label());
    for (auto o : cfg.orders) j["orders"].push_back(to_string(o));
    j["seed"] = cfg.seed;
    j["model_label"] = cfg.model_label;
    j["mock"] = {{"seed", cfg.mock.seed},
                 {"evaluee", to_string(cfg.mock.evaluee)},
                 {"reply_format", to_string(cfg.mock.reply_format)}};
    j["template_version"] = kTemplateVersion;
    return sha256_hex(j.dump());
}

} // namespace faith
