#include "faith/cache.hpp"

#include "faith/digest.hpp"

#include <json.hpp>

#include <fstream>

namespace faith {

std::string cache_key(const CompletionRequest& req, std::string_view endpoint_identity) {
    nlohmann::json j{
        {"role", to_string(req.role)},
        {"endpoint", endpoint_identity},
        {"template", req.prompt.template_name},
        {"template_version", req.prompt.template_version},
        {"prompt", req.prompt.text},
        {"temperature", req.decode.temperature},
        {"max_tokens", req.decode.max_tokens},
        {"seed", req.decode.seed ? nlohmann::json(*req.decode.seed) : nlohmann::json()},
    };
    return sha256_hex(j.dump());
}

CallCache::CallCache(std::filesystem::path path) : path_(std::move(path)) {
    if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
    std::ifstream in(*path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // a torn final line from an interrupted run is skipped
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("key") || !j.contains("value")) continue;
        CallCacheEntry e{j["key"].get<std::string>(), j["value"].get<std::string>(),
                         j.value("created_at", std::string{}), j.value("template_version", std::string{})};
        entries_.emplace(e.key, std::move(e));
    }
}

std::optional<std::string> CallCache::get(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
}

void CallCache::put(const std::string& key, const std::string& value, std::string_view template_version) {
    std::lock_guard lock(mu_);
    if (entries_.contains(key)) return;
    CallCacheEntry e{key, value, utc_timestamp(), std::string(template_version)};
    if (path_) {
        std::ofstream out(*path_, std::ios::app);
        nlohmann::json j{{"key", e.key},
                         {"value", e.value},
                         {"created_at", e.created_at},
                         {"template_version", e.template_version}};
        out << j.dump() << '\n';
    }
    entries_.emplace(key, std::move(e));
}

std::size_t CallCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

} // namespace faith
