#pragma once

#include "faith/gateway_types.hpp"

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace faith {

struct CallCacheEntry {
    std::string key;
    std::string value;
    std::string created_at;
    std::string template_version;
};

/// Digest of everything that determines a response: role, the identity of
/// the endpoint serving that role, template name and version, rendered
/// prompt and decode parameters.
std::string cache_key(const CompletionRequest& req, std::string_view endpoint_identity);

/// Append-only call cache. With a path, entries are loaded on open and every
/// insert is appended as one JSONL line; without one it is memory-only.
class CallCache {
public:
    CallCache() = default;
    explicit CallCache(std::filesystem::path path);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& value, std::string_view template_version);

    std::size_t size() const;
    const std::optional<std::filesystem::path>& path() const { return path_; }

private:
    mutable std::mutex mu_;
    std::unordered_map<std::string, CallCacheEntry> entries_;
    std::optional<std::filesystem::path> path_;
};

} // namespace faith
