#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace faith {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// 64-bit FNV-1a, used for seed derivation in mocks and stage seeds.
std::uint64_t fnv1a64(std::string_view data);

/// Stable seed for (base, purpose...) combinations.
std::int64_t derive_seed(std::int64_t base, std::string_view purpose);

/// ISO-8601 UTC timestamp, second resolution.
std::string utc_timestamp();

} // namespace faith
