#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by all modules. ASCII-only case folding.
namespace faith::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Lowercase, collapse runs of whitespace to one space, trim.
std::string normalize(std::string_view s);

/// Case-insensitive, whitespace-normalized substring test.
bool contains_normalized(std::string_view haystack, std::string_view needle);

/// Split on whitespace.
std::vector<std::string> split_whitespace(std::string_view s);

/// Lowercased alphanumeric word tokens ("Who's" -> "who", "s").
std::vector<std::string> word_tokens(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);

/// Strip leading/trailing punctuation (keeps inner characters).
std::string strip_punct(std::string_view s);

std::string replace_all(std::string s, std::string_view from, std::string_view to);

} // namespace faith::text
