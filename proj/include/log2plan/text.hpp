#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the matcher, embedder and grounder.
namespace log2plan::text {

std::string lower(std::string_view s);
std::string trim(std::string_view s);

// Lowercase alphanumeric runs; everything else separates tokens.
std::vector<std::string> tokens(std::string_view s);

// Lowercase, non-alphanumerics collapsed to single spaces, trimmed.
std::string normalize(std::string_view s);

bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);

std::size_t edit_distance(std::string_view a, std::string_view b);

std::uint64_t fnv1a64(std::string_view s);
std::uint32_t fnv1a32(std::string_view s);
std::string hex64(std::uint64_t v);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// "name.ext" with a 1-5 character alphanumeric extension.
bool has_extension(std::string_view s);

// True for strings of the form "<...>", used as user-assist placeholders.
bool is_placeholder(std::string_view s);

}  // namespace log2plan::text
