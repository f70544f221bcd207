#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gene_atlas::text {

// All functions take and return UTF-8. Ill-formed input is repaired with
// U+FFFD rather than rejected.

std::string nfc(std::string_view utf8);

// Trim, and replace every run of Unicode whitespace with one ASCII space.
std::string collapse_whitespace(std::string_view utf8);

// NFC followed by whitespace collapsing; the equality key for narratives.
std::string normalize_narrative(std::string_view utf8);

// NFC, then full Unicode case folding.
std::string fold_case(std::string_view utf8);

std::string to_lower(std::string_view utf8);

std::size_t codepoint_count(std::string_view utf8);

// Unicode-lowercase, split on every non-alphanumeric codepoint. Runs that
// contain CJK codepoints additionally yield each CJK codepoint as its own
// token, directly after the run token.
std::vector<std::string> tokenize(std::string_view utf8);

// Query form of tokenize(): a run made up only of CJK codepoints yields just
// its single-codepoint tokens, so "苗族" matches text containing "苗族服饰".
std::vector<std::string> tokenize_query(std::string_view utf8);

// Case-insensitive containment after NFC.
bool contains_folded(std::string_view haystack, std::string_view needle);

// True if `haystack` contains some contiguous run of at least `min_length`
// codepoints of `source` (or all of `source` if it is shorter), comparing
// case-insensitively after NFC and whitespace collapsing.
bool contains_excerpt(std::string_view haystack, std::string_view source, std::size_t min_length);

}  // namespace gene_atlas::text
