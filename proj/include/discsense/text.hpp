#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace discsense::text {

// ASCII-only case folding; bytes >= 0x80 pass through untouched.
std::string to_lower(std::string_view s);

std::string_view trim(std::string_view s);

// Collapses runs of whitespace to a single space and trims the ends.
std::string normalize_space(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

// Letters, digits, apostrophe, hyphen and any non-ASCII byte.
bool is_word_byte(unsigned char c);

bool is_space(unsigned char c);

// Replaces tabs, CR and LF with a single space so a value fits one TSV cell.
std::string sanitize_field(std::string_view s);

// Word tokens: maximal runs of word bytes, lowercased. Punctuation is dropped.
std::vector<std::string> words(std::string_view s);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

double parse_double(std::string_view s);

bool parse_size(std::string_view s, std::size_t& out);

} // namespace discsense::text
