#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace discsense {

// Rule-based sentence splitter: a sentence ends at a run of '.', '?' or '!'
// (plus closing quotes/brackets) followed by whitespace or end of text,
// unless the period closes a known abbreviation or the next word starts with
// a lowercase letter. Whitespace inside a sentence is collapsed to single
// spaces.
std::vector<std::string> segment_sentences(std::string_view text);

bool is_abbreviation(std::string_view token);

} // namespace discsense
