#include "discsense/segmenter.hpp"

#include "discsense/text.hpp"

#include <algorithm>
#include <array>

namespace discsense {

namespace {

// Lowercase, without the final period. Kept sorted for binary search.
constexpr std::array<std::string_view, 35> kAbbreviations = {
    "a.m",  "al",   "approx", "apr",  "aug",  "ave",  "capt", "cf",  "co",  "col",
    "corp", "dec",  "dept",   "dr",   "e.g",  "feb",  "fig", "gen", "gov",
    "i.e",  "inc",  "jan",    "jr",   "lt",   "ltd",  "mr",   "mrs", "ms",  "mt",
    "nov",  "oct",    "p.m",  "prof", "sr",   "vs",
};

bool is_terminal(char c) { return c == '.' || c == '?' || c == '!'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

} // namespace

bool is_abbreviation(std::string_view token) {
    std::string t = text::to_lower(token);
    while (!t.empty() && (t.front() == '(' || t.front() == '"' || t.front() == '\'')) t.erase(t.begin());
    if (!t.empty() && t.back() == '.') t.pop_back();
    return std::binary_search(kAbbreviations.begin(), kAbbreviations.end(), std::string_view(t));
}

std::vector<std::string> segment_sentences(std::string_view input) {
    std::vector<std::string> sentences;
    auto emit = [&](std::size_t b, std::size_t e) {
        std::string s = text::normalize_space(input.substr(b, e - b));
        if (!s.empty()) sentences.push_back(std::move(s));
    };

    std::size_t start = 0;
    std::size_t i = 0;
    while (i < input.size()) {
        if (!is_terminal(input[i])) {
            ++i;
            continue;
        }
        const std::size_t run_begin = i;
        while (i < input.size() && is_terminal(input[i])) ++i;
        while (i < input.size() && is_closer(input[i])) ++i;
        const bool at_boundary = i == input.size() || text::is_space(static_cast<unsigned char>(input[i]));
        if (!at_boundary) continue;

        // A lowercase continuation means the punctuation was sentence-internal.
        std::size_t next = i;
        while (next < input.size() && text::is_space(static_cast<unsigned char>(input[next]))) ++next;
        if (next < input.size() && input[next] >= 'a' && input[next] <= 'z') continue;

        if (i - run_begin == 1 && input[run_begin] == '.') {
            std::size_t tok = run_begin;
            while (tok > start && !text::is_space(static_cast<unsigned char>(input[tok - 1]))) --tok;
            if (is_abbreviation(input.substr(tok, run_begin + 1 - tok))) continue;
        }
        emit(start, i);
        start = i;
    }
    emit(start, input.size());
    return sentences;
}

} // namespace discsense
