#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace discsense {

inline constexpr std::string_view kNoneClass = "NONE";

struct MarkerEntry {
    // Lowercase; a trailing comma means the comma is part of the marker usage.
    std::string canonical;
    // Comma-free lowercase surface forms. Always includes the canonical form
    // without its trailing comma.
    std::vector<std::string> variants;
};

// Canonical discourse markers and the surface forms that realize them. The
// entry order fixes the class index of every marker; NONE is appended last
// by class_names() and is never an entry.
class MarkerLexicon {
public:
    MarkerLexicon() = default;
    explicit MarkerLexicon(std::vector<MarkerEntry> entries);

    // The bundled 174-marker inventory.
    static MarkerLexicon discovery_default();

    // Line format: canonical[<TAB>variant,variant,...]. Blank lines and lines
    // starting with '#' are ignored.
    static MarkerLexicon parse(std::istream& in, const std::string& source_name = "<lexicon>");
    static MarkerLexicon load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
    void write(std::ostream& out) const;

    // Keeps only the named canonical markers, in lexicon order.
    MarkerLexicon subset(const std::vector<std::string>& canonicals) const;

    const std::vector<MarkerEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool contains(std::string_view canonical) const;

    // Markers in lexicon order followed by "NONE".
    std::vector<std::string> class_names() const;

    struct Variant {
        std::string text;
        std::size_t entry;
        bool comma_required;
    };
    // All variants, longest first (ties broken by text).
    const std::vector<Variant>& variants_by_length() const noexcept { return variants_; }

private:
    std::vector<MarkerEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Variant> variants_;
};

struct MarkerMatch {
    std::string marker;   // canonical form
    std::string stripped; // sentence with the marker prefix removed
    bool operator==(const MarkerMatch&) const = default;
};

// Longest lexicon variant found case-insensitively at the start of the
// sentence on a token boundary. The prefix, a following comma and the
// whitespace after it are removed. Returns nothing if no variant matches or
// if the remainder has no letters or digits.
std::optional<MarkerMatch> match_marker(std::string_view sentence, const MarkerLexicon& lexicon);

} // namespace discsense
