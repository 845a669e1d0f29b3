#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace discsense {

struct Document {
    std::string doc_id;
    std::vector<std::string> sentences;
    bool operator==(const Document&) const = default;
};

// Plain text: documents separated by blank lines, segmented with
// segment_sentences. Ids are "<prefix>-<n>" with n counting from 0.
std::vector<Document> parse_plain_corpus(std::string_view text, std::string_view id_prefix);

// One sentence per line; a line "# doc: <id>" starts a new document.
// Sentences before the first separator are an error.
std::vector<Document> parse_presegmented_corpus(std::istream& in, const std::string& source_name);

// Picks the format by looking for a "# doc:" line.
std::vector<Document> read_corpus(const std::filesystem::path& path);

void write_presegmented_corpus(std::ostream& out, const std::vector<Document>& docs);

} // namespace discsense
