#include "discsense/corpus.hpp"

#include "discsense/error.hpp"
#include "discsense/segmenter.hpp"
#include "discsense/text.hpp"

#include <fstream>
#include <sstream>

namespace discsense {

namespace {

constexpr std::string_view kDocPrefix = "# doc:";

bool is_doc_separator(std::string_view line) { return line.substr(0, kDocPrefix.size()) == kDocPrefix; }

void check_doc_id(const std::string& id, const std::string& source, std::size_t line) {
    if (id.empty()) throw ParseError(source, line, "empty document id");
    for (char c : id) {
        if (c == '\t' || c == ':') throw ParseError(source, line, "document id may not contain tab or ':' (" + id + ")");
    }
}

} // namespace

std::vector<Document> parse_plain_corpus(std::string_view input, std::string_view id_prefix) {
    std::vector<Document> docs;
    std::string block;
    auto flush = [&] {
        auto sentences = segment_sentences(block);
        block.clear();
        if (sentences.empty()) return;
        docs.push_back({std::string(id_prefix) + "-" + std::to_string(docs.size()), std::move(sentences)});
    };
    for (auto line : text::split(input, '\n')) {
        if (text::trim(line).empty()) {
            flush();
        } else {
            block.append(line);
            block.push_back('\n');
        }
    }
    flush();
    return docs;
}

std::vector<Document> parse_presegmented_corpus(std::istream& in, const std::string& source_name) {
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_doc_separator(line)) {
            std::string id(text::trim(std::string_view(line).substr(kDocPrefix.size())));
            check_doc_id(id, source_name, line_no);
            docs.push_back({std::move(id), {}});
            continue;
        }
        std::string sentence = text::normalize_space(line);
        if (sentence.empty()) continue;
        if (docs.empty()) throw ParseError(source_name, line_no, "sentence before the first '# doc:' line");
        docs.back().sentences.push_back(std::move(sentence));
    }
    return docs;
}

std::vector<Document> read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();

    bool presegmented = is_doc_separator(content) || content.find("\n# doc:") != std::string::npos;
    if (presegmented) {
        std::istringstream stream(content);
        return parse_presegmented_corpus(stream, path.string());
    }
    return parse_plain_corpus(content, path.stem().string());
}

void write_presegmented_corpus(std::ostream& out, const std::vector<Document>& docs) {
    for (const auto& d : docs) {
        out << kDocPrefix << ' ' << d.doc_id << '\n';
        for (const auto& s : d.sentences) out << text::normalize_space(s) << '\n';
    }
}

} // namespace discsense
