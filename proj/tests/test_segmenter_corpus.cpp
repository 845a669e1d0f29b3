#include "discsense/corpus.hpp"
#include "discsense/error.hpp"
#include "discsense/segmenter.hpp"
#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace discsense;
using Sentences = std::vector<std::string>;

namespace {

struct SegmentCase {
    std::string raw;
    Sentences expected;
};

std::vector<SegmentCase> load_segment_cases() {
    std::ifstream in(testing::data_path("segmenter_fixture.txt"));
    std::vector<SegmentCase> cases;
    SegmentCase cur;
    bool in_expected = false;
    std::string line;
    auto flush = [&] {
        if (!cur.raw.empty()) cases.push_back(cur);
        cur = {};
        in_expected = false;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        if (line.empty()) {
            flush();
        } else if (line == "=>") {
            in_expected = true;
        } else if (in_expected) {
            cur.expected.push_back(line);
        } else {
            cur.raw += (cur.raw.empty() ? "" : "\n") + line;
        }
    }
    flush();
    return cases;
}

} // namespace

TEST_CASE("segmenter documented examples") {
    CHECK(segment_sentences("").empty());
    CHECK(segment_sentences("Which is best? Undoubtedly, that depends on the person.") ==
          Sentences{"Which is best?", "Undoubtedly, that depends on the person."});
    CHECK(segment_sentences("A. B. C.") == Sentences{"A.", "B.", "C."});
}

TEST_CASE("segmenter matches the hand-segmented fixture") {
    const auto cases = load_segment_cases();
    std::size_t sentences = 0;
    for (const auto& c : cases) {
        CAPTURE(c.raw);
        CHECK(segment_sentences(c.raw) == c.expected);
        sentences += c.expected.size();
    }
    CHECK(sentences == 50);
}

TEST_CASE("segmenter output is non-empty, trimmed and loses no words") {
    const std::string text = "  One two.  Three?! \"Four\" five...  six  ";
    const auto s = segment_sentences(text);
    std::string joined;
    for (const auto& x : s) {
        CHECK_FALSE(x.empty());
        CHECK(x.front() != ' ');
        CHECK(x.back() != ' ');
        joined += (joined.empty() ? "" : " ") + x;
    }
    CHECK(joined == "One two. Three?! \"Four\" five... six");
}

TEST_CASE("abbreviations") {
    for (const char* a : {"Dr.", "mr.", "e.g.", "i.e.", "a.m.", "p.m.", "Inc.", "vs.", "(e.g.", "Prof."}) {
        CAPTURE(a);
        CHECK(is_abbreviation(a));
    }
    for (const char* a : {"A.", "etc.", "no.", "person.", "U.S."}) {
        CAPTURE(a);
        CHECK_FALSE(is_abbreviation(a));
    }
}

TEST_CASE("plain corpus: blank lines separate documents") {
    const auto docs = parse_plain_corpus("First one. Second\none.\n\n\n  \nThird here!\n", "web");
    REQUIRE(docs.size() == 2);
    CHECK(docs[0] == Document{"web-0", {"First one.", "Second one."}});
    CHECK(docs[1] == Document{"web-1", {"Third here!"}});
    CHECK(parse_plain_corpus("\n\n  \n", "x").empty());
}

TEST_CASE("pre-segmented corpus round trip") {
    const std::vector<Document> docs = {{"a", {"One.", "Two, with a comma."}}, {"b-2", {"Three?"}}};
    std::ostringstream out;
    write_presegmented_corpus(out, docs);
    std::istringstream in(out.str());
    CHECK(parse_presegmented_corpus(in, "mem") == docs);

    testing::TempDir dir;
    testing::write_file(dir / "c.txt", out.str());
    CHECK(read_corpus(dir / "c.txt") == docs);
}

TEST_CASE("pre-segmented corpus errors") {
    std::istringstream orphan("A sentence before any header.\n# doc: a\nOne.\n");
    CHECK_THROWS_AS(parse_presegmented_corpus(orphan, "mem"), ParseError);
    std::istringstream bad_id("# doc: a:b\nOne.\n");
    CHECK_THROWS_AS(parse_presegmented_corpus(bad_id, "mem"), ParseError);
    CHECK_THROWS_AS(read_corpus("/nonexistent/corpus.txt"), Error);
}

TEST_CASE("read_corpus detects plain text") {
    testing::TempDir dir;
    testing::write_file(dir / "p.txt", "Hello there. General Kenobi.\n\nBye.\n");
    const auto docs = read_corpus(dir / "p.txt");
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].sentences == Sentences{"Hello there.", "General Kenobi."});
}
