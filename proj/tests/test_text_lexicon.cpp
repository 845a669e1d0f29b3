#include "discsense/error.hpp"
#include "discsense/lexicon.hpp"
#include "discsense/text.hpp"
#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace discsense;

TEST_CASE("text helpers") {
    CHECK(text::to_lower("HeLLo, Wörld") == "hello, wörld");
    CHECK(text::trim("  a b \t\n") == "a b");
    CHECK(text::normalize_space("  a \t b\n\nc ") == "a b c");
    CHECK(text::sanitize_field("a\tb\r\nc") == "a b  c");
    CHECK(text::words("Don't stop-now, OK?") == std::vector<std::string>{"don't", "stop-now", "ok"});
    CHECK(text::split("a,,b", ',').size() == 3);

    for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 123456789.123456789}) {
        CHECK(text::parse_double(text::format_double(v)) == v);
    }
    CHECK_THROWS_AS(text::parse_double("abc"), std::invalid_argument);
    CHECK_THROWS_AS(text::parse_double("1.5x"), std::invalid_argument);
    std::size_t n = 0;
    CHECK(text::parse_size("42", n));
    CHECK(n == 42);
    CHECK_FALSE(text::parse_size("-1", n));
    CHECK_FALSE(text::parse_size("", n));
}

TEST_CASE("bundled lexicon has 174 unique markers and NONE last") {
    const auto lex = MarkerLexicon::discovery_default();
    CHECK(lex.size() == 174);
    const auto classes = lex.class_names();
    CHECK(classes.size() == 175);
    CHECK(classes.back() == "NONE");
    CHECK(lex.contains("undoubtedly,"));
    CHECK(lex.contains("but"));
    CHECK_FALSE(lex.contains("NONE"));
    const auto& v = lex.variants_by_length();
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i - 1].text.size() >= v[i].text.size());
}

TEST_CASE("lexicon construction rejects bad entries") {
    CHECK_THROWS_AS(MarkerLexicon({{"but", {}}, {"but", {}}}), ConfigError);
    CHECK_THROWS_AS(MarkerLexicon(std::vector<MarkerEntry>{{"NONE", {}}}), ConfigError);
    CHECK_THROWS_AS(MarkerLexicon(std::vector<MarkerEntry>{{"", {}}}), ConfigError);
    CHECK_THROWS_AS(MarkerLexicon({{"but", {"yet"}}, {"yet,", {}}}), ConfigError);
    CHECK_THROWS_AS(MarkerLexicon::discovery_default().subset({"not a marker"}), ConfigError);
}

TEST_CASE("lexicon file round trip and parse errors") {
    std::istringstream in("# comment\n\nhowever\n in contrast,\tby contrast, in comparison\nbut\n");
    const auto lex = MarkerLexicon::parse(in);
    REQUIRE(lex.size() == 3);
    CHECK(lex.entries()[1].canonical == "in contrast,");
    CHECK(lex.entries()[1].variants == std::vector<std::string>{"in contrast", "by contrast", "in comparison"});

    testing::TempDir dir;
    lex.save(dir / "lex.txt");
    const auto back = MarkerLexicon::load(dir / "lex.txt");
    CHECK(back.class_names() == lex.class_names());
    for (std::size_t i = 0; i < lex.size(); ++i) CHECK(back.entries()[i].variants == lex.entries()[i].variants);

    std::istringstream bad("but\na\tb\tc\n");
    try {
        MarkerLexicon::parse(bad, "bad.txt");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("bad.txt:2:") == 0);
    }
    CHECK_THROWS_AS(MarkerLexicon::load("/nonexistent/lexicon.txt"), Error);
}

TEST_CASE("subset keeps lexicon order") {
    const auto sub = MarkerLexicon::discovery_default().subset({"unfortunately,", "but", "sadly,"});
    CHECK(sub.class_names() == std::vector<std::string>{"but", "sadly,", "unfortunately,", "NONE"});
}

TEST_CASE("match_marker on documented examples") {
    const auto lex = MarkerLexicon::discovery_default();
    auto m = match_marker("Undoubtedly, that depends on the person.", lex);
    REQUIRE(m);
    CHECK(m->marker == "undoubtedly,");
    CHECK(m->stripped == "that depends on the person.");

    CHECK_FALSE(match_marker("that depends on the person.", lex));

    m = match_marker("In contrast, sales fell.", lex);
    REQUIRE(m);
    CHECK(*m == MarkerMatch{"in contrast,", "sales fell."});

    CHECK_FALSE(match_marker("", lex));
    CHECK_FALSE(match_marker("   ", lex));
}

TEST_CASE("match_marker with variants") {
    std::istringstream in("in contrast,\tby contrast\nbut\n");
    const auto lex = MarkerLexicon::parse(in);
    auto m = match_marker("By contrast, prices rose.", lex);
    REQUIRE(m);
    CHECK(m->marker == "in contrast,");
    CHECK_FALSE(match_marker("By contrast prices rose.", lex));
}

TEST_CASE("match_marker agrees with the 200-sentence hand-labeled fixture") {
    const auto lex = MarkerLexicon::discovery_default();
    std::ifstream in(testing::data_path("marker_fixture.tsv"));
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        auto f = text::split(line, '\t');
        REQUIRE(f.size() == 3);
        ++rows;
        const auto got = match_marker(f[0], lex);
        CAPTURE(line);
        if (f[1] == "-") {
            CHECK_FALSE(got);
        } else {
            REQUIRE(got);
            CHECK(got->marker == f[1]);
            CHECK(got->stripped == f[2]);
        }
    }
    CHECK(rows == 200);
}

TEST_CASE("every bundled marker matches its own canonical form") {
    const auto lex = MarkerLexicon::discovery_default();
    for (const auto& e : lex.entries()) {
        const std::string sentence = e.canonical + " the rest follows.";
        auto got = match_marker(sentence, lex);
        CAPTURE(sentence);
        REQUIRE(got);
        CHECK(got->marker == e.canonical);
        CHECK(got->stripped == "the rest follows.");
    }
}
