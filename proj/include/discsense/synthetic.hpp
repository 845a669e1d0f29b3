#pragma once

#include "discsense/corpus.hpp"
#include "discsense/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace discsense {

// Seeded generator of marker-bearing text. Markers are grouped into
// relation families; a sentence continuing a marker carries cue words of its
// family and of the marker itself with fixed probabilities, and the sentence
// before it may carry a family setup cue. Everything else is drawn from a
// generic English vocabulary, so prediction is learnable but not trivial.
struct SyntheticLanguageConfig {
    std::size_t families = 6;
    double family_cue_rate = 0.8;
    double marker_cue_rate = 0.5;
    double setup_cue_rate = 0.5;
    std::uint64_t seed = 0;
};

struct SyntheticCorpusConfig {
    std::size_t documents = 1000;
    std::size_t min_sentences = 6;
    std::size_t max_sentences = 14;
    double marker_rate = 0.5;
    std::uint64_t seed = 0;
    std::string id_prefix = "syn";
};

class SyntheticLanguage {
public:
    SyntheticLanguage(std::vector<std::string> markers, SyntheticLanguageConfig cfg = {});

    const std::vector<std::string>& markers() const noexcept { return markers_; }
    std::size_t family_of(std::size_t marker) const { return marker % cfg_.families; }

    // Capitalized sentence with terminal punctuation and no marker.
    std::string filler_sentence(Rng& rng) const;
    // Sentence that may precede `marker`.
    std::string setup_sentence(std::size_t marker, Rng& rng) const;
    // Sentence body (lowercase start, terminal punctuation) that fits after `marker`.
    std::string continuation(std::size_t marker, Rng& rng) const;
    // "<Marker>[,] body" with the marker's surface form.
    std::string with_marker(std::size_t marker, const std::string& body, Rng& rng) const;

    std::vector<Document> corpus(const SyntheticCorpusConfig& cfg) const;

private:
    std::string words_sentence(Rng& rng, const std::vector<std::string>& extra, bool capitalize) const;

    std::vector<std::string> markers_;
    SyntheticLanguageConfig cfg_;
    std::vector<std::vector<std::string>> family_cues_;
    std::vector<std::vector<std::string>> setup_cues_;
    std::vector<std::vector<std::string>> marker_cues_;
};

// Blank-line separated paragraphs, the plain-text corpus format.
std::string render_plain_corpus(const std::vector<Document>& docs);

} // namespace discsense
