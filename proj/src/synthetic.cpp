#include "discsense/synthetic.hpp"

#include "discsense/error.hpp"
#include "discsense/hashing.hpp"

#include <array>
#include <string_view>
#include <unordered_set>

namespace discsense {

namespace {

constexpr std::array<std::string_view, 9> kStarters = {"the", "a", "my", "our", "their", "every", "some", "his", "her"};

constexpr std::array<std::string_view, 120> kGeneric = {
    "house",   "river",   "table",   "window",  "garden",  "market",  "city",    "road",    "letter",  "school",
    "teacher", "doctor",  "child",   "friend",  "family",  "office",  "meeting", "report",  "project", "system",
    "team",    "company", "price",   "money",   "time",    "year",    "week",    "morning", "evening", "night",
    "water",   "coffee",  "bread",   "music",   "movie",   "book",    "story",   "song",    "game",    "car",
    "train",   "plane",   "phone",   "screen",  "paper",   "door",    "wall",    "floor",   "chair",   "kitchen",
    "went",    "saw",     "made",    "took",    "found",   "gave",    "told",    "asked",   "called",  "kept",
    "moved",   "opened",  "closed",  "built",   "bought",  "sold",    "wrote",   "read",    "played",  "watched",
    "was",     "had",     "looked",  "seemed",  "became",  "stayed",  "left",    "brought", "sent",    "carried",
    "big",     "small",   "old",     "new",     "long",    "short",   "early",   "late",    "quiet",   "busy",
    "green",   "blue",    "red",     "warm",    "cold",    "bright",  "dark",    "simple",  "heavy",   "light",
    "to",      "the",     "of",      "in",      "on",      "with",    "for",     "from",    "at",      "by",
    "near",    "over",    "under",   "into",    "about",   "around",  "through", "across",  "behind",  "along",
};

constexpr std::array<std::string_view, 16> kOnsets = {"b", "d", "f", "g", "k", "l", "m", "n",
                                                      "p", "r", "s", "t", "v", "z", "br", "tr"};
constexpr std::array<std::string_view, 6> kNuclei = {"a", "e", "i", "o", "u", "ai"};
constexpr std::array<std::string_view, 5> kCodas = {"", "n", "r", "s", "x"};

// Three-syllable pseudo-word, unique per (space, index) with high probability.
std::string pseudo_word(std::uint64_t space, std::uint64_t index) {
    std::uint64_t h = mix64(space * 0x100000001b3ULL ^ mix64(index));
    std::string w;
    for (int s = 0; s < 3; ++s) {
        w += kOnsets[h % kOnsets.size()];
        h /= kOnsets.size();
        w += kNuclei[h % kNuclei.size()];
        h /= kNuclei.size();
    }
    w += kCodas[h % kCodas.size()];
    return w;
}

std::string capitalize(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

char terminal(Rng& rng) {
    const auto r = rng.uniform_below(20);
    return r == 0 ? '?' : (r == 1 ? '!' : '.');
}

} // namespace

SyntheticLanguage::SyntheticLanguage(std::vector<std::string> markers, SyntheticLanguageConfig cfg)
    : markers_(std::move(markers)), cfg_(cfg) {
    if (markers_.empty()) throw ConfigError("synthetic language needs at least one marker");
    if (cfg_.families == 0) throw ConfigError("synthetic language needs at least one family");
    std::unordered_set<std::string> used;
    auto fresh = [&](std::uint64_t space) {
        for (std::uint64_t i = 0;; ++i) {
            auto w = pseudo_word(cfg_.seed ^ space, i + used.size() * 7919);
            if (used.insert(w).second) return w;
        }
    };
    family_cues_.resize(cfg_.families);
    setup_cues_.resize(cfg_.families);
    for (std::size_t f = 0; f < cfg_.families; ++f) {
        for (int i = 0; i < 6; ++i) family_cues_[f].push_back(fresh(1));
        for (int i = 0; i < 6; ++i) setup_cues_[f].push_back(fresh(2));
    }
    marker_cues_.resize(markers_.size());
    for (std::size_t m = 0; m < markers_.size(); ++m) {
        for (int i = 0; i < 3; ++i) marker_cues_[m].push_back(fresh(3));
    }
}

std::string SyntheticLanguage::words_sentence(Rng& rng, const std::vector<std::string>& extra, bool cap) const {
    const std::size_t len = 4 + rng.uniform_below(8);
    std::vector<std::string> toks;
    toks.emplace_back(kStarters[rng.uniform_below(kStarters.size())]);
    for (std::size_t i = 0; i < len; ++i) toks.emplace_back(kGeneric[rng.uniform_below(kGeneric.size())]);
    for (const auto& e : extra) toks.insert(toks.begin() + 1 + static_cast<std::ptrdiff_t>(rng.uniform_below(toks.size())), e);
    std::string s;
    for (const auto& t : toks) {
        if (!s.empty()) s.push_back(' ');
        s += t;
    }
    s.push_back(terminal(rng));
    return cap ? capitalize(std::move(s)) : s;
}

std::string SyntheticLanguage::filler_sentence(Rng& rng) const { return words_sentence(rng, {}, true); }

std::string SyntheticLanguage::setup_sentence(std::size_t marker, Rng& rng) const {
    std::vector<std::string> extra;
    const auto& cues = setup_cues_[family_of(marker)];
    if (rng.bernoulli(cfg_.setup_cue_rate)) extra.push_back(cues[rng.uniform_below(cues.size())]);
    return words_sentence(rng, extra, true);
}

std::string SyntheticLanguage::continuation(std::size_t marker, Rng& rng) const {
    std::vector<std::string> extra;
    const auto& fam = family_cues_[family_of(marker)];
    if (rng.bernoulli(cfg_.family_cue_rate)) extra.push_back(fam[rng.uniform_below(fam.size())]);
    const auto& own = marker_cues_[marker];
    if (rng.bernoulli(cfg_.marker_cue_rate)) extra.push_back(own[rng.uniform_below(own.size())]);
    return words_sentence(rng, extra, false);
}

std::string SyntheticLanguage::with_marker(std::size_t marker, const std::string& body, Rng& rng) const {
    std::string surface = markers_[marker];
    const bool has_comma = !surface.empty() && surface.back() == ',';
    if (!has_comma && rng.bernoulli(0.5)) surface.push_back(',');
    return capitalize(surface) + " " + body;
}

std::vector<Document> SyntheticLanguage::corpus(const SyntheticCorpusConfig& cfg) const {
    if (cfg.min_sentences < 1 || cfg.max_sentences < cfg.min_sentences) {
        throw ConfigError("synthetic corpus: bad sentence count range");
    }
    std::vector<Document> docs;
    docs.reserve(cfg.documents);
    for (std::size_t d = 0; d < cfg.documents; ++d) {
        Document doc;
        doc.doc_id = cfg.id_prefix + "-" + std::to_string(d);
        Rng rng(derive_seed(cfg.seed, doc.doc_id));
        const std::size_t n = cfg.min_sentences + rng.uniform_below(cfg.max_sentences - cfg.min_sentences + 1);
        doc.sentences.push_back(filler_sentence(rng));
        bool previous_has_marker = false;
        while (doc.sentences.size() < n) {
            if (rng.bernoulli(cfg.marker_rate)) {
                const std::size_t m = rng.uniform_below(markers_.size());
                if (!previous_has_marker) doc.sentences.back() = setup_sentence(m, rng);
                doc.sentences.push_back(with_marker(m, continuation(m, rng), rng));
                previous_has_marker = true;
            } else {
                doc.sentences.push_back(filler_sentence(rng));
                previous_has_marker = false;
            }
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::string render_plain_corpus(const std::vector<Document>& docs) {
    std::string out;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (d) out += "\n";
        std::size_t col = 0;
        for (const auto& s : docs[d].sentences) {
            if (col > 0 && col + s.size() > 78) {
                out += "\n";
                col = 0;
            } else if (col > 0) {
                out += " ";
                ++col;
            }
            out += s;
            col += s.size();
        }
        out += "\n";
    }
    return out;
}

} // namespace discsense
