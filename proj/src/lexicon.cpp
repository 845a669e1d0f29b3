#include "discsense/lexicon.hpp"

#include "discsense/error.hpp"
#include "discsense/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace discsense {

namespace {

constexpr std::array<std::string_view, 174> kDiscoveryMarkers = {
    "absolutely,",      "accordingly",     "actually,",        "additionally",     "admittedly,",
    "afterward",        "again,",          "already,",         "also,",            "alternately,",
    "alternatively",    "although,",       "altogether,",      "amazingly,",       "and",
    "anyway,",          "apparently,",     "arguably,",        "as a result,",     "basically,",
    "because of that",  "because of this", "besides,",         "but",              "by comparison,",
    "by contrast,",     "by doing this,",  "by then",          "certainly,",       "clearly,",
    "coincidentally,",  "collectively,",   "consequently",     "conversely",       "curiously,",
    "currently,",       "elsewhere,",      "especially,",      "essentially,",     "eventually,",
    "evidently,",       "finally,",        "first,",           "firstly,",         "for example,",
    "for instance,",    "fortunately,",    "frankly,",         "frequently,",      "further,",
    "furthermore",      "generally,",      "gradually,",       "granted,",         "hence,",
    "historically,",    "honestly,",       "hopefully,",       "however",          "ideally,",
    "immediately,",     "importantly,",    "in addition,",     "in contrast,",     "in fact,",
    "in other words",   "in particular,",  "in retrospect,",   "in short,",        "in sum,",
    "in the end,",      "in the meantime,", "in turn,",        "incidentally,",    "increasingly,",
    "indeed,",          "inevitably,",     "initially,",       "instead,",         "interestingly,",
    "ironically,",      "lastly,",         "lately,",          "later,",           "likewise,",
    "locally,",         "luckily,",        "maybe,",           "meaning,",         "meantime,",
    "meanwhile,",       "moreover",        "mostly,",          "namely,",          "nationally,",
    "naturally,",       "nevertheless",    "next,",            "nonetheless",      "normally,",
    "notably,",         "now,",            "obviously,",       "occasionally,",    "oddly,",
    "often,",           "on the contrary,", "on the other hand", "once,",          "only,",
    "optionally,",      "or,",             "originally,",      "otherwise,",       "overall,",
    "particularly,",    "perhaps,",        "personally,",      "plus,",            "preferably,",
    "presently,",       "presumably,",     "previously,",      "probably,",        "rather,",
    "realistically,",   "really,",         "recently,",        "regardless,",      "remarkably,",
    "sadly,",           "second,",         "secondly,",        "separately,",      "seriously,",
    "significantly,",   "similarly,",      "simultaneously",   "slowly,",          "so,",
    "sometimes,",       "soon,",           "specifically,",    "still,",           "strangely,",
    "subsequently,",    "suddenly,",       "supposedly,",      "surely,",          "surprisingly,",
    "technically,",     "thankfully,",     "then,",            "theoretically,",   "thereafter,",
    "thereby,",         "therefore",       "third,",           "thirdly,",         "this,",
    "though,",          "thus,",           "together,",        "traditionally,",   "truly,",
    "truthfully,",      "typically,",      "ultimately,",      "undoubtedly,",     "unfortunately,",
    "unsurprisingly,",  "usually,",        "well,",            "yet,",
};

std::string strip_comma(std::string_view s) {
    if (!s.empty() && s.back() == ',') s.remove_suffix(1);
    return std::string(text::trim(s));
}

} // namespace

MarkerLexicon::MarkerLexicon(std::vector<MarkerEntry> entries) : entries_(std::move(entries)) {
    std::unordered_map<std::string, std::size_t> variant_owner;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto& e = entries_[i];
        e.canonical = text::to_lower(text::trim(e.canonical));
        if (e.canonical.empty() || e.canonical == ",") throw ConfigError("lexicon: empty canonical marker");
        if (e.canonical == kNoneClass || e.canonical == text::to_lower(kNoneClass)) {
            throw ConfigError("lexicon: 'NONE' is reserved for the non-adjacent class");
        }
        if (!index_.emplace(e.canonical, i).second) {
            throw ConfigError("lexicon: duplicate canonical marker '" + e.canonical + "'");
        }

        std::vector<std::string> variants{strip_comma(e.canonical)};
        for (const auto& v : e.variants) {
            std::string norm = strip_comma(text::to_lower(v));
            if (norm.empty()) throw ConfigError("lexicon: empty variant for '" + e.canonical + "'");
            if (std::find(variants.begin(), variants.end(), norm) == variants.end()) variants.push_back(norm);
        }
        e.variants = std::move(variants);

        const bool comma_required = e.canonical.back() == ',';
        for (const auto& v : e.variants) {
            auto [it, inserted] = variant_owner.emplace(v, i);
            if (!inserted) {
                throw ConfigError("lexicon: variant '" + v + "' belongs to both '" + entries_[it->second].canonical +
                                  "' and '" + e.canonical + "'");
            }
            variants_.push_back({v, i, comma_required});
        }
    }
    std::sort(variants_.begin(), variants_.end(), [](const Variant& a, const Variant& b) {
        if (a.text.size() != b.text.size()) return a.text.size() > b.text.size();
        return a.text < b.text;
    });
}

MarkerLexicon MarkerLexicon::discovery_default() {
    std::vector<MarkerEntry> entries;
    entries.reserve(kDiscoveryMarkers.size());
    for (auto m : kDiscoveryMarkers) entries.push_back({std::string(m), {}});
    return MarkerLexicon(std::move(entries));
}

MarkerLexicon MarkerLexicon::parse(std::istream& in, const std::string& source_name) {
    std::vector<MarkerEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        auto fields = text::split(line, '\t');
        if (fields.size() > 2) throw ParseError(source_name, line_no, "expected at most 2 tab-separated fields");
        MarkerEntry entry{std::string(text::trim(fields[0])), {}};
        if (entry.canonical.empty()) throw ParseError(source_name, line_no, "empty canonical marker");
        if (fields.size() == 2) {
            for (auto v : text::split(fields[1], ',')) {
                auto t = text::trim(v);
                if (!t.empty()) entry.variants.emplace_back(t);
            }
        }
        entries.push_back(std::move(entry));
    }
    try {
        return MarkerLexicon(std::move(entries));
    } catch (const ConfigError& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
}

MarkerLexicon MarkerLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file " + path.string());
    return parse(in, path.string());
}

void MarkerLexicon::write(std::ostream& out) const {
    for (const auto& e : entries_) {
        out << e.canonical;
        if (e.variants.size() > 1) {
            out << '\t';
            for (std::size_t i = 1; i < e.variants.size(); ++i) out << (i > 1 ? "," : "") << e.variants[i];
        }
        out << '\n';
    }
}

void MarkerLexicon::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write lexicon file " + path.string());
    write(out);
}

MarkerLexicon MarkerLexicon::subset(const std::vector<std::string>& canonicals) const {
    std::unordered_set<std::string> wanted;
    for (const auto& c : canonicals) {
        if (!contains(c)) throw ConfigError("lexicon subset: unknown marker '" + c + "'");
        wanted.insert(c);
    }
    std::vector<MarkerEntry> kept;
    for (const auto& e : entries_) {
        if (wanted.count(e.canonical)) kept.push_back(e);
    }
    return MarkerLexicon(std::move(kept));
}

bool MarkerLexicon::contains(std::string_view canonical) const {
    return index_.find(std::string(canonical)) != index_.end();
}

std::vector<std::string> MarkerLexicon::class_names() const {
    std::vector<std::string> names;
    names.reserve(entries_.size() + 1);
    for (const auto& e : entries_) names.push_back(e.canonical);
    names.emplace_back(kNoneClass);
    return names;
}

std::optional<MarkerMatch> match_marker(std::string_view sentence, const MarkerLexicon& lexicon) {
    sentence = text::trim(sentence);
    if (sentence.empty()) return std::nullopt;
    // Only the longest possible prefix needs folding.
    std::size_t longest = lexicon.variants_by_length().empty() ? 0 : lexicon.variants_by_length().front().text.size();
    const std::string head = text::to_lower(sentence.substr(0, std::min(sentence.size(), longest)));

    for (const auto& v : lexicon.variants_by_length()) {
        const std::size_t n = v.text.size();
        if (n > head.size() || head.compare(0, n, v.text) != 0) continue;
        std::size_t pos = n;
        if (pos < sentence.size() && text::is_word_byte(static_cast<unsigned char>(sentence[pos]))) continue;
        if (pos < sentence.size() && sentence[pos] == ',') {
            ++pos;
        } else if (v.comma_required) {
            continue;
        }
        while (pos < sentence.size() && text::is_space(static_cast<unsigned char>(sentence[pos]))) ++pos;
        const auto rest = sentence.substr(pos);
        if (std::none_of(rest.begin(), rest.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); })) {
            continue;
        }
        return MarkerMatch{lexicon.entries()[v.entry].canonical, std::string(sentence.substr(pos))};
    }
    return std::nullopt;
}

} // namespace discsense
